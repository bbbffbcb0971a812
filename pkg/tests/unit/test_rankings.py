"""Tests for ranking construction and ranking files."""

import json
from collections.abc import Callable
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from pcm_rank.error.exceptions import InputError
from pcm_rank.rankings import (
    Ranking,
    buchholz_ranking,
    export_rankings,
    load_rankings,
    mix_averages,
    mix_ranking,
    official_final_ranking,
    ranking_from_weights,
    sonneborn_berger_ranking,
    start_ranking,
)
from pcm_rank.solvers import WeightVector
from pcm_rank.tournament import MatchRecord, Tournament, compute_score_table


class TestRankingModel:
    def test_positions(self) -> None:
        ranking = Ranking(label="X", order=("b", "a", "c"), method="custom")
        assert ranking["a"] == 2
        assert ranking.position_vector(["a", "b", "c"]) == [2, 1, 3]
        assert list(ranking) == ["b", "a", "c"]
        assert len(ranking) == 3
        assert not ranking.ties_broken

    def test_duplicate_team(self) -> None:
        with pytest.raises(InputError):
            Ranking(label="X", order=("a", "a"), method="custom")

    def test_from_positions(self) -> None:
        ranking = Ranking.from_positions("Y", {"a": 3, "b": 1, "c": 2})
        assert ranking.order == ("b", "c", "a")
        assert ranking.slug == "custom"

    def test_from_positions_requires_permutation(self) -> None:
        with pytest.raises(InputError):
            Ranking.from_positions("Y", {"a": 1, "b": 3})

    def test_slug(self) -> None:
        assert Ranking(label="A-LLSM", order=(), method="llsm", scale="A").slug == "llsm-A"


class TestTieBreakRankings:
    """Rankings of the small tournament, worked out by hand."""

    def test_final(self, small_tournament: Tournament) -> None:
        ranking = official_final_ranking(compute_score_table(small_tournament))
        assert ranking.label == "Final"
        assert ranking.order == ("A", "B", "C", "D")
        assert not ranking.ties_broken
        assert ranking.key_values == {"A": 4.0, "B": 2.0, "C": 1.0, "D": 1.0}

    def test_sonneborn_berger(self, small_tournament: Tournament) -> None:
        ranking = sonneborn_berger_ranking(compute_score_table(small_tournament))
        assert ranking.order == ("A", "C", "B", "D")
        assert ranking.key_values["C"] == 6.0

    def test_buchholz(self, small_tournament: Tournament) -> None:
        ranking = buchholz_ranking(compute_score_table(small_tournament))
        assert ranking.order == ("A", "B", "C", "D")
        assert ranking.key_values == {"A": 4.0, "B": 4.0, "C": 2.0, "D": 1.0}

    def test_mix(self, small_tournament: Tournament) -> None:
        """Test that a complete tie of Mix score and TB2 is broken by id and reported."""
        ranking = mix_ranking(compute_score_table(small_tournament))
        assert ranking.order == ("A", "C", "B", "D")
        assert ranking.tie_groups == (("A", "C"),)
        assert ranking.ties_broken
        assert ranking.key_values == {"A": 12.0, "B": 12.0, "C": 12.0, "D": 3.0}

    def test_mix_averages(self, small_tournament: Tournament) -> None:
        averages = mix_averages(compute_score_table(small_tournament))
        assert averages == {"sonneborn_berger_mean": 4.0, "weighted_buchholz_mean": 5.75}

    def test_identical_teams_tie(self, tournament_factory: Callable[..., Tournament]) -> None:
        """Two drawn matches leave every key equal, so ids decide."""
        t = tournament_factory([(1, "Z", "Y", 2), (1, "X", "W", 2)])
        ranking = official_final_ranking(compute_score_table(t))
        assert ranking.order == ("W", "X", "Y", "Z")
        assert ranking.tie_groups == (("W", "X", "Y", "Z"),)

    def test_row_order_invariance(self, swiss_tournament: Tournament) -> None:
        """Test that shuffling and mirroring the result rows leaves the Final ranking unchanged."""
        rng = np.random.default_rng(3)
        rows = [swiss_tournament.matches[k] for k in rng.permutation(len(swiss_tournament))]
        mirrored = tuple(MatchRecord(m.round, m.team_b, m.team_a, m.game_points_b) for m in rows)
        shuffled = replace(swiss_tournament, matches=mirrored)
        expected = official_final_ranking(compute_score_table(swiss_tournament))
        ranking = official_final_ranking(compute_score_table(shuffled))
        assert ranking.order == expected.order
        assert ranking.tie_groups == expected.tie_groups

    @pytest.mark.parametrize("seed", range(5))
    def test_strict_match_points_decide_final(self, seed: int, tournament_factory: Callable[..., Tournament]) -> None:
        """Test that distinct match points fix the Final order whatever the other keys say."""
        rng = np.random.default_rng(seed)
        ids = [f"P{k}" for k in range(6)]
        # circle method; the lower index always wins so match points are 10, 8, ..., 0
        rotation = ids[1:]
        matches = []
        for r in range(1, 6):
            line = [ids[0], *rotation]
            for a, b in zip(line[:3], line[:2:-1]):
                winner, loser = sorted((a, b))
                matches.append((r, loser, winner, str(rng.choice(["0", "0.5", "1", "1.5"]))))
            rotation = rotation[-1:] + rotation[:-1]
        table = compute_score_table(tournament_factory(matches, team_ids=ids))
        assert sorted(s.TB1 for s in table) == [0, 2, 4, 6, 8, 10]
        ranking = official_final_ranking(table)
        assert list(ranking.order) == ids
        assert not ranking.ties_broken

    def test_every_ranking_is_a_permutation(self, swiss_tournament: Tournament) -> None:
        scores = compute_score_table(swiss_tournament)
        for build in (official_final_ranking, sonneborn_berger_ranking, buchholz_ranking, mix_ranking):
            ranking = build(scores)
            assert sorted(ranking.order) == sorted(swiss_tournament.team_ids)


class TestWeightRankings:
    def test_descending_weights(self) -> None:
        weights = WeightVector.normalized(("a", "b", "c"), [1.0, 3.0, 2.0], method="llsm", scale="B")
        ranking = ranking_from_weights(weights)
        assert ranking.order == ("b", "c", "a")
        assert ranking.label == "B-LLSM"
        assert ranking.slug == "llsm-B"
        assert ranking.key_values["b"] == pytest.approx(0.5)

    def test_equal_weights(self) -> None:
        weights = WeightVector.normalized(("c", "a", "b"), np.ones(3), method="em", scale="C")
        ranking = ranking_from_weights(weights)
        assert ranking.order == ("a", "b", "c")
        assert ranking.tie_groups == (("a", "b", "c"),)

    @pytest.mark.parametrize("transform", [np.sqrt, np.square, lambda w: np.exp(5 * w)])
    def test_monotone_transform(self, transform: Callable[[np.ndarray], np.ndarray]) -> None:
        """Test that a strictly increasing transform of the weights keeps the ranking."""
        labels = tuple(f"t{k}" for k in range(9))
        weights = WeightVector.normalized(labels, np.random.default_rng(4).uniform(0.1, 1.0, 9), method="em")
        transformed = WeightVector.normalized(labels, transform(weights.values), method="em")
        assert ranking_from_weights(transformed).order == ranking_from_weights(weights).order


class TestStartRanking:
    def test_from_roster(self, swiss_tournament: Tournament) -> None:
        ranking = start_ranking(swiss_tournament)
        assert ranking.label == "Start"
        assert ranking.order == swiss_tournament.team_ids

    def test_missing_start_rank(self, small_tournament: Tournament) -> None:
        with pytest.raises(InputError):
            start_ranking(small_tournament)


class TestRankingFiles:
    def test_export_and_load(self, small_tournament: Tournament, tmp_path: Path) -> None:
        scores = compute_score_table(small_tournament)
        rankings = [official_final_ranking(scores), mix_ranking(scores)]
        names = {"A": "Alpha"}
        written = export_rankings(rankings, names, tmp_path)
        assert sorted(p.name for p in written) == ["mix.csv", "official.csv", "rankings-table.csv", "rankings.json"]

        lines = (tmp_path / "official.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "position,team_id,team_name,primary_key_value"
        assert lines[1] == "1,A,Alpha,4.0"
        table = (tmp_path / "rankings-table.csv").read_text(encoding="utf-8").splitlines()
        assert table[0] == "team_id,team_name,Final,Mix"
        assert table[2] == "B,B,2,3"

        loaded = load_rankings(tmp_path / "rankings.json")
        assert [r.order for r in loaded] == [r.order for r in rankings]
        assert loaded[1].tie_groups == (("A", "C"),)
        assert loaded[1].metadata["weighted_buchholz_mean"] == 5.75

        bundle = json.loads((tmp_path / "rankings.json").read_text(encoding="utf-8"))
        assert bundle["rankings"][1]["ties_broken"] is True

    def test_json_only(self, small_tournament: Tournament, tmp_path: Path) -> None:
        ranking = official_final_ranking(compute_score_table(small_tournament))
        written = export_rankings([ranking], {}, tmp_path, formats=("json",))
        assert [p.name for p in written] == ["rankings.json"]
