"""Tests for results parsing, tournament validation and official scoring."""

from collections.abc import Callable
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from pcm_rank.error.exceptions import ResultsParseError, TournamentValidationError
from pcm_rank.tournament import (
    MatchRecord,
    Team,
    TeamScore,
    Tournament,
    compute_score_table,
    export_score_table,
    load_tournament,
    match_points_for,
    parse_results,
    parse_roster,
    result_distribution,
    serialize_results,
)
from pcm_rank.tournament.export import export_result_distribution
from pcm_rank.tournament.models import GAME_POINT_GRID

HEADER = "round,team_a,team_b,game_points_a\n"


def results(*rows: str) -> bytes:
    return (HEADER + "".join(f"{row}\n" for row in rows)).encode("utf-8")


class TestParseResults:
    """Tests for the results CSV parser."""

    def test_infers_teams_in_order_of_appearance(self) -> None:
        """Test that teams come from the rows when there is no roster."""
        t = parse_results(results("1,UKR,RUS1,2.5", "1,HUN,ISR,2", "2,UKR,HUN,3"))
        assert t.team_ids == ("UKR", "RUS1", "HUN", "ISR")
        assert t.rounds == 2
        assert len(t) == 3
        assert t.matches[0].game_points_b == Fraction(3, 2)
        assert all(team.start_rank is None for team in t.teams)

    def test_accepts_bom_and_whitespace(self) -> None:
        t = parse_results(b"\xef\xbb\xbf" + results(" 1 , A , B , 3.5 "))
        assert t.matches[0] == MatchRecord(1, "A", "B", Fraction(7, 2))

    def test_bad_header(self) -> None:
        """Test that a wrong header is reported on line 1."""
        with pytest.raises(ResultsParseError) as exc_info:
            parse_results(b"round,a,b,points\n1,A,B,2\n")
        assert exc_info.value.line == 1

    @pytest.mark.parametrize(
        ("row", "code"),
        [
            ("1,A,A,2", "duplicate_team_in_match"),
            ("1,A,B,2.25", "off_grid_game_points"),
            ("1,A,B,4.5", "off_grid_game_points"),
        ],
    )
    def test_match_invariants(self, row: str, code: str) -> None:
        """Test that invalid matches are reported with their line number."""
        with pytest.raises(ResultsParseError) as exc_info:
            parse_results(results("1,C,D,2", row))
        assert exc_info.value.line == 3
        assert exc_info.value.custom_args["code"] == code

    def test_duplicate_pair(self) -> None:
        """Test that two teams cannot meet twice."""
        with pytest.raises(ResultsParseError) as exc_info:
            parse_results(results("1,A,B,2", "1,C,D,2", "2,B,A,3"))
        assert exc_info.value.line == 4
        assert exc_info.value.custom_args["code"] == "duplicate_pair"

    def test_team_plays_twice_in_round(self) -> None:
        with pytest.raises(ResultsParseError) as exc_info:
            parse_results(results("1,A,B,2", "1,A,C,2"))
        assert exc_info.value.custom_args["code"] == "duplicate_team_round"

    def test_malformed_row(self) -> None:
        """Test that type errors carry per-field messages."""
        with pytest.raises(ResultsParseError) as exc_info:
            parse_results(results("1,A,B,2", "x,C,D,two"))
        assert exc_info.value.line == 3
        assert set(exc_info.value.fields) == {"round", "game_points_a"}

    def test_missing_column(self) -> None:
        with pytest.raises(ResultsParseError) as exc_info:
            parse_results(results("1,A,B"))
        assert exc_info.value.line == 2

    def test_unknown_team_with_roster(self) -> None:
        """Test that rows may only reference roster teams."""
        roster = (Team("A"), Team("B"))
        with pytest.raises(ResultsParseError) as exc_info:
            parse_results(results("1,A,Z,2"), teams=roster)
        assert exc_info.value.custom_args["code"] == "unknown_team"

    def test_round_trip(self, swiss_tournament: Tournament) -> None:
        """Test that parse(serialize(t)) reproduces the tournament."""
        text = serialize_results(swiss_tournament)
        again = parse_results(text.encode("utf-8"), teams=swiss_tournament.teams)
        assert again == swiss_tournament

    def test_load_from_files(
        self, swiss_tournament: Tournament, write_tournament: Callable[[Tournament], tuple[Path, Path]]
    ) -> None:
        results_path, roster_path = write_tournament(swiss_tournament)
        loaded = load_tournament(results_path, roster_path)
        assert loaded == swiss_tournament
        assert loaded.teams_by_id["T01"].start_rank == 1


class TestParseRoster:
    """Tests for the roster CSV parser."""

    def test_blank_start_rank(self) -> None:
        teams = parse_roster(b"id,name,start_rank\nUKR,Ukraine,\nHUN,Hungary,\n")
        assert teams == (Team("UKR", "Ukraine", None), Team("HUN", "Hungary", None))
        assert teams[0].display_name == "Ukraine"

    def test_duplicate_id(self) -> None:
        with pytest.raises(ResultsParseError) as exc_info:
            parse_roster(b"id,name,start_rank\nA,a,1\nA,b,2\n")
        assert exc_info.value.line == 3

    def test_start_ranks_must_be_permutation(self) -> None:
        with pytest.raises(ResultsParseError):
            parse_roster(b"id,name,start_rank\nA,a,1\nB,b,3\n")


class TestTournament:
    """Tests for direct Tournament construction."""

    def test_duplicate_team_ids(self) -> None:
        with pytest.raises(TournamentValidationError):
            Tournament(teams=(Team("A"), Team("A")), rounds=1)

    def test_rounds_must_be_positive(self) -> None:
        with pytest.raises(TournamentValidationError):
            Tournament(teams=(Team("A"),), rounds=0)

    def test_round_out_of_range(self) -> None:
        with pytest.raises(TournamentValidationError):
            Tournament(teams=(Team("A"), Team("B")), rounds=1, matches=(MatchRecord(2, "A", "B", Fraction(2)),))

    def test_matches_of(self, small_tournament: Tournament) -> None:
        assert [m.opponent_of("A") for m in small_tournament.matches_of("A")] == ["B", "C"]


class TestScoring:
    """Tests for match points and the TB1-TB4 quantities."""

    @pytest.mark.parametrize("points", GAME_POINT_GRID)
    def test_match_points_conserved(self, points: Fraction) -> None:
        """Test that the two awards of a match always sum to 2."""
        assert match_points_for(points) + match_points_for(4 - points) == 2

    def test_small_tournament(self, small_tournament: Tournament) -> None:
        """Test hand-computed score lines."""
        table = compute_score_table(small_tournament)
        assert [s.TB1 for s in table] == [4, 2, 1, 1]
        assert [s.TB3 for s in table] == [Fraction(11, 2), 5, Fraction(7, 2), 2]
        assert [s.TB2 for s in table] == [6, 4, 6, 0]
        assert [s.TB4 for s in table] == [2, 4, 4, 2]
        assert [s.mix_factor for s in table] == [3, 2, Fraction(3, 2), Fraction(3, 2)]
        assert table["A"].sonneborn_berger_excluded == "C"
        assert table["D"].buchholz_excluded == "C"
        assert table.metadata["late_arrivals"] == []

    def test_lowest_tie_excludes_one_opponent(self, tournament_factory: Callable[..., Tournament]) -> None:
        """Test that only one of several lowest opponents is excluded."""
        t = tournament_factory(
            [
                (1, "X", "L1", 4),
                (2, "X", "L2", 3),
                (3, "X", "W", 2),
                (1, "W", "Y", 4),
            ]
        )
        table = compute_score_table(t)
        # L1 and L2 both end on 0 match points with equal terms; the smaller id goes.
        assert table["X"].buchholz_excluded == "L1"
        assert table["X"].sonneborn_berger_excluded == "L1"
        assert table["X"].TB4 == 0 + table["W"].TB1

    def test_lowest_tie_with_different_contributions(self, tournament_factory: Callable[..., Tournament]) -> None:
        """Test that tied lowest opponents are separated by contribution before id."""
        t = tournament_factory(
            [
                (1, "T", "P", 3),
                (1, "Q", "R", 2),
                (1, "S", "U", 3),
                (2, "T", "Q", 2),
                (2, "P", "S", 3),
                (2, "R", "U", 4),
                (3, "T", "R", 2.5),
                (3, "P", "U", 2),
                (3, "Q", "S", 2),
            ]
        )
        table = compute_score_table(t)
        assert [table[team].TB1 for team in "PQR"] == [3, 3, 3]
        # SB terms 3 * 3, 3 * 2 and 3 * 2.5: Q contributes least.
        assert table["T"].sonneborn_berger_excluded == "Q"
        assert table["T"].TB2 == Fraction(33, 2)
        # Buchholz terms are all 3, so the smallest id goes.
        assert table["T"].buchholz_excluded == "P"
        assert table["T"].TB4 == 6

    def test_round_robin(self, tournament_factory: Callable[..., Tournament]) -> None:
        """Test a four-team round robin against hand-computed TB1-TB4."""
        t = tournament_factory(
            [
                (1, "A", "B", 3),
                (1, "C", "D", 2.5),
                (2, "A", "C", 2),
                (2, "B", "D", 4),
                (3, "A", "D", 1.5),
                (3, "B", "C", 3.5),
            ]
        )
        table = compute_score_table(t)
        assert [s.team_id for s in table] == ["A", "B", "C", "D"]
        assert [s.TB1 for s in table] == [3, 4, 3, 2]
        assert [s.TB3 for s in table] == [Fraction(13, 2), Fraction(17, 2), 5, 4]
        assert [s.TB2 for s in table] == [18, Fraction(27, 2), 8, Fraction(15, 2)]
        assert [s.TB4 for s in table] == [7, 6, 7, 7]
        assert [s.mix_factor for s in table] == [2, Fraction(7, 3), 2, Fraction(5, 3)]
        assert [s.sonneborn_berger_excluded for s in table] == ["D", "D", "D", "C"]
        assert [s.buchholz_excluded for s in table] == ["D", "D", "D", "A"]

    def test_mix_factor_of_long_record(self, tournament_factory: Callable[..., Tournament]) -> None:
        """Test F = 28/11 for seven wins, three draws and one loss."""
        opponents = [f"O{k:02d}" for k in range(1, 12)]
        points = [3] * 7 + [2] * 3 + [1]
        t = tournament_factory([(r, "H", o, p) for r, (o, p) in enumerate(zip(opponents, points), start=1)])
        score = compute_score_table(t)["H"]
        assert (score.wins, score.draws, score.losses, score.matches) == (7, 3, 1, 11)
        assert score.TB1 == 17
        assert score.mix_factor == Fraction(28, 11)
        assert score.TB4 == 5
        assert score.TB2 == 8
        assert score.buchholz_excluded == "O01"

    def test_worked_keys(self) -> None:
        """Test the Buchholz and Mix keys on a hand-written score line."""
        score = TeamScore(
            team_id="X",
            matches=10,
            wins=7,
            draws=0,
            losses=3,
            match_points=14,
            game_points=Fraction(25),
            sonneborn_berger=Fraction(200),
            buchholz=20,
            mix_factor=Fraction(2),
        )
        assert score.buchholz_key == 28
        assert replace(score, buchholz=15).mix_score == 230

    def test_late_arrivals(self, tournament_factory: Callable[..., Tournament]) -> None:
        """Test that teams with fewer matches are scored on what they played."""
        t = tournament_factory([(1, "A", "B", 3), (2, "A", "C", 1), (2, "B", "D", 2)])
        table = compute_score_table(t)
        assert set(table.metadata["late_arrivals"]) == {"C", "D"}
        assert table["C"].matches == 1
        assert table["C"].mix_factor == 3

    def test_tb1_identity_on_random_tournaments(self, swiss_tournament: Tournament) -> None:
        """Test TB1 = 2 * wins + draws and TB3 sums to 4 per match."""
        table = compute_score_table(swiss_tournament)
        for score in table:
            assert score.TB1 == 2 * score.wins + score.draws
        assert sum(s.TB3 for s in table) == 4 * len(swiss_tournament)
        assert sum(s.TB1 for s in table) == 2 * len(swiss_tournament)

    def test_result_distribution(self, small_tournament: Tournament) -> None:
        """Test that draws are binned at 2 and every bin is present."""
        histogram = result_distribution(small_tournament)
        assert list(histogram) == [Fraction(k, 2) for k in range(4, 9)]
        assert list(histogram.values()) == [1, 1, 1, 0, 1]

    def test_result_distribution_random(self) -> None:
        rng = np.random.default_rng(7)
        ids = [f"P{k}" for k in range(10)]
        matches = []
        for r in range(1, 4):
            order = rng.permutation(10)
            for a, b in zip(order[::2], order[1::2]):
                matches.append(MatchRecord(r, ids[a], ids[b], GAME_POINT_GRID[int(rng.integers(9))]))
        # random pairings may repeat; keep the first meeting of every pair
        seen: set[frozenset[str]] = set()
        unique = []
        for match in matches:
            if match.pair not in seen:
                seen.add(match.pair)
                unique.append(match)
        t = Tournament(teams=tuple(Team(i) for i in ids), rounds=3, matches=tuple(unique))
        assert sum(result_distribution(t).values()) == len(unique)


class TestExport:
    """Tests for score table and result distribution files."""

    def test_score_table_files(self, small_tournament: Tournament, tmp_path: Path) -> None:
        table = compute_score_table(small_tournament)
        written = export_score_table(table, small_tournament, tmp_path, ("csv", "json"))
        assert [p.name for p in written] == ["score-table.csv", "score-table.json"]
        lines = (tmp_path / "score-table.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("team_id,team_name,matches,wins,draws,losses,match_points")
        assert lines[1].startswith("A,A,2,2,0,0,4,5.5,6.0,2,3.0")

    def test_result_distribution_csv(self, small_tournament: Tournament, tmp_path: Path) -> None:
        export_result_distribution(result_distribution(small_tournament), tmp_path, ("csv",))
        text = (tmp_path / "result-distribution.csv").read_text(encoding="utf-8")
        assert text == "winner_game_points,matches\n2.0,1\n2.5,1\n3.0,1\n3.5,0\n4.0,1\n"
