"""Test configuration and fixtures for pcm-rank tests."""

from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from pcm_rank.tournament import MatchRecord, Team, Tournament
from pcm_rank.tournament.models import GAME_POINT_GRID
from pcm_rank.tournament.parsing import serialize_results, serialize_roster

MatchSpec = tuple[int, str, str, str | float]


def make_tournament(matches: Sequence[MatchSpec], team_ids: Sequence[str] | None = None) -> Tournament:
    """Build a tournament from ``(round, team_a, team_b, game_points_a)`` tuples.

    Teams default to their order of first appearance; the round count is the
    highest round used.
    """
    if team_ids is None:
        team_ids = list(dict.fromkeys(team for _, a, b, _ in matches for team in (a, b)))
    records = tuple(MatchRecord(r, a, b, Fraction(str(points))) for r, a, b, points in matches)
    rounds = max((r for r, _, _, _ in matches), default=1)
    return Tournament(teams=tuple(Team(id=t, name=t) for t in team_ids), rounds=rounds, matches=records)


def synthetic_swiss(teams: int = 16, seed: int = 2010) -> Tournament:
    """A 16-team, 5-round tournament with no repeated pairings and a connected graph.

    Rounds 1-4 pair each team with the one whose index differs in a single
    bit (hypercube edges); round 5 pairs each team with its bitwise complement.
    Game points are drawn from the half-point grid with a seeded generator.
    """
    rng = np.random.default_rng(seed)
    ids = [f"T{k:02d}" for k in range(1, teams + 1)]
    masks = [1, 2, 4, 8, teams - 1]
    matches: list[MatchRecord] = []
    for round_number, mask in enumerate(masks, start=1):
        for i in range(teams):
            j = i ^ mask
            if i < j:
                points = GAME_POINT_GRID[int(rng.integers(len(GAME_POINT_GRID)))]
                matches.append(MatchRecord(round_number, ids[i], ids[j], points))
    roster = tuple(Team(id=team_id, name=f"Team {team_id}", start_rank=k) for k, team_id in enumerate(ids, start=1))
    return Tournament(teams=roster, rounds=len(masks), matches=tuple(matches))


@pytest.fixture
def tournament_factory() -> Callable[..., Tournament]:
    """Factory for small hand-written tournaments."""
    return make_tournament


@pytest.fixture
def small_tournament() -> Tournament:
    """Four teams, two rounds, a path A-B-C-D plus the edge A-C.

    Returns:
        Tournament with one match per outcome kind (win, draw, narrow win)
    """
    return make_tournament(
        [
            (1, "A", "B", 3),
            (1, "C", "D", 2),
            (2, "A", "C", 2.5),
            (2, "B", "D", 4),
        ]
    )


@pytest.fixture
def disconnected_tournament() -> Tournament:
    """Two separate pairs of teams."""
    return make_tournament([(1, "A", "B", 3), (1, "C", "D", 1.5)])


@pytest.fixture(scope="session")
def swiss_tournament() -> Tournament:
    return synthetic_swiss()


@pytest.fixture
def write_tournament(tmp_path: Path) -> Callable[[Tournament], tuple[Path, Path]]:
    """Write a tournament as results and roster files under ``tmp_path``."""

    def write(tournament: Tournament) -> tuple[Path, Path]:
        results = tmp_path / "results.csv"
        roster = tmp_path / "roster.csv"
        results.write_text(serialize_results(tournament), encoding="utf-8")
        roster.write_text(serialize_roster(tournament), encoding="utf-8")
        return results, roster

    return write


@pytest.fixture
def cli_runner() -> CliRunner:
    """Click test runner."""
    return CliRunner()
