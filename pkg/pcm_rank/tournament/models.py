"""Tournament data model.

Teams, match records and the tournament container are frozen dataclasses;
validation runs on construction, so every Tournament instance satisfies the
structural rules (unique pairs, one match per team per round, known team ids,
game points on the half-point grid).
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from ..error.exceptions import TournamentValidationError

logger = logging.getLogger(__name__)

# Four boards per match, one game point per board.
GAMES_PER_MATCH = 4
MATCH_TOTAL = Fraction(GAMES_PER_MATCH)
DRAW_POINTS = MATCH_TOTAL / 2
GAME_POINT_GRID: tuple[Fraction, ...] = tuple(Fraction(k, 2) for k in range(2 * GAMES_PER_MATCH + 1))


def is_on_grid(points: Fraction) -> bool:
    """Return True if ``points`` is a half-integer in [0, 4]."""
    return points in GAME_POINT_GRID


@dataclass(frozen=True)
class Team:
    """A participating team.

    Attributes:
        id: Opaque unique identifier (e.g. ``"UKR"``)
        name: Display name
        start_rank: Pre-tournament seed position, if known
    """

    id: str
    name: str = ""
    start_rank: int | None = None

    @property
    def display_name(self) -> str:
        return self.name or self.id


@dataclass(frozen=True)
class MatchRecord:
    """One team match; the opponent's game points are derived, never stored."""

    round: int
    team_a: str
    team_b: str
    game_points_a: Fraction

    @property
    def game_points_b(self) -> Fraction:
        return MATCH_TOTAL - self.game_points_a

    @property
    def pair(self) -> frozenset[str]:
        return frozenset((self.team_a, self.team_b))

    @property
    def winner_points(self) -> Fraction:
        """Game points of the winning side; draws report 2."""
        return max(self.game_points_a, self.game_points_b)

    def involves(self, team_id: str) -> bool:
        return team_id in (self.team_a, self.team_b)

    def points_for(self, team_id: str) -> Fraction:
        """Game points scored by ``team_id`` in this match."""
        if team_id == self.team_a:
            return self.game_points_a
        if team_id == self.team_b:
            return self.game_points_b
        raise KeyError(team_id)

    def opponent_of(self, team_id: str) -> str:
        if team_id == self.team_a:
            return self.team_b
        if team_id == self.team_b:
            return self.team_a
        raise KeyError(team_id)


class MatchIssue(NamedTuple):
    """A structural problem found in a list of matches."""

    index: int
    code: str
    message: str


def find_match_issues(team_ids: Sequence[str], rounds: int, matches: Sequence[MatchRecord]) -> list[MatchIssue]:
    """Check matches against the tournament invariants.

    Args:
        team_ids: Known team identifiers
        rounds: Number of rounds of the tournament
        matches: Matches in input order

    Returns:
        Issues in input order; empty when the matches are valid
    """
    known = set(team_ids)
    seen_pairs: dict[frozenset[str], int] = {}
    seen_team_rounds: dict[tuple[str, int], int] = {}
    issues: list[MatchIssue] = []

    for index, match in enumerate(matches):
        if match.team_a == match.team_b:
            issues.append(MatchIssue(index, "duplicate_team_in_match", f"Team {match.team_a!r} cannot play itself"))
            continue
        if not is_on_grid(match.game_points_a):
            issues.append(
                MatchIssue(index, "off_grid_game_points", f"Game points {match.game_points_a} off the half-point grid")
            )
        if match.round < 1 or match.round > rounds:
            issues.append(MatchIssue(index, "round_out_of_range", f"Round {match.round} outside 1..{rounds}"))
        unknown = [t for t in (match.team_a, match.team_b) if t not in known]
        if unknown:
            issues.append(MatchIssue(index, "unknown_team", f"Unknown team reference: {', '.join(unknown)}"))
        if match.pair in seen_pairs:
            issues.append(
                MatchIssue(
                    index,
                    "duplicate_pair",
                    f"{match.team_a} and {match.team_b} already met (match #{seen_pairs[match.pair] + 1})",
                )
            )
        else:
            seen_pairs[match.pair] = index
        for team in (match.team_a, match.team_b):
            key = (team, match.round)
            if key in seen_team_rounds:
                issues.append(MatchIssue(index, "duplicate_team_round", f"{team} plays twice in round {match.round}"))
            else:
                seen_team_rounds[key] = index

    return issues


def _check_teams(teams: Sequence[Team]) -> None:
    ids = [team.id for team in teams]
    if any(not team_id for team_id in ids):
        raise TournamentValidationError("Team ids must be non-empty")
    duplicates = sorted({team_id for team_id in ids if ids.count(team_id) > 1})
    if duplicates:
        raise TournamentValidationError("Duplicate team ids", duplicates=duplicates)

    ranks = [team.start_rank for team in teams if team.start_rank is not None]
    if teams and len(ranks) == len(teams) and sorted(ranks) != list(range(1, len(teams) + 1)):
        raise TournamentValidationError("Start ranks must form a permutation of 1..n")


@dataclass(frozen=True)
class Tournament:
    """Teams, number of rounds and the materialised matches.

    Teams are kept in roster order, which is also the order of alternatives
    in every comparison matrix built from the tournament.
    """

    teams: tuple[Team, ...]
    rounds: int
    matches: tuple[MatchRecord, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise TournamentValidationError(f"Number of rounds must be positive, got {self.rounds}")
        _check_teams(self.teams)
        issues = find_match_issues(self.team_ids, self.rounds, self.matches)
        if issues:
            first = issues[0]
            raise TournamentValidationError(
                first.message,
                code=first.code,
                match=first.index + 1,
                issues=len(issues),
            )

    @cached_property
    def team_ids(self) -> tuple[str, ...]:
        return tuple(team.id for team in self.teams)

    @cached_property
    def team_index(self) -> dict[str, int]:
        return {team_id: i for i, team_id in enumerate(self.team_ids)}

    @cached_property
    def teams_by_id(self) -> dict[str, Team]:
        return {team.id: team for team in self.teams}

    @cached_property
    def _matches_by_team(self) -> dict[str, tuple[MatchRecord, ...]]:
        grouped: dict[str, list[MatchRecord]] = {team_id: [] for team_id in self.team_ids}
        for match in self.matches:
            grouped[match.team_a].append(match)
            grouped[match.team_b].append(match)
        return {team_id: tuple(items) for team_id, items in grouped.items()}

    @property
    def n(self) -> int:
        return len(self.teams)

    def matches_of(self, team_id: str) -> tuple[MatchRecord, ...]:
        """Matches played by ``team_id`` in input order."""
        return self._matches_by_team[team_id]

    def __iter__(self) -> Iterator[MatchRecord]:
        return iter(self.matches)

    def __len__(self) -> int:
        return len(self.matches)
