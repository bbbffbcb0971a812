"""Match scoring and the official tie-break quantities.

Match points follow the Olympiad rule: at least 2.5 game points win the
match (2 match points), exactly 2 is a drawn match (1 point each), 1.5 or
fewer lose it (0). The tie-break quantities are

- TB1: match points
- TB2: Olympiad Sonneborn-Berger points, the sum over opponents of the
  opponent's match points times the game points scored against it,
  excluding the opponent with the lowest match points
- TB3: game points
- TB4: Buchholz points, the sum of opponents' match points excluding the
  lowest one

and the Mix correcting factor
``F = (3 * wins + 2 * draws + 1 * losses) / matches``.

When several opponents share the lowest match points exactly one of them is
excluded: the one with the smallest contribution to the sum, then the
smallest team id. Teams that played fewer matches (late arrivals) are scored
on the matches they actually played.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

from .models import DRAW_POINTS, MatchRecord, Tournament

logger = logging.getLogger(__name__)

WIN_MATCH_POINTS = 2
DRAW_MATCH_POINTS = 1
LOSS_MATCH_POINTS = 0

WINNER_POINT_BINS: tuple[Fraction, ...] = tuple(Fraction(k, 2) for k in range(4, 9))

LATE_ARRIVAL_POLICY = "late arrivals are scored on the matches they actually played"


def match_points_for(game_points: Fraction) -> int:
    """Match points earned with ``game_points`` in one match."""
    if game_points > DRAW_POINTS:
        return WIN_MATCH_POINTS
    if game_points == DRAW_POINTS:
        return DRAW_MATCH_POINTS
    return LOSS_MATCH_POINTS


@dataclass(frozen=True)
class TeamScore:
    """Per-team score line with the TB1-TB4 quantities."""

    team_id: str
    matches: int
    wins: int
    draws: int
    losses: int
    match_points: int
    game_points: Fraction
    sonneborn_berger: Fraction
    buchholz: int
    mix_factor: Fraction
    sonneborn_berger_excluded: str | None = None
    buchholz_excluded: str | None = None

    @property
    def TB1(self) -> int:
        return self.match_points

    @property
    def TB2(self) -> Fraction:
        return self.sonneborn_berger

    @property
    def TB3(self) -> Fraction:
        return self.game_points

    @property
    def TB4(self) -> int:
        return self.buchholz

    @property
    def buchholz_key(self) -> Fraction:
        """TB4 * TB1 / matches, the primary key of the Buchholz ranking."""
        if self.matches == 0:
            return Fraction(0)
        return Fraction(self.buchholz * self.match_points, self.matches)

    @property
    def mix_score(self) -> Fraction:
        """TB2 + F * TB4, the primary key of the Mix ranking."""
        return self.sonneborn_berger + self.mix_factor * self.buchholz


@dataclass(frozen=True)
class ScoreTable:
    """Score lines of all teams, in roster order."""

    scores: tuple[TeamScore, ...]
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    @cached_property
    def _by_id(self) -> dict[str, TeamScore]:
        return {score.team_id: score for score in self.scores}

    def __getitem__(self, team_id: str) -> TeamScore:
        return self._by_id[team_id]

    def __iter__(self) -> Iterator[TeamScore]:
        return iter(self.scores)

    def __len__(self) -> int:
        return len(self.scores)

    @property
    def team_ids(self) -> tuple[str, ...]:
        return tuple(score.team_id for score in self.scores)


def _exclude_lowest(terms: list[tuple[int, Fraction, str]]) -> tuple[Fraction, str | None]:
    """Sum contributions, dropping one lowest-match-point opponent.

    Args:
        terms: ``(opponent match points, contribution, opponent id)`` triples

    Returns:
        The reduced sum and the id of the excluded opponent
    """
    if not terms:
        return Fraction(0), None
    lowest = min(mp for mp, _, _ in terms)
    excluded_term, excluded_id = min((term, team_id) for mp, term, team_id in terms if mp == lowest)
    total = sum((term for _, term, _ in terms), Fraction(0))
    return total - excluded_term, excluded_id


def compute_score_table(tournament: Tournament) -> ScoreTable:
    """Compute TB1-TB4, win/draw/loss counts and the Mix factor for every team.

    Args:
        tournament: A valid tournament

    Returns:
        ScoreTable in roster order; ``metadata`` lists late arrivals and the
        excluded opponents
    """
    match_points: dict[str, int] = {team_id: 0 for team_id in tournament.team_ids}
    for match in tournament.matches:
        match_points[match.team_a] += match_points_for(match.game_points_a)
        match_points[match.team_b] += match_points_for(match.game_points_b)

    played = {team_id: len(tournament.matches_of(team_id)) for team_id in tournament.team_ids}
    max_played = max(played.values(), default=0)

    scores: list[TeamScore] = []
    for team_id in tournament.team_ids:
        own: tuple[MatchRecord, ...] = tournament.matches_of(team_id)
        wins = draws = losses = 0
        game_points = Fraction(0)
        sb_terms: list[tuple[int, Fraction, str]] = []
        bh_terms: list[tuple[int, Fraction, str]] = []
        for match in own:
            scored = match.points_for(team_id)
            game_points += scored
            awarded = match_points_for(scored)
            if awarded == WIN_MATCH_POINTS:
                wins += 1
            elif awarded == DRAW_MATCH_POINTS:
                draws += 1
            else:
                losses += 1
            opponent = match.opponent_of(team_id)
            opp_mp = match_points[opponent]
            sb_terms.append((opp_mp, opp_mp * scored, opponent))
            bh_terms.append((opp_mp, Fraction(opp_mp), opponent))

        sonneborn_berger, sb_excluded = _exclude_lowest(sb_terms)
        buchholz, bh_excluded = _exclude_lowest(bh_terms)
        n_matches = len(own)
        # a team without matches has TB2 = TB4 = 0, so F does not matter for Mix
        mix_factor = Fraction(3 * wins + 2 * draws + losses, n_matches) if n_matches else Fraction(1)

        scores.append(
            TeamScore(
                team_id=team_id,
                matches=n_matches,
                wins=wins,
                draws=draws,
                losses=losses,
                match_points=match_points[team_id],
                game_points=game_points,
                sonneborn_berger=sonneborn_berger,
                buchholz=int(buchholz),
                mix_factor=mix_factor,
                sonneborn_berger_excluded=sb_excluded,
                buchholz_excluded=bh_excluded,
            )
        )

    late = [team_id for team_id in tournament.team_ids if played[team_id] < max_played]
    metadata = {
        "max_matches": max_played,
        "late_arrivals": late,
        "late_arrival_policy": LATE_ARRIVAL_POLICY,
    }
    if late:
        logger.info("Teams with fewer matches scored on actual matches", extra={"late_arrivals": late})
    return ScoreTable(scores=tuple(scores), metadata=metadata)


def result_distribution(tournament: Tournament) -> dict[Fraction, int]:
    """Count matches by the winner's game points; draws are binned at 2.

    Returns:
        Ordered mapping ``{2: n, 2.5: n, 3: n, 3.5: n, 4: n}``
    """
    histogram = {points: 0 for points in WINNER_POINT_BINS}
    for match in tournament.matches:
        histogram[match.winner_points] += 1
    return histogram
