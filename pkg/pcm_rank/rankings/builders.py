"""Rankings from weight vectors and from the tie-break quantities.

Every ranking here is tie-free: teams whose complete sort key is equal are
ordered by team id, and the group is recorded in ``Ranking.tie_groups``.

=================  ==============================================  =========
label              sort key, all descending                        primary
=================  ==============================================  =========
Final              TB1, TB2, TB3, TB4                              TB1
Sonneborn-Berger   TB2, TB1, TB3                                   TB2
Buchholz           TB4 * TB1 / matches, TB1, TB2                   product
Mix                TB2 + F * TB4, TB2                              Mix score
=================  ==============================================  =========
"""

import logging
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import Any

from ..error.exceptions import InputError
from ..solvers.weights import WeightVector, descending_order
from ..tournament.models import Tournament
from ..tournament.scoring import ScoreTable, TeamScore
from .models import Ranking

logger = logging.getLogger(__name__)

Key = tuple[Fraction | int | float, ...]


def _tie_groups(order: Sequence[str], keys: dict[str, Key]) -> tuple[tuple[str, ...], ...]:
    groups: list[tuple[str, ...]] = []
    current: list[str] = []
    for team_id in order:
        if current and keys[current[-1]] == keys[team_id]:
            current.append(team_id)
            continue
        if len(current) > 1:
            groups.append(tuple(current))
        current = [team_id]
    if len(current) > 1:
        groups.append(tuple(current))
    return tuple(groups)


def _lexicographic(
    label: str,
    method: str,
    scores: ScoreTable,
    key: Callable[[TeamScore], Key],
    metadata: dict[str, Any] | None = None,
) -> Ranking:
    keys = {score.team_id: key(score) for score in scores}
    order = sorted(keys, key=lambda team_id: (tuple(-value for value in keys[team_id]), team_id))
    tie_groups = _tie_groups(order, keys)
    if tie_groups:
        logger.info("Residual ties broken by team id", extra={"ranking": label, "tie_groups": tie_groups})
    return Ranking(
        label=label,
        order=tuple(order),
        method=method,
        key_values={team_id: float(values[0]) for team_id, values in keys.items()},
        tie_groups=tie_groups,
        metadata=metadata or {},
    )


def ranking_from_weights(weights: WeightVector) -> Ranking:
    """Order teams by descending weight; exact ties go by team id and are flagged."""
    order, _ = descending_order(weights.labels, weights.values)
    ordered = [weights.labels[k] for k in order]
    keys: dict[str, Key] = {label: (float(value),) for label, value in zip(weights.labels, weights.values)}
    tie_groups = _tie_groups(ordered, keys)
    if tie_groups:
        logger.info("Equal weights ordered by team id", extra={"ranking": weights.label, "tie_groups": tie_groups})
    return Ranking(
        label=weights.label,
        order=tuple(ordered),
        method=weights.method,
        scale=weights.scale,
        key_values={label: values[0] for label, values in keys.items()},
        tie_groups=tie_groups,
    )


def official_final_ranking(scores: ScoreTable) -> Ranking:
    """Official order: TB1, then TB2, TB3 and TB4, as far as needed."""
    return _lexicographic("Final", "official", scores, lambda s: (s.TB1, s.TB2, s.TB3, s.TB4))


def sonneborn_berger_ranking(scores: ScoreTable) -> Ranking:
    return _lexicographic("Sonneborn-Berger", "sonneborn-berger", scores, lambda s: (s.TB2, s.TB1, s.TB3))


def buchholz_ranking(scores: ScoreTable) -> Ranking:
    """Order by ``TB4 * TB1 / matches``, then TB1, then TB2."""
    return _lexicographic("Buchholz", "buchholz", scores, lambda s: (s.buchholz_key, s.TB1, s.TB2))


def mix_averages(scores: ScoreTable) -> dict[str, float]:
    """Average TB2 and average ``F * TB4`` over all teams, the two Mix components."""
    if not len(scores):
        return {"sonneborn_berger_mean": 0.0, "weighted_buchholz_mean": 0.0}
    n = len(scores)
    sb = sum((s.TB2 for s in scores), Fraction(0)) / n
    weighted = sum((s.mix_factor * s.TB4 for s in scores), Fraction(0)) / n
    return {"sonneborn_berger_mean": float(sb), "weighted_buchholz_mean": float(weighted)}


def mix_ranking(scores: ScoreTable) -> Ranking:
    """Order by ``TB2 + F * TB4`` with the per-team correcting factor F, then TB2."""
    return _lexicographic("Mix", "mix", scores, lambda s: (s.mix_score, s.TB2), metadata=mix_averages(scores))


def start_ranking(tournament: Tournament) -> Ranking:
    """Pre-tournament order from the roster's start ranks.

    Raises:
        InputError: If any team has no start rank
    """
    missing = [team.id for team in tournament.teams if team.start_rank is None]
    if missing:
        raise InputError("Start ranking needs a start rank for every team", teams=missing)
    positions = {team.id: team.start_rank for team in tournament.teams if team.start_rank is not None}
    return Ranking.from_positions(
        "Start", positions, method="start", key_values={team_id: float(rank) for team_id, rank in positions.items()}
    )
