"""Distances and correlations between two tie-free rankings.

``tau`` is the log-Euclidean distance

    tau(X, Y) = sqrt(sum_i (ln X_i - ln Y_i) ** 2)

over the positions ``X_i``, ``Y_i`` of each team. It is a metric, it weighs
disagreements near the top more heavily than near the bottom, and for ``n``
teams it is largest for two mutually reversed rankings (``tau_max``).
"""

import math
from collections.abc import Sequence
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy import stats

from ..error.exceptions import DegenerateInputError, RankingMismatchError
from ..rankings.models import Ranking


def aligned_positions(x: Ranking, y: Ranking) -> tuple[list[str], list[int], list[int]]:
    """Team ids in ``x`` order with their positions in both rankings.

    Raises:
        RankingMismatchError: If the rankings cover different teams
    """
    if x.team_ids != y.team_ids:
        raise RankingMismatchError(
            f"Rankings {x.label!r} and {y.label!r} cover different teams",
            only_in_first=sorted(x.team_ids - y.team_ids),
            only_in_second=sorted(y.team_ids - x.team_ids),
        )
    teams = list(x.order)
    return teams, x.position_vector(teams), y.position_vector(teams)


def _log_gap(a: int, b: int) -> float:
    return math.log(a) - math.log(b)


def spearman(x: Ranking, y: Ranking) -> float:
    """Spearman's rank correlation ``1 - 6 sum d_i^2 / (n (n^2 - 1))``.

    Evaluated in exact arithmetic, so identical rankings give exactly 1 and
    reversed ones exactly -1.

    Raises:
        RankingMismatchError: If the rankings cover different teams
        DegenerateInputError: For fewer than two teams
    """
    _, xs, ys = aligned_positions(x, y)
    n = len(xs)
    if n < 2:
        raise DegenerateInputError(f"Spearman correlation needs at least two teams, got {n}")
    squared = sum((a - b) ** 2 for a, b in zip(xs, ys))
    return float(1 - Fraction(6 * squared, n * (n * n - 1)))


def tau(x: Ranking, y: Ranking, base: float | None = None) -> float:
    """Log-Euclidean distance between two rankings.

    Args:
        x: First ranking
        y: Second ranking over the same teams
        base: Logarithm base; natural logarithm when omitted. Other bases
            divide the value by ``ln(base)``.

    Raises:
        RankingMismatchError: If the rankings cover different teams
    """
    _, xs, ys = aligned_positions(x, y)
    value = math.sqrt(math.fsum(_log_gap(a, b) ** 2 for a, b in zip(xs, ys)))
    return value / math.log(base) if base is not None else value


def tau_max(n: int) -> float:
    """Largest tau between two rankings of ``n`` teams, reached by a ranking and its reversal."""
    if n < 1:
        raise DegenerateInputError(f"tau_max needs a positive number of teams, got {n}")
    return math.sqrt(math.fsum(_log_gap(i, n + 1 - i) ** 2 for i in range(1, n + 1)))


class RegressionLine(NamedTuple):
    """Least-squares line of the positions in one ranking on those in another."""

    slope: float
    intercept: float
    rvalue: float


def regression_line(x: Ranking, y: Ranking) -> RegressionLine:
    """OLS fit of ``y`` positions on ``x`` positions.

    Both position vectors are permutations of 1..n, so the slope equals the
    Spearman correlation.
    """
    _, xs, ys = aligned_positions(x, y)
    if len(xs) < 2:
        raise DegenerateInputError(f"Regression needs at least two teams, got {len(xs)}")
    fit = stats.linregress(np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64))
    return RegressionLine(float(fit.slope), float(fit.intercept), float(fit.rvalue))


def regression_slope(x: Ranking, y: Ranking) -> float:
    return regression_line(x, y).slope


class TauContribution(NamedTuple):
    team_id: str
    first_position: int
    second_position: int
    ratio: float
    share: float


def tau_contributions(x: Ranking, y: Ranking) -> list[TauContribution]:
    """Per-team share of ``tau(x, y) ** 2``, largest first.

    ``ratio`` is ``max(X_i / Y_i, Y_i / X_i)``; teams with equal shares are
    listed by id.
    """
    teams, xs, ys = aligned_positions(x, y)
    terms = [_log_gap(a, b) ** 2 for a, b in zip(xs, ys)]
    total = math.fsum(terms)
    contributions = [
        TauContribution(team_id, a, b, max(a / b, b / a), term / total if total else 0.0)
        for team_id, a, b, term in zip(teams, xs, ys, terms)
    ]
    return sorted(contributions, key=lambda item: (-item.share, item.team_id))


def reversed_ranking(ranking: Ranking, label: str | None = None) -> Ranking:
    """The same teams in opposite order."""
    return Ranking(label=label or f"{ranking.label} reversed", order=tuple(reversed(ranking.order)), method="reversed")


def identity_ranking(team_ids: Sequence[str], label: str = "Identity") -> Ranking:
    return Ranking(label=label, order=tuple(team_ids), method="identity")
