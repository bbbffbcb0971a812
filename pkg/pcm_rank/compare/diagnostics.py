"""Weight-vector statistics and how far apart opponents were in a ranking."""

import logging
import math
from collections.abc import Collection, Mapping
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from marshmallow import Schema, fields

from ..error.exceptions import DegenerateInputError, RankingMismatchError
from ..pcm.scales import RatioScale
from ..rankings.models import Ranking
from ..solvers.weights import WeightVector
from ..tournament.models import DRAW_POINTS, Tournament
from ..utils import write_csv, write_json

logger = logging.getLogger(__name__)


def average_win_ratio(histogram: Mapping[Fraction, int], scale: RatioScale) -> float:
    """Mean ratio a winner gets under ``scale``, drawn matches left out.

    Args:
        histogram: Match counts by the winner's game points
        scale: Ratio scale

    Raises:
        DegenerateInputError: If there is no decided match
    """
    decided = {points: count for points, count in histogram.items() if points > DRAW_POINTS}
    total = sum(decided.values())
    if total == 0:
        raise DegenerateInputError("Average win ratio needs at least one decided match", scale=scale.name)
    weighted = sum((count * scale.ratio(points) for points, count in decided.items()), Fraction(0))
    return float(weighted / total)


def power(max_min_ratio: float, win_ratio: float) -> float:
    """``ln(max / min) / ln(average win ratio)``: how many average wins separate the extremes."""
    if win_ratio <= 1:
        raise DegenerateInputError(f"Average win ratio must exceed 1, got {win_ratio}")
    return math.log(max_min_ratio) / math.log(win_ratio)


@dataclass(frozen=True)
class WeightStats:
    """Summary of one weight vector; ``std_dev`` is the population deviation."""

    max: float
    min: float
    max_min_ratio: float
    mean: float
    std_dev: float
    average_win_ratio: float
    power: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def weight_stats(weights: WeightVector, histogram: Mapping[Fraction, int], scale: RatioScale) -> WeightStats:
    """Extremes, spread, average win ratio and power of a weight vector."""
    values = weights.values
    largest, smallest = float(values.max()), float(values.min())
    ratio = largest / smallest
    win_ratio = average_win_ratio(histogram, scale)
    return WeightStats(
        max=largest,
        min=smallest,
        max_min_ratio=ratio,
        mean=float(values.mean()),
        std_dev=float(values.std(ddof=0)),
        average_win_ratio=win_ratio,
        power=power(ratio, win_ratio),
    )


def relative_weights(weights: WeightVector) -> dict[str, float]:
    """Weights divided by the largest one."""
    top = float(weights.values.max())
    return {label: float(value) / top for label, value in zip(weights.labels, weights.values)}


@dataclass(frozen=True)
class AdjacencyStats:
    """Mean and median rank gap between opponents; None without matches."""

    mean: float | None
    median: float | None
    matches: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _check_covers(tournament: Tournament, ranking: Ranking) -> None:
    missing = sorted(set(tournament.team_ids) - ranking.team_ids)
    if missing:
        raise RankingMismatchError(f"Ranking {ranking.label!r} does not cover every team", missing=missing)


def rank_gaps(tournament: Tournament, ranking: Ranking) -> list[int]:
    _check_covers(tournament, ranking)
    return [abs(ranking.position(m.team_a) - ranking.position(m.team_b)) for m in tournament.matches]


def adjacency_stats(tournament: Tournament, ranking: Ranking) -> AdjacencyStats:
    """Mean and median of ``|r(team_a) - r(team_b)|`` over all matches.

    An even number of matches takes the midpoint of the two central gaps.
    """
    gaps = rank_gaps(tournament, ranking)
    if not gaps:
        return AdjacencyStats(mean=None, median=None, matches=0)
    array = np.asarray(gaps, dtype=np.float64)
    return AdjacencyStats(mean=float(array.mean()), median=float(np.median(array)), matches=len(gaps))


def adjacency_pattern(tournament: Tournament, ranking: Ranking) -> list[tuple[int, int]]:
    """Positions ``(row, col)`` of known comparisons when rows and columns follow ``ranking``.

    Both orientations of every match are listed, sorted.
    """
    _check_covers(tournament, ranking)
    cells = []
    for match in tournament.matches:
        a, b = ranking.position(match.team_a), ranking.position(match.team_b)
        cells.extend([(a, b), (b, a)])
    return sorted(cells)


class WeightStatsSchema(Schema):
    class Meta:
        ordered = True

    label = fields.String(required=True)
    max = fields.Float(required=True)
    min = fields.Float(required=True)
    max_min_ratio = fields.Float(required=True)
    mean = fields.Float(required=True)
    std_dev = fields.Float(required=True)
    average_win_ratio = fields.Float(required=True)
    power = fields.Float(required=True)


class AdjacencyStatsSchema(Schema):
    label = fields.String(required=True)
    mean = fields.Float(allow_none=True, required=True)
    median = fields.Float(allow_none=True, required=True)
    matches = fields.Integer(required=True)


WEIGHT_STATS_COLUMNS = ("label", "max", "min", "max_min_ratio", "mean", "std_dev", "average_win_ratio", "power")


def export_weight_stats(
    stats: Mapping[str, WeightStats], out_dir: Path, formats: Collection[str] = ("csv", "json")
) -> list[Path]:
    """Write ``weight-stats.csv``/``.json``, one entry per weight-vector label."""
    schema = WeightStatsSchema()
    documents = [schema.dump({"label": label, **item.to_dict()}) for label, item in stats.items()]
    written: list[Path] = []
    if "csv" in formats:
        rows = ([doc[column] for column in WEIGHT_STATS_COLUMNS] for doc in documents)
        written.append(write_csv(out_dir / "weight-stats.csv", WEIGHT_STATS_COLUMNS, rows))
    if "json" in formats:
        written.append(write_json(out_dir / "weight-stats.json", {"weight_stats": documents}))
    return written


def export_adjacency_stats(stats: Mapping[str, AdjacencyStats], out_dir: Path) -> Path:
    """Write ``adjacency-stats.json``, one entry per ranking label."""
    schema = AdjacencyStatsSchema()
    documents = [schema.dump({"label": label, **item.to_dict()}) for label, item in stats.items()]
    return write_json(out_dir / "adjacency-stats.json", {"adjacency_stats": documents})
