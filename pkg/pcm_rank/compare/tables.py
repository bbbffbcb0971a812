"""Pairwise distance tables over a set of rankings."""

import logging
from collections.abc import Callable, Collection, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from marshmallow import Schema, fields, validate

from ..error.exceptions import DegenerateInputError, InputError
from ..rankings.models import Ranking
from ..utils import write_csv
from .metrics import spearman, tau, tau_max

logger = logging.getLogger(__name__)

METRICS = ("tau", "spearman")
SYMMETRY_TOLERANCE = 1e-12


def spearman_distance(x: Ranking, y: Ranking) -> float:
    """``1 - rho``, zero for identical rankings and 2 for reversed ones."""
    return 1.0 - spearman(x, y)


_DISTANCES: dict[str, Callable[[Ranking, Ranking], float]] = {"tau": tau, "spearman": spearman_distance}


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric non-negative matrix with zero diagonal.

    For the ``spearman`` metric the stored distance is ``1 - rho``; use
    ``correlations()`` for the coefficients themselves.
    """

    labels: tuple[str, ...]
    values: npt.NDArray[np.float64]
    metric: str

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        k = len(self.labels)
        if values.shape != (k, k):
            raise InputError(f"Expected a {k}x{k} matrix, got shape {values.shape}")
        if not np.allclose(values, values.T, rtol=0.0, atol=SYMMETRY_TOLERANCE):
            raise InputError("Distance matrix must be symmetric")
        if np.any(np.abs(np.diag(values)) > SYMMETRY_TOLERANCE) or np.any(values < -SYMMETRY_TOLERANCE):
            raise InputError("Distance matrix must be non-negative with a zero diagonal")

    @property
    def k(self) -> int:
        return len(self.labels)

    def __getitem__(self, pair: tuple[str, str]) -> float:
        first, second = pair
        return float(self.values[self.labels.index(first), self.labels.index(second)])

    def correlations(self) -> npt.NDArray[np.float64]:
        """Spearman coefficients ``1 - distance``."""
        if self.metric != "spearman":
            raise InputError(f"Correlations are only defined for spearman tables, not {self.metric!r}")
        return 1.0 - self.values


def distance_table(rankings: Sequence[Ranking], metric: str = "tau", jobs: int = 1) -> DistanceMatrix:
    """All pairwise distances between ``rankings``.

    Every cell is computed on its own, so the result does not depend on
    ``jobs``.

    Raises:
        InputError: For an unknown metric or duplicate labels
        DegenerateInputError: For fewer than two rankings
        RankingMismatchError: If the rankings cover different teams
    """
    if metric not in _DISTANCES:
        raise InputError(f"Unknown metric {metric!r}; expected one of {', '.join(METRICS)}")
    if len(rankings) < 2:
        raise DegenerateInputError(f"A distance table needs at least two rankings, got {len(rankings)}")
    labels = tuple(ranking.label for ranking in rankings)
    if len(set(labels)) != len(labels):
        raise InputError("Ranking labels must be unique", labels=list(labels))

    distance = _DISTANCES[metric]
    pairs = list(combinations(range(len(rankings)), 2))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(lambda p: distance(rankings[p[0]], rankings[p[1]]), pairs))
    else:
        cells = [distance(rankings[a], rankings[b]) for a, b in pairs]

    values = np.zeros((len(rankings), len(rankings)), dtype=np.float64)
    for (a, b), cell in zip(pairs, cells):
        values[a, b] = values[b, a] = cell
    logger.debug("Distance table computed", extra={"metric": metric, "rankings": len(rankings)})
    return DistanceMatrix(labels=labels, values=values, metric=metric)


class DistanceMatrixSchema(Schema):
    """One table of ``distances.json``."""

    metric = fields.String(required=True, validate=validate.OneOf(METRICS))
    labels = fields.List(fields.String(), required=True)
    values = fields.List(fields.List(fields.Float()), required=True)
    correlations = fields.List(fields.List(fields.Float()), allow_none=True, load_default=None)
    teams = fields.Integer(required=True)
    tau_max = fields.Float(allow_none=True, load_default=None)


def distance_document(table: DistanceMatrix, teams: int) -> dict[str, Any]:
    """JSON form of a table; tau tables report tau_max for context."""
    return DistanceMatrixSchema().dump(
        {
            "metric": table.metric,
            "labels": list(table.labels),
            "values": table.values.tolist(),
            "correlations": table.correlations().tolist() if table.metric == "spearman" else None,
            "teams": teams,
            "tau_max": tau_max(teams) if table.metric == "tau" and teams >= 1 else None,
        }
    )


def export_distance_table(table: DistanceMatrix, out_dir: Path, formats: Collection[str] = ("csv",)) -> list[Path]:
    """Write ``<metric>.csv`` with ranking labels as header row and first column.

    Spearman tables show the correlation coefficients, tau tables the distances.
    """
    if "csv" not in formats:
        return []
    grid = table.correlations() if table.metric == "spearman" else table.values
    rows = ((label, *(repr(float(v)) for v in row)) for label, row in zip(table.labels, grid))
    return [write_csv(out_dir / f"{table.metric}.csv", ("", *table.labels), rows)]
