"""Interval multidimensional scaling of ranking distance tables.

The configuration starts from classical scaling and is refined by stress
majorization (Guttman transform). Before every step the disparities are
refitted as a linear function ``delta = a + b * d`` of the input distances:
the least-squares projection of the current configuration distances on
``{a + b * d}``, rescaled so that ``sum(delta ** 2) == sum(d ** 2)``. With the
disparity norm fixed, both half-steps lower the raw stress
``sum((delta - dist) ** 2)``, so the recorded trace never increases.
"""

import logging
from collections.abc import Collection
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt
from marshmallow import Schema, fields
from scipy.spatial.distance import pdist

from ..compare.tables import DistanceMatrix
from ..error.exceptions import DegenerateInputError, InputError
from ..solvers.settings import DEFAULT_SETTINGS
from ..utils import write_csv, write_json

logger = logging.getLogger(__name__)

SUPPORTED_DIMS = (1, 2)
AXES = ("x", "y")
EXACT_FIT = 1e-9


@dataclass(frozen=True, eq=False)
class MdsEmbedding:
    """Centred coordinates with their fit measures.

    Attributes:
        labels: Ranking labels, one per row of ``coords``
        coords: ``k x dims`` configuration, column means zero
        stress: Kruskal stress-1 of the final configuration
        rsq: Squared correlation between disparities and configuration distances
        a: Intercept of the disparity transformation
        b: Slope of the disparity transformation
        iterations: Majorization steps taken
        trace: Normalised raw stress after initialisation and after every step
        converged: False when the iteration cap stopped the run
    """

    labels: tuple[str, ...]
    coords: npt.NDArray[np.float64]
    stress: float
    rsq: float
    a: float
    b: float
    iterations: int
    trace: tuple[float, ...] = ()
    converged: bool = True
    metric: str = ""

    @property
    def dims(self) -> int:
        return int(self.coords.shape[1])

    def distances(self) -> npt.NDArray[np.float64]:
        """Condensed pairwise distances of the configuration (``i < j``, row-major)."""
        return pdist(self.coords)


def classical_scaling(distances: npt.ArrayLike, dims: int = 2) -> npt.NDArray[np.float64]:
    """Torgerson scaling by double centring.

    Eigenvectors are signed so that their largest-magnitude component is
    positive; dimensions without a positive eigenvalue are zero.
    """
    d = np.asarray(distances, dtype=np.float64)
    k = d.shape[0]
    centering = np.eye(k) - np.full((k, k), 1.0 / k)
    gram = -0.5 * centering @ (d**2) @ centering
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    order = np.argsort(eigenvalues)[::-1][:dims]
    coords = np.zeros((k, dims), dtype=np.float64)
    for column, index in enumerate(order):
        value = eigenvalues[index]
        if value <= 0:
            continue
        vector = eigenvectors[:, index]
        if vector[np.argmax(np.abs(vector))] < 0:
            vector = -vector
        coords[:, column] = vector * np.sqrt(value)
    return coords


def _fit_disparities(
    targets: npt.NDArray[np.float64], observed: npt.NDArray[np.float64], norm: float
) -> tuple[npt.NDArray[np.float64], float, float]:
    """Disparities ``a + b * targets`` closest to ``observed``, scaled to ``norm``.

    Falls back to ``targets`` itself when the fitted slope is not positive.
    """
    spread = targets - targets.mean()
    denominator = float(np.dot(spread, spread))
    slope = float(np.dot(spread, observed - observed.mean()) / denominator) if denominator > 0 else 0.0
    if slope <= 0:
        return targets, 0.0, 1.0
    intercept = float(observed.mean() - slope * targets.mean())
    fitted = intercept + slope * targets
    scale = np.sqrt(norm / float(np.dot(fitted, fitted)))
    return fitted * scale, intercept * scale, slope * scale


def _guttman(coords: npt.NDArray[np.float64], disparities: npt.NDArray[np.float64], k: int) -> npt.NDArray[np.float64]:
    distances = pdist(coords)
    ratios = np.divide(disparities, distances, out=np.zeros_like(disparities), where=distances > 0)
    b = np.zeros((k, k), dtype=np.float64)
    rows, cols = np.triu_indices(k, 1)
    b[rows, cols] = -ratios
    b[cols, rows] = -ratios
    b[np.diag_indices(k)] = -b.sum(axis=1)
    return b @ coords / k


def _raw_stress(disparities: npt.NDArray[np.float64], distances: npt.NDArray[np.float64], norm: float) -> float:
    residual = disparities - distances
    return float(np.dot(residual, residual) / norm)


def embed(
    table: DistanceMatrix,
    dims: int = 2,
    max_iterations: int = DEFAULT_SETTINGS.mds_iteration_cap,
    tolerance: float = DEFAULT_SETTINGS.mds_tolerance,
) -> MdsEmbedding:
    """Interval MDS of a distance table.

    Args:
        table: Distance table with at least three labels
        dims: 1 or 2
        max_iterations: Majorization step cap
        tolerance: Stop once a step lowers the normalised raw stress by less

    Raises:
        InputError: For unsupported ``dims``
        DegenerateInputError: For fewer than three labels or an all-zero table
    """
    if dims not in SUPPORTED_DIMS:
        raise InputError(f"MDS supports {SUPPORTED_DIMS} dimensions, got {dims}")
    k = table.k
    if k < 3:
        raise DegenerateInputError(f"MDS needs at least three rankings, got {k}")
    rows, cols = np.triu_indices(k, 1)
    targets = np.asarray(table.values, dtype=np.float64)[rows, cols]
    norm = float(np.dot(targets, targets))
    if norm == 0:
        raise DegenerateInputError("All distances are zero")

    coords = classical_scaling(table.values, dims)
    distances = pdist(coords)
    disparities, a, b = _fit_disparities(targets, distances, norm)
    trace = [_raw_stress(disparities, distances, norm)]

    iterations = 0
    converged = False
    while iterations < max_iterations:
        coords = _guttman(coords, disparities, k)
        distances = pdist(coords)
        disparities, a, b = _fit_disparities(targets, distances, norm)
        trace.append(_raw_stress(disparities, distances, norm))
        iterations += 1
        if trace[-2] - trace[-1] < tolerance:
            converged = True
            break

    coords = coords - coords.mean(axis=0)
    spread = float(np.dot(distances, distances))
    stress = float(np.sqrt(np.sum((distances - disparities) ** 2) / spread)) if spread > 0 else 0.0
    if np.std(distances) > 0 and np.std(disparities) > 0:
        rsq = float(np.clip(np.corrcoef(disparities, distances)[0, 1] ** 2, 0.0, 1.0))
    else:
        rsq = 1.0 if stress < EXACT_FIT else 0.0

    if not converged:
        logger.warning("MDS stopped at the iteration cap", extra={"iterations": iterations, "stress": stress})
    logger.info("MDS embedding", extra={"metric": table.metric, "stress": stress, "rsq": rsq, "iterations": iterations})
    return MdsEmbedding(
        labels=table.labels,
        coords=coords,
        stress=stress,
        rsq=rsq,
        a=a,
        b=b,
        iterations=iterations,
        trace=tuple(trace),
        converged=converged,
        metric=table.metric,
    )


class MdsEmbeddingSchema(Schema):
    """``mds.json``: fit measures and coordinates."""

    metric = fields.String(required=True)
    dims = fields.Integer(required=True)
    stress = fields.Float(required=True)
    rsq = fields.Float(required=True)
    a = fields.Float(required=True)
    b = fields.Float(required=True)
    iterations = fields.Integer(required=True)
    converged = fields.Boolean(required=True)
    labels = fields.List(fields.String(), required=True)
    coordinates = fields.List(fields.List(fields.Float()), required=True)


def export_embedding(embedding: MdsEmbedding, out_dir: Path, formats: Collection[str] = ("csv", "json")) -> list[Path]:
    """Write ``mds.csv`` (``label,x,y`` or ``label,x``) and ``mds.json``."""
    written: list[Path] = []
    if "csv" in formats:
        header = ("label", *AXES[: embedding.dims])
        rows = ((label, *(repr(float(v)) for v in row)) for label, row in zip(embedding.labels, embedding.coords))
        written.append(write_csv(out_dir / "mds.csv", header, rows))
    if "json" in formats:
        document = MdsEmbeddingSchema().dump(
            {
                "metric": embedding.metric,
                "dims": embedding.dims,
                "stress": embedding.stress,
                "rsq": embedding.rsq,
                "a": embedding.a,
                "b": embedding.b,
                "iterations": embedding.iterations,
                "converged": embedding.converged,
                "labels": list(embedding.labels),
                "coordinates": embedding.coords.tolist(),
            }
        )
        written.append(write_json(out_dir / "mds.json", document))
    return written
