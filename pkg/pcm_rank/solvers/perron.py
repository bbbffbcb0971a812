"""Perron eigenvalue and eigenvector of complete positive reciprocal matrices."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..error.exceptions import ConvergenceError, PcmConstructionError
from ..pcm.matrix import IncompletePCM
from .settings import DEFAULT_SETTINGS
from .weights import WeightVector

logger = logging.getLogger(__name__)

METHOD = "em"
RECIPROCITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PerronResult:
    """Dominant eigenvalue with its normalised right eigenvector."""

    lambda_max: float
    weights: WeightVector
    iterations: int
    residual: float


def power_iteration(
    matrix: npt.NDArray[np.float64],
    start: npt.NDArray[np.float64] | None = None,
    tolerance: float = DEFAULT_SETTINGS.eigen_tolerance,
    max_iterations: int = DEFAULT_SETTINGS.power_iteration_cap,
) -> tuple[float, npt.NDArray[np.float64], int, float]:
    """Power iteration on a positive matrix, iterates normalised to sum 1.

    Args:
        matrix: Square positive matrix
        start: Positive starting vector (warm start); uniform when omitted
        tolerance: Relative residual at which the iteration stops
        max_iterations: Iteration cap

    Returns:
        ``(lambda_max, eigenvector, iterations, residual)``

    Raises:
        ConvergenceError: When the cap is reached, with the achieved residual
    """
    n = matrix.shape[0]
    x = np.full(n, 1.0 / n) if start is None else np.asarray(start, dtype=np.float64) / np.sum(start)
    residual = np.inf
    for iteration in range(1, max_iterations + 1):
        y = matrix @ x
        value = float(y.sum())
        residual = float(np.max(np.abs(y - value * x)) / (value * np.max(x)))
        if residual <= tolerance:
            return value, x, iteration, residual
        x = y / value
    raise ConvergenceError(
        f"Power iteration did not reach {tolerance:g} in {max_iterations} steps",
        residual=residual,
        iterations=max_iterations,
    )


def _as_matrix(matrix: IncompletePCM | npt.ArrayLike) -> npt.NDArray[np.float64]:
    dense = matrix.to_dense() if isinstance(matrix, IncompletePCM) else np.asarray(matrix, dtype=np.float64)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1] or dense.shape[0] == 0:
        raise PcmConstructionError(f"Expected a non-empty square matrix, got shape {dense.shape}")
    if not np.all(np.isfinite(dense)):
        raise PcmConstructionError("Matrix has missing or non-finite entries")
    if np.any(dense <= 0):
        raise PcmConstructionError("Matrix entries must be strictly positive")
    if not np.allclose(dense * dense.T, 1.0, rtol=RECIPROCITY_TOLERANCE, atol=0.0):
        raise PcmConstructionError("Matrix is not reciprocal")
    return dense


def perron(
    matrix: IncompletePCM | npt.ArrayLike,
    labels: Sequence[str] | None = None,
    *,
    scale: str | None = None,
    tolerance: float = DEFAULT_SETTINGS.eigen_tolerance,
    max_iterations: int = DEFAULT_SETTINGS.power_iteration_cap,
    start: npt.NDArray[np.float64] | None = None,
) -> PerronResult:
    """Dominant eigenvalue and Perron eigenvector of a complete matrix.

    Args:
        matrix: Complete positive reciprocal matrix, dense or as an
            IncompletePCM without missing entries
        labels: Alternative ids; taken from ``matrix`` when it is an
            IncompletePCM, numbered from 1 otherwise
        scale: Scale tag for the returned weights
        tolerance: Bound on ``||A w - lambda w||_inf / (lambda ||w||_inf)``
        max_iterations: Power-iteration cap
        start: Warm-start vector

    Raises:
        PcmConstructionError: If the matrix is incomplete, not positive or not reciprocal
        ConvergenceError: If the power iteration hits its cap
    """
    if isinstance(matrix, IncompletePCM):
        labels = labels or matrix.labels
        scale = scale or matrix.scale_name
    dense = _as_matrix(matrix)
    names = tuple(labels) if labels is not None else tuple(str(k) for k in range(1, dense.shape[0] + 1))

    value, vector, iterations, residual = power_iteration(dense, start, tolerance, max_iterations)
    weights = WeightVector.normalized(
        names,
        vector,
        method=METHOD,
        scale=scale,
        diagnostics={"lambda_max": value, "eigen_residual": residual, "power_iterations": iterations},
    )
    logger.debug("Perron eigenpair", extra={"lambda_max": value, "iterations": iterations, "residual": residual})
    return PerronResult(lambda_max=value, weights=weights, iterations=iterations, residual=residual)
