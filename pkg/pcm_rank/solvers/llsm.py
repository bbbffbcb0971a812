"""Logarithmic least squares weights for incomplete matrices.

The weights minimise

    sum over known (i, j) of (log a_ij - log w_i + log w_j) ** 2

whose normal equations are ``L y = b`` with ``L`` the Laplacian of the
comparison graph, ``y = log w`` and ``b_i = sum_j log a_ij`` over the known
comparisons of ``i``. The last coordinate is pinned to 0 and the leading
``(n-1) x (n-1)`` system is solved directly; the solution is unique iff the
graph is connected.
"""

import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg
from scipy.sparse.csgraph import laplacian

from ..error.exceptions import DegenerateInputError
from ..pcm.graph import require_connected
from ..pcm.matrix import IncompletePCM
from .weights import WeightVector

logger = logging.getLogger(__name__)

METHOD = "llsm"
# Above this size the reduced system is solved with a sparse factorisation.
DENSE_LIMIT = 2000
RESIDUAL_WARNING = 1e-10


def log_weight_rhs(pcm: IncompletePCM) -> npt.NDArray[np.float64]:
    """Right-hand side ``b_i = sum_j log a_ij`` over known comparisons."""
    rhs = np.zeros(pcm.n, dtype=np.float64)
    if pcm.known:
        edges = pcm.edges
        np.add.at(rhs, edges[:, 0], pcm.log_values)
        np.add.at(rhs, edges[:, 1], -pcm.log_values)
    return rhs


def llsm_objective(pcm: IncompletePCM, weights: WeightVector | npt.ArrayLike) -> float:
    """Sum of squared log errors of ``weights`` on the known comparisons."""
    values = weights.values if isinstance(weights, WeightVector) else np.asarray(weights, dtype=np.float64)
    if not pcm.known:
        return 0.0
    logs = np.log(values)
    edges = pcm.edges
    errors = pcm.log_values - logs[edges[:, 0]] + logs[edges[:, 1]]
    return float(np.dot(errors, errors))


def llsm_weights(pcm: IncompletePCM) -> WeightVector:
    """Logarithmic least squares weights of an incomplete matrix.

    Args:
        pcm: Matrix with a connected comparison graph and at least two alternatives

    Returns:
        Normalised weights; ``diagnostics`` holds the normal-equation residual,
        the objective value and the pinned coordinate

    Raises:
        DegenerateInputError: If ``pcm`` has fewer than two alternatives
        DisconnectedGraphError: If the comparison graph is disconnected
    """
    n = pcm.n
    if n < 2:
        raise DegenerateInputError(f"LLSM needs at least two alternatives, got {n}", scale=pcm.scale_name)
    graph = require_connected(pcm)

    lap = laplacian(graph.adjacency.astype(np.float64))
    rhs = log_weight_rhs(pcm)

    y = np.zeros(n, dtype=np.float64)
    if n > DENSE_LIMIT:
        reduced = scipy.sparse.csc_matrix(lap)[:-1, :-1]
        y[:-1] = scipy.sparse.linalg.spsolve(reduced, rhs[:-1])
    else:
        dense = lap.toarray() if hasattr(lap, "toarray") else np.asarray(lap)
        y[:-1] = scipy.linalg.solve(dense[:-1, :-1], rhs[:-1], assume_a="pos")

    residual = float(np.max(np.abs(lap @ y - rhs)))
    if residual > RESIDUAL_WARNING:
        logger.warning("LLSM normal equations residual is large", extra={"residual": residual, "scale": pcm.scale_name})

    values = np.exp(y - y.max())
    values /= values.sum()
    objective = llsm_objective(pcm, values)
    weights = WeightVector.normalized(
        pcm.labels,
        values,
        method=METHOD,
        scale=pcm.scale_name,
        diagnostics={"normal_equation_residual": residual, "objective": objective, "gauge": pcm.labels[-1]},
    )
    logger.info(
        "Computed LLSM weights",
        extra={"method": METHOD, "scale": pcm.scale_name, "n": n, "objective": objective},
    )
    return weights
