"""Eigenvector method for incomplete matrices.

The missing entries ``x_1 .. x_d`` are chosen to minimise the dominant
eigenvalue of the completed matrix, by cyclic coordinates: each sweep visits
the missing entries in row-major order and minimises lambda_max over
``log x_k`` with a golden-section search, the other entries held fixed. The
weights are the Perron eigenvector of the optimal completion.
"""

import logging
import math
from collections.abc import Collection
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from marshmallow import Schema, fields

from ..error.exceptions import ConvergenceError, DegenerateInputError
from ..pcm.graph import require_connected, spanning_tree
from ..pcm.matrix import IncompletePCM, Pair
from ..utils import write_csv, write_json
from .golden import golden_section
from .perron import METHOD, perron, power_iteration
from .settings import DEFAULT_SETTINGS, SolverSettings
from .weights import WeightVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CompletionState:
    """Missing entries of a completion and the resulting lambda_max.

    Attributes:
        labels: Alternative ids of the matrix
        missing: Upper-triangle positions of the missing entries
        x: Completed values, aligned with ``missing``
        lambda_max: Dominant eigenvalue of the completed matrix
        sweeps: Number of finished cyclic-coordinate sweeps
        trace: lambda_max before the first sweep and after each sweep
        converged: False when the sweep cap was reached
        evaluations: Number of eigenvalue evaluations
        power_iterations: Power-iteration steps spent over all evaluations
    """

    labels: tuple[str, ...]
    missing: tuple[Pair, ...]
    x: npt.NDArray[np.float64]
    lambda_max: float
    sweeps: int = 0
    trace: tuple[float, ...] = ()
    converged: bool = True
    evaluations: int = 0
    power_iterations: int = 0
    eigenvector: npt.NDArray[np.float64] | None = field(default=None, repr=False)

    @property
    def d(self) -> int:
        return len(self.missing)

    def values(self) -> dict[Pair, float]:
        return dict(zip(self.missing, self.x.tolist()))

    def completed(self, pcm: IncompletePCM) -> npt.NDArray[np.float64]:
        """Dense matrix of ``pcm`` with the missing entries filled in."""
        return _fill(pcm.to_dense(), self.missing, np.log(self.x))


def _fill(
    matrix: npt.NDArray[np.float64], missing: tuple[Pair, ...], logs: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    for (i, j), t in zip(missing, logs.tolist()):
        matrix[i, j] = math.exp(t)
        matrix[j, i] = math.exp(-t)
    return matrix


class CoordinateObjective:
    """lambda_max of ``work`` as a function of ``t = log x_ij``.

    Writes ``e^t`` and ``e^-t`` into ``work`` and warm-starts every power
    iteration from the eigenvector of the previous evaluation. Golden-section
    points close in on the argmin, so later evaluations need few steps.
    """

    def __init__(
        self,
        work: npt.NDArray[np.float64],
        pair: Pair,
        start: npt.NDArray[np.float64],
        settings: SolverSettings = DEFAULT_SETTINGS,
    ) -> None:
        self.work = work
        self.i, self.j = pair
        self.warm = start
        self.settings = settings
        self.iterations = 0

    def set(self, t: float) -> None:
        self.work[self.i, self.j] = math.exp(t)
        self.work[self.j, self.i] = math.exp(-t)

    def __call__(self, t: float) -> tuple[float, npt.NDArray[np.float64]]:
        self.set(t)
        value, eigenvector, steps, _ = power_iteration(
            self.work,
            self.warm,
            tolerance=self.settings.inner_tolerance,
            max_iterations=self.settings.power_iteration_cap,
        )
        self.iterations += steps
        self.warm = eigenvector
        return value, eigenvector


def tree_initial_logs(pcm: IncompletePCM) -> npt.NDArray[np.float64]:
    """Starting ``log x`` from potentials along a breadth-first spanning tree.

    ``y_root = 0`` and ``y_v = y_parent - log a_parent,v``; a missing entry
    ``(i, j)`` starts at ``y_i - y_j``, or at 0 (``x = 1``) when either end
    is not reached from the root.
    """
    graph = require_connected(pcm) if pcm.n > 1 else None
    potentials = np.full(pcm.n, np.nan)
    if graph is not None:
        order, parents = spanning_tree(graph)
        potentials[order[0]] = 0.0
        for vertex in order[1:]:
            parent = parents[vertex]
            ratio = pcm.value(parent, vertex)
            assert ratio is not None
            potentials[vertex] = potentials[parent] - math.log(float(ratio))
    logs = np.array([potentials[i] - potentials[j] for i, j in pcm.missing], dtype=np.float64)
    return np.where(np.isfinite(logs), logs, 0.0)


def optimal_completion(
    pcm: IncompletePCM,
    settings: SolverSettings = DEFAULT_SETTINGS,
    initial: npt.ArrayLike | None = None,
) -> CompletionState:
    """Lambda_max-optimal completion by cyclic coordinates.

    Args:
        pcm: Matrix with a connected comparison graph
        settings: Sweep cap, tolerances and bracket width
        initial: Starting values for the missing entries (in ``pcm.missing``
            order); spanning-tree potentials when omitted

    Returns:
        Final CompletionState with the per-sweep lambda_max trace

    Raises:
        DegenerateInputError: If ``pcm`` has fewer than two alternatives
        DisconnectedGraphError: If the comparison graph is disconnected
        ConvergenceError: If the sweep cap is reached; ``state`` holds the
            last CompletionState
    """
    if pcm.n < 2:
        raise DegenerateInputError(f"EM needs at least two alternatives, got {pcm.n}", scale=pcm.scale_name)
    require_connected(pcm)

    missing = pcm.missing
    logs = tree_initial_logs(pcm) if initial is None else np.log(np.asarray(initial, dtype=np.float64))
    work = _fill(pcm.to_dense(), missing, logs)
    lam, vector, steps, _ = power_iteration(
        work, tolerance=settings.inner_tolerance, max_iterations=settings.power_iteration_cap
    )
    trace = [lam]
    evaluations = 1
    power_iterations = steps

    def state(sweeps: int, converged: bool) -> CompletionState:
        return CompletionState(
            labels=pcm.labels,
            missing=missing,
            x=np.exp(logs),
            lambda_max=lam,
            sweeps=sweeps,
            trace=tuple(trace),
            converged=converged,
            evaluations=evaluations,
            power_iterations=power_iterations,
            eigenvector=vector.copy(),
        )

    if not missing:
        logger.debug("Complete matrix, nothing to optimise", extra={"scale": pcm.scale_name})
        return state(0, True)

    half_width = settings.bracket_half_width
    for sweep in range(1, settings.em_sweep_cap + 1):
        sweep_start = lam
        for k, pair in enumerate(missing):
            evaluate = CoordinateObjective(work, pair, vector, settings)
            center = float(logs[k])
            best_t, best_lam, best_vector = center, lam, vector
            for _ in range(settings.max_bracket_expansions + 1):
                result = golden_section(
                    evaluate, center - half_width, center + half_width, tolerance=settings.golden_tolerance
                )
                evaluations += result.evaluations
                if result.minimum < best_lam and result.payload is not None:
                    best_t, best_lam, best_vector = result.argmin, result.minimum, result.payload
                if not result.at_boundary:
                    break
                center = result.argmin

            if best_lam < lam:
                logs[k], lam, vector = best_t, best_lam, best_vector
            evaluate.set(float(logs[k]))
            power_iterations += evaluate.iterations

        trace.append(lam)
        improvement = sweep_start - lam
        logger.debug(
            "Completion sweep",
            extra={"sweep": sweep, "lambda_max": lam, "improvement": improvement, "scale": pcm.scale_name},
        )
        if improvement < settings.em_tolerance:
            final = state(sweep, True)
            logger.info(
                "Optimal completion found",
                extra={
                    "scale": pcm.scale_name,
                    "missing": len(missing),
                    "sweeps": sweep,
                    "lambda_max": lam,
                    "power_iterations": power_iterations,
                },
            )
            return final

    last = state(settings.em_sweep_cap, False)
    raise ConvergenceError(
        f"Completion did not settle within {settings.em_sweep_cap} sweeps",
        residual=trace[-2] - trace[-1],
        state=last,
        lambda_max=lam,
        scale=pcm.scale_name,
    )


def em_weights(
    pcm: IncompletePCM,
    settings: SolverSettings = DEFAULT_SETTINGS,
    completion: CompletionState | None = None,
) -> WeightVector:
    """Perron weights of the lambda_max-optimal completion of ``pcm``.

    Args:
        pcm: Matrix with a connected comparison graph
        settings: Solver settings
        completion: Reuse an already computed completion of ``pcm``

    Returns:
        Normalised weights; ``diagnostics`` holds lambda_max, sweeps and the
        eigen residual
    """
    completion = completion or optimal_completion(pcm, settings)
    result = perron(
        completion.completed(pcm),
        pcm.labels,
        scale=pcm.scale_name,
        tolerance=min(settings.eigen_tolerance, settings.inner_tolerance),
        max_iterations=settings.power_iteration_cap,
        start=completion.eigenvector,
    )
    diagnostics = {
        **result.weights.diagnostics,
        "sweeps": completion.sweeps,
        "missing": completion.d,
        "evaluations": completion.evaluations,
        "power_iterations": completion.power_iterations,
    }
    return WeightVector(
        labels=result.weights.labels,
        values=result.weights.values,
        method=METHOD,
        scale=pcm.scale_name,
        diagnostics=diagnostics,
    )


class CompletionSidecarSchema(Schema):
    """JSON sidecar of a completion dump."""

    scale = fields.String(allow_none=True, required=True)
    n = fields.Integer(required=True)
    d = fields.Integer(required=True)
    lambda_max = fields.Float(required=True)
    sweeps = fields.Integer(required=True)
    converged = fields.Boolean(required=True)
    trace = fields.List(fields.Float(), required=True)
    labels = fields.List(fields.String(), required=True)


def completion_document(state: CompletionState, scale: str | None) -> dict[str, Any]:
    return CompletionSidecarSchema().dump(
        {
            "scale": scale,
            "n": len(state.labels),
            "d": state.d,
            "lambda_max": state.lambda_max,
            "sweeps": state.sweeps,
            "converged": state.converged,
            "trace": list(state.trace),
            "labels": list(state.labels),
        }
    )


def export_completion(
    state: CompletionState, scale: str | None, out_dir: Path, formats: Collection[str] = ("csv", "json")
) -> list[Path]:
    """Write ``completion-<scale>.csv`` (``i,j,x_ij``, 1-based) and its JSON sidecar."""
    stem = f"completion-{scale or 'custom'}"
    written: list[Path] = []
    if "csv" in formats:
        rows = ((i + 1, j + 1, repr(value)) for (i, j), value in zip(state.missing, state.x.tolist()))
        written.append(write_csv(out_dir / f"{stem}.csv", ("i", "j", "x_ij"), rows))
    if "json" in formats:
        written.append(write_json(out_dir / f"{stem}.json", completion_document(state, scale)))
    return written
