"""Weight-vector solvers: logarithmic least squares and the eigenvector method."""

from .em import (
    CompletionState,
    CoordinateObjective,
    em_weights,
    export_completion,
    optimal_completion,
    tree_initial_logs,
)
from .golden import GoldenSectionResult, golden_section
from .llsm import llsm_objective, llsm_weights
from .perron import PerronResult, perron, power_iteration
from .settings import DEFAULT_SETTINGS, SolverSettings
from .weights import WeightVector, descending_order, export_weights

__all__ = [
    "WeightVector",
    "descending_order",
    "export_weights",
    "SolverSettings",
    "DEFAULT_SETTINGS",
    # LLSM
    "llsm_weights",
    "llsm_objective",
    # EM
    "PerronResult",
    "perron",
    "power_iteration",
    "CompletionState",
    "CoordinateObjective",
    "optimal_completion",
    "tree_initial_logs",
    "em_weights",
    "export_completion",
    "GoldenSectionResult",
    "golden_section",
]
