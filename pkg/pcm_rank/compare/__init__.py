"""Comparing rankings: correlation, tau distance, tables and diagnostics."""

from .diagnostics import (
    AdjacencyStats,
    WeightStats,
    adjacency_pattern,
    adjacency_stats,
    average_win_ratio,
    export_adjacency_stats,
    export_weight_stats,
    power,
    relative_weights,
    weight_stats,
)
from .metrics import (
    RegressionLine,
    TauContribution,
    identity_ranking,
    regression_line,
    regression_slope,
    reversed_ranking,
    spearman,
    tau,
    tau_contributions,
    tau_max,
)
from .tables import METRICS, DistanceMatrix, distance_document, distance_table, export_distance_table

__all__ = [
    # Metrics
    "spearman",
    "tau",
    "tau_max",
    "regression_line",
    "regression_slope",
    "RegressionLine",
    "tau_contributions",
    "TauContribution",
    "identity_ranking",
    "reversed_ranking",
    # Tables
    "METRICS",
    "DistanceMatrix",
    "distance_table",
    "distance_document",
    "export_distance_table",
    # Diagnostics
    "WeightStats",
    "weight_stats",
    "average_win_ratio",
    "power",
    "relative_weights",
    "AdjacencyStats",
    "adjacency_stats",
    "adjacency_pattern",
    "export_weight_stats",
    "export_adjacency_stats",
]
