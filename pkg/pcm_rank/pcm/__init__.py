"""Ratio scales, incomplete comparison matrices and their comparison graphs."""

from .graph import (
    ComparisonGraph,
    comparison_graph,
    connected_components,
    is_connected,
    require_connected,
    spanning_tree,
)
from .matrix import IncompletePCM, build_pcm, export_pcm
from .scales import BUILTIN_SCALE_NAMES, RatioScale, builtin_scale, load_custom_scale, parse_custom_scale

__all__ = [
    # Scales
    "RatioScale",
    "BUILTIN_SCALE_NAMES",
    "builtin_scale",
    "load_custom_scale",
    "parse_custom_scale",
    # Matrix
    "IncompletePCM",
    "build_pcm",
    "export_pcm",
    # Graph
    "ComparisonGraph",
    "comparison_graph",
    "connected_components",
    "is_connected",
    "require_connected",
    "spanning_tree",
]
