"""Comparison graph of an incomplete matrix.

Vertices are the alternatives, edges the known comparisons. The weight
vectors of both solvers are unique exactly when this graph is connected.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components as _csgraph_components

from ..error.exceptions import DisconnectedGraphError
from .matrix import IncompletePCM, Pair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComparisonGraph:
    """Undirected graph on ``n`` vertices with one edge per known comparison."""

    n: int
    edges: tuple[Pair, ...]
    labels: tuple[str, ...] = ()

    @cached_property
    def adjacency(self) -> csr_matrix:
        """Symmetric 0/1 adjacency matrix in CSR form."""
        if not self.edges:
            return csr_matrix((self.n, self.n), dtype=np.int8)
        rows = [i for i, j in self.edges] + [j for i, j in self.edges]
        cols = [j for i, j in self.edges] + [i for i, j in self.edges]
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @property
    def degrees(self) -> npt.NDArray[np.int64]:
        degrees = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            degrees[i] += 1
            degrees[j] += 1
        return degrees

    def label(self, vertex: int) -> str:
        return self.labels[vertex] if self.labels else str(vertex)


def comparison_graph(pcm: IncompletePCM) -> ComparisonGraph:
    """Graph whose edges mirror the stored entries of ``pcm``."""
    return ComparisonGraph(n=pcm.n, edges=tuple(sorted(pcm.entries)), labels=pcm.labels)


def connected_components(graph: ComparisonGraph) -> list[list[int]]:
    """Vertex lists of the connected components.

    Vertices are sorted inside each component and components are ordered by
    their smallest vertex.
    """
    if graph.n == 0:
        return []
    _, assignment = _csgraph_components(graph.adjacency, directed=False)
    grouped: dict[int, list[int]] = {}
    for vertex, component in enumerate(assignment.tolist()):
        grouped.setdefault(component, []).append(vertex)
    return sorted(grouped.values(), key=lambda members: members[0])


def is_connected(graph: ComparisonGraph) -> bool:
    """True when the graph has a single component; zero or one vertex counts as connected."""
    if graph.n <= 1:
        return True
    return len(connected_components(graph)) == 1


def require_connected(pcm: IncompletePCM) -> ComparisonGraph:
    """Return the comparison graph of ``pcm`` or fail if it is disconnected.

    Raises:
        DisconnectedGraphError: Listing the team ids of every component
    """
    graph = comparison_graph(pcm)
    if not is_connected(graph):
        components = [[graph.label(v) for v in members] for members in connected_components(graph)]
        raise DisconnectedGraphError(components, scale=pcm.scale_name)
    return graph


def spanning_tree(graph: ComparisonGraph, root: int = 0) -> tuple[list[int], list[int]]:
    """Breadth-first spanning tree of a connected graph.

    Returns:
        Vertices in visiting order and the parent of each vertex (``-1`` for
        the root and for unreachable vertices)
    """
    if graph.n == 0:
        return [], []
    order, predecessors = breadth_first_order(graph.adjacency, root, directed=False, return_predecessors=True)
    parents = [int(p) if p >= 0 else -1 for p in predecessors]
    return [int(v) for v in order], parents
