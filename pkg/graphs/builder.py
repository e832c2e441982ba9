from functools import lru_cache
from itertools import product
from typing import Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from lattice.cells import cells_at_level
from models.errors import CellNotInGraphError, InvalidProblemError
from models.fractals import CellIndex, CellSet, FractalSpec
from models.graphs import AdjacencyMode
from settings import logger


def mode_offsets(dimension: int, mode: AdjacencyMode) -> np.ndarray:
    """Neighbor offsets for a mode, one per unordered pair (first nonzero entry is +1)."""
    low, high = _changed_axes_range(dimension, mode)
    offsets = []
    for offset in product((-1, 0, 1), repeat=dimension):
        nonzero = [o for o in offset if o != 0]
        if not nonzero or nonzero[0] != 1:
            continue
        if low <= len(nonzero) <= high:
            offsets.append(offset)
    return np.array(offsets, dtype=np.int64).reshape(-1, dimension)


def _changed_axes_range(dimension: int, mode: AdjacencyMode) -> Tuple[int, int]:
    """Allowed number of axes on which two adjacent cells differ (by exactly 1)."""
    if mode == AdjacencyMode.NONEMPTY_INTERSECTION:
        return 1, dimension
    if mode == AdjacencyMode.SHARED_AT_LEAST_EDGE:
        return 1, dimension - 1
    if mode == AdjacencyMode.SHARED_FACE:
        return 1, 1
    raise ValueError(f"Unsupported adjacency mode: {mode}")


def cells_adjacent(a, b, mode: AdjacencyMode) -> bool:
    """Geometric predicate on two coordinate tuples of the same level."""
    diff = np.abs(np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64))
    if diff.max(initial=0) > 1:
        return False
    low, high = _changed_axes_range(len(diff), mode)
    return low <= int(np.count_nonzero(diff)) <= high


class EdgeGraph:
    """Undirected simple graph on vertices 0..N-1.

    Edges are stored once as (i, j) with i < j, sorted lexicographically.
    """

    def __init__(self, num_vertices: int, edges):
        array = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if array.size and (array.min() < 0 or array.max() >= num_vertices):
            raise InvalidProblemError("edge endpoint outside the vertex range")
        if np.any(array[:, 0] == array[:, 1]):
            raise InvalidProblemError("self-loops are not allowed")

        lo = np.minimum(array[:, 0], array[:, 1])
        hi = np.maximum(array[:, 0], array[:, 1])
        array = np.unique(np.stack([lo, hi], axis=1), axis=0) if array.size else array
        array.setflags(write=False)

        self.num_vertices = int(num_vertices)
        self.edges = array
        self._adjacency: Optional[sparse.csr_matrix] = None

    @classmethod
    def path(cls, num_edges: int) -> "EdgeGraph":
        return cls(num_edges + 1, [(i, i + 1) for i in range(num_edges)])

    @classmethod
    def star(cls, leaves: int) -> "EdgeGraph":
        """Center is vertex 0, leaves are 1..leaves."""
        return cls(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix in CSR form."""
        if self._adjacency is None:
            n = self.num_vertices
            rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
            cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
            data = np.ones(rows.shape[0], dtype=np.float64)
            self._adjacency = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
        return self._adjacency

    def neighbors(self, vertex: int) -> np.ndarray:
        matrix = self.adjacency
        return matrix.indices[matrix.indptr[vertex]:matrix.indptr[vertex + 1]]

    def components(self) -> Tuple[int, np.ndarray]:
        """Number of connected components and the component label of each vertex."""
        count, labels = csgraph.connected_components(self.adjacency, directed=False)
        return int(count), labels


class CellGraph(EdgeGraph):
    """Graph on all level-n cells of a fractal under an adjacency mode."""

    def __init__(self, spec: FractalSpec, level: int, mode: AdjacencyMode,
                 vertices: CellSet, edges):
        super().__init__(len(vertices), edges)
        self.spec = spec
        self.level = level
        self.mode = mode
        self.vertices = vertices

    def index_of(self, cell: CellIndex) -> int:
        try:
            return self.vertices.index_of(cell)
        except KeyError:
            raise CellNotInGraphError(
                f"cell {cell.label} (level {cell.level}) is not a vertex of the "
                f"'{self.spec.name}' level-{self.level} graph"
            )

    def __repr__(self) -> str:
        return (f"CellGraph(spec={self.spec.name}, level={self.level}, mode={self.mode.value}, "
                f"vertices={self.num_vertices}, edges={self.num_edges})")


def build_graph(spec: FractalSpec, n: int, mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION,
                budget: Optional[int] = None) -> CellGraph:
    """Adjacency graph on cells_at_level(spec, n) by coordinate arithmetic."""
    vertices = cells_at_level(spec, n, budget)
    coords = vertices.coords
    positions = np.arange(len(vertices), dtype=np.int64)

    chunks = [np.zeros((0, 2), dtype=np.int64)]
    for offset in mode_offsets(spec.dimension, mode):
        targets = vertices.locate(coords + offset)
        hit = targets >= 0
        chunks.append(np.stack([positions[hit], targets[hit]], axis=1))

    graph = CellGraph(spec, n, mode, vertices, np.vstack(chunks))
    logger.info("Built cell graph", extra={
        "spec": spec.name,
        "level": n,
        "mode": mode.value,
        "vertices": graph.num_vertices,
        "edges": graph.num_edges
    })
    return graph


@lru_cache(maxsize=8)
def cached_graph(spec: FractalSpec, n: int, mode: AdjacencyMode) -> CellGraph:
    """build_graph memoized on (spec, level, mode); graphs are immutable."""
    return build_graph(spec, n, mode)


def gamma_cells(vertices: CellSet, cell: CellIndex) -> CellSet:
    """The cell plus every cell of `vertices` whose closure meets it."""
    if cell not in vertices:
        raise CellNotInGraphError(f"cell {cell.label} is not in the cell set")
    offsets = np.array(list(product((-1, 0, 1), repeat=cell.dimension)), dtype=np.int64)
    positions = vertices.locate(np.asarray(cell.coords, dtype=np.int64) + offsets)
    return CellSet(vertices.level, vertices.coords[positions[positions >= 0]], dimension=vertices.dimension)


def gamma(graph: CellGraph, cell: CellIndex) -> CellSet:
    """Γ(Q): always by nonempty intersection, whatever the graph's mode."""
    graph.index_of(cell)
    return gamma_cells(graph.vertices, cell)


def gamma_complement(graph: CellGraph, cell: CellIndex) -> CellSet:
    """Γ(Q)^c: the graph's vertices outside Γ(Q)."""
    return graph.vertices.difference(gamma(graph, cell))
