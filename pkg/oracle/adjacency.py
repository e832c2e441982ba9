"""Geometric reference for the cell graphs: closed cubes tested pairwise."""
from fractions import Fraction
from itertools import combinations
from typing import List, Tuple

from models.errors import OracleCapError
from models.fractals import FractalSpec
from models.graphs import AdjacencyMode

MAX_CELLS = 10_000

Coords = Tuple[int, ...]


def recursive_cells(spec: FractalSpec, n: int) -> List[Coords]:
    """Level-n cells by recursive refinement, sorted lexicographically."""
    if spec.retained_count ** n > MAX_CELLS:
        raise OracleCapError(f"{spec.retained_count}^{n} cells exceed the oracle cap of {MAX_CELLS}")
    cells: List[Coords] = [(1,) * spec.dimension]
    for _ in range(n):
        cells = [
            tuple(5 * (c - 1) + r for c, r in zip(cell, pattern))
            for cell in cells
            for pattern in spec.retained
        ]
    return sorted(cells)


def _intersection_dimension(a: Coords, b: Coords, level: int) -> int:
    """Dimension of the intersection of the two closed cubes, -1 when disjoint."""
    side = Fraction(1, 5 ** level)
    dimension = 0
    for x, y in zip(a, b):
        low = max((x - 1) * side, (y - 1) * side)
        high = min(x * side, y * side)
        if low > high:
            return -1
        if low < high:
            dimension += 1
    return dimension


def _accepts(mode: AdjacencyMode, intersection: int, dimension: int) -> bool:
    if mode == AdjacencyMode.NONEMPTY_INTERSECTION:
        return intersection >= 0
    if mode == AdjacencyMode.SHARED_AT_LEAST_EDGE:
        return intersection >= 1
    if mode == AdjacencyMode.SHARED_FACE:
        return intersection >= dimension - 1
    raise ValueError(f"Unsupported adjacency mode: {mode}")


def exhaustive_adjacency(spec: FractalSpec, n: int,
                         mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION) -> List[Tuple[int, int]]:
    """All adjacent pairs (i, j), i < j, as positions in the sorted level-n cell list."""
    cells = recursive_cells(spec, n)
    edges = []
    for (i, a), (j, b) in combinations(enumerate(cells), 2):
        if _accepts(mode, _intersection_dimension(a, b, n), spec.dimension):
            edges.append((i, j))
    return edges
