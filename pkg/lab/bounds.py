"""Closed-form bounds and counts for the carpets F2 and F3 at level 1."""
import math
from typing import List, Tuple

import numpy as np

from graphs.builder import cached_graph
from lattice.builtins import boundary_for_dimension, carpet_for_dimension
from lattice.cells import subdivide
from models.errors import InvalidProblemError, UnsupportedDimensionError
from models.fractals import BASE, CellIndex, CellSet, FractalSpec
from models.graphs import AdjacencyMode
from models.reports import IndicatorCut
from solvers.energy import energy

SUPPORTED_DIMENSIONS = (2, 3)

# Strip multiplicity per refinement step: 2 boundary cells of G1, 16 of G2.
_STRIP_GROWTH = {2: 2, 3: 16}
_LOG5 = math.log(BASE)


def check_dimension(d: int) -> None:
    if d not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimensionError(f"only d = 2 and d = 3 are supported, got d = {d}")


def _check_depth(m: int) -> None:
    if m < 1:
        raise InvalidProblemError(f"the bounds need m >= 1, got {m}")


def corner_lower_bound(d: int, p: float, m: int) -> float:
    """Lower bound on E_{p,m}(Q1, Γ(Q1)^c) for the corner cell Q1 = [0, 1/5]^d."""
    check_dimension(d)
    _check_depth(m)
    if not p > 1:
        raise InvalidProblemError(f"p must exceed 1, got {p}")
    return float(_STRIP_GROWTH[d] ** m * (BASE ** m + 1) ** (1.0 - p))


def center_upper_bound(d: int, m: int) -> float:
    """Upper bound on E_{p,m}(Q2, Γ(Q2)^c) for the center cell, any p."""
    check_dimension(d)
    _check_depth(m)
    if d == 2:
        return 4.0
    return float(7 * (12 * BASE ** m - 16))


def failure_threshold(d: int) -> float:
    """Exponent below which the corner/center ratio provably diverges."""
    check_dimension(d)
    if d == 2:
        return math.log(10) / _LOG5
    return math.log(16) / _LOG5


def conformal_dimension_bounds(d: int) -> Tuple[float, float]:
    """Known analytic bracket of the conformal dimension of the carpet."""
    check_dimension(d)
    if d == 2:
        return math.log(10) / _LOG5, math.log(21) / _LOG5
    return math.log(80) / _LOG5, math.log(119) / _LOG5


def boundary_strip_count(d: int, m: int) -> int:
    """Level-(m+1) cells of G^(d-1) inside [0, 1/5]^(d-1), by enumeration."""
    check_dimension(d)
    if m < 0:
        raise InvalidProblemError(f"m must be non-negative, got {m}")
    boundary = boundary_for_dimension(d - 1)
    corner = CellSet(1, [(1,) * (d - 1)])
    return len(subdivide(boundary, corner, m))


def strip_paths(d: int, m: int) -> List[CellSet]:
    """Chains of level-(m+1) cells crossing from S^m(Q1) to outside Γ(Q1).

    One chain per boundary strip cell q: the cells (5^m + i, q) for
    i = 0..5^m+1, listed along the first axis.
    """
    check_dimension(d)
    if m < 0:
        raise InvalidProblemError(f"m must be non-negative, got {m}")
    boundary = boundary_for_dimension(d - 1)
    strips = subdivide(boundary, CellSet(1, [(1,) * (d - 1)]), m).coords
    first = BASE ** m + np.arange(BASE ** m + 2, dtype=np.int64)
    paths = []
    for strip in strips:
        coords = np.column_stack([first, np.tile(strip, (first.size, 1))])
        paths.append(CellSet(m + 1, coords, dimension=d))
    return paths


def indicator_cut(spec: FractalSpec, n: int, cell: CellIndex, m: int, p: float,
                  mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION) -> IndicatorCut:
    """Energy of 1 on S^m(Q), 0 elsewhere, and the number of cells of S^m(Q) on its boundary."""
    graph = cached_graph(spec, n + m, mode)
    inside = graph.vertices.indices_of(subdivide(spec, CellSet.from_cells([cell]), m))
    values = np.zeros(graph.num_vertices)
    values[inside] = 1.0

    edges = graph.edges
    crossing = values[edges[:, 0]] != values[edges[:, 1]]
    ends = edges[crossing].ravel()
    boundary = np.unique(ends[values[ends] == 1.0])
    return IndicatorCut(
        cell=cell.label,
        m=m,
        p=p,
        energy=energy(graph, values, p),
        boundary_cells=int(boundary.size)
    )


def corner_cell(d: int) -> CellIndex:
    return CellIndex(level=1, coords=(1,) * d)


def center_cell(d: int) -> CellIndex:
    return CellIndex(level=1, coords=((BASE + 1) // 2,) * d)


def is_carpet(spec: FractalSpec) -> bool:
    """True when the spec has the retained pattern of F2 or F3."""
    return spec.dimension in SUPPORTED_DIMENSIONS and spec.same_pattern(carpet_for_dimension(spec.dimension))
