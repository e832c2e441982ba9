"""
Feature: Build the cell adjacency graph of a fractal level
  As a researcher
  I want the level-n cells joined according to an adjacency mode
  So that discrete energies can be evaluated on them

Scenario: Planar carpet at level 1
  Given F2 at level 1
  When the graph is built by nonempty intersection
  Then it has 21 vertices and 44 edges
  And face adjacency gives 24 edges, a subset of them

Scenario: Agreement with the geometric reference
  Given a built-in fractal and a small level
  When the graph is built and the pairwise reference is computed
  Then both produce exactly the same edges

Scenario: Symmetry
  Given F2 at level 2 or F3 at level 1
  When the vertices are mapped by a symmetry of the cube
  Then the edge set is mapped onto itself

Scenario: Disconnected pattern
  Given the Cantor pattern G1
  When its level-1 graph is built
  Then it has no edges
"""

import numpy as np
import pytest

from graphs.builder import EdgeGraph, build_graph, cached_graph, cells_adjacent, mode_offsets
from lattice.builtins import builtin_spec
from lattice.symmetry import apply_symmetry_coords, cube_symmetries
from models.errors import BudgetExceededError, CellNotInGraphError, InvalidProblemError
from models.fractals import CellIndex
from models.graphs import AdjacencyMode
from oracle.adjacency import exhaustive_adjacency

NI = AdjacencyMode.NONEMPTY_INTERSECTION
EDGE = AdjacencyMode.SHARED_AT_LEAST_EDGE
FACE = AdjacencyMode.SHARED_FACE


def _edge_set(graph):
    return {tuple(edge) for edge in graph.edges.tolist()}


@pytest.mark.parametrize("mode, edges", [(NI, 44), (EDGE, 24), (FACE, 24)])
def test_planar_carpet_level_one(mode, edges):
    graph = build_graph(builtin_spec("F2"), 1, mode)
    assert graph.num_vertices == 21
    assert graph.num_edges == edges


def test_face_edges_are_subset():
    spec = builtin_spec("F2")
    assert _edge_set(build_graph(spec, 2, FACE)) < _edge_set(build_graph(spec, 2, NI))


def test_carpet_3d_face_edges():
    # Given F3: 300 face pairs in the 5^3 block minus 6 removed cells with 6 each
    assert build_graph(builtin_spec("F3"), 1, FACE).num_edges == 264


def test_degrees_level_one():
    # Given the F2 level-1 graph
    graph = build_graph(builtin_spec("F2"), 1)
    degrees = np.diff(graph.adjacency.indptr)

    # Then the degree sum is twice the edge count and the center has 4 neighbors
    assert degrees.sum() == 88
    center = graph.index_of(CellIndex(level=1, coords=(3, 3)))
    assert degrees[center] == 4
    corner = graph.index_of(CellIndex(level=1, coords=(1, 1)))
    assert degrees[corner] == 3


def test_cantor_graph_has_no_edges():
    graph = build_graph(builtin_spec("G1"), 1)
    assert graph.num_vertices == 2
    assert graph.num_edges == 0
    assert build_graph(builtin_spec("G1"), 2).num_edges == 0


@pytest.mark.parametrize("name, level", [
    ("F2", 1), ("F2", 2), ("tildeF2", 1), ("tildeF2", 2), ("G1", 2), ("G2", 1), ("G2", 2), ("F3", 1),
])
@pytest.mark.parametrize("mode", [NI, EDGE, FACE])
def test_matches_geometric_reference(name, level, mode):
    # Given a built-in fractal
    spec = builtin_spec(name)

    # When both constructions run
    graph = build_graph(spec, level, mode)
    reference = exhaustive_adjacency(spec, level, mode)

    # Then the edge sets coincide
    assert _edge_set(graph) == set(reference)


def test_graph_is_connected_for_carpets():
    count, _ = build_graph(builtin_spec("F2"), 2).components()
    assert count == 1


def test_cells_adjacent_predicate():
    assert cells_adjacent((1, 1), (2, 2), NI)
    assert not cells_adjacent((1, 1), (2, 2), FACE)
    assert cells_adjacent((1, 1, 1), (2, 2, 1), EDGE)
    assert not cells_adjacent((1, 1, 1), (2, 2, 2), EDGE)
    assert not cells_adjacent((1, 1), (3, 1), NI)


def test_mode_offsets_counts():
    assert len(mode_offsets(2, NI)) == 4
    assert len(mode_offsets(3, NI)) == 13
    assert len(mode_offsets(3, EDGE)) == 9
    assert len(mode_offsets(3, FACE)) == 3


def test_cached_graph_is_reused():
    spec = builtin_spec("F2")
    assert cached_graph(spec, 1, NI) is cached_graph(spec, 1, NI)


def test_vertex_lookup():
    graph = build_graph(builtin_spec("F2"), 1)
    with pytest.raises(CellNotInGraphError):
        graph.index_of(CellIndex(level=1, coords=(2, 3)))


def test_budget():
    with pytest.raises(BudgetExceededError):
        build_graph(builtin_spec("F2"), 3, budget=500)


def test_edge_graph_normalizes():
    # Given duplicate and reversed edges
    graph = EdgeGraph(3, [(1, 0), (0, 1), (2, 1)])

    # Then each edge is stored once with i < j
    assert graph.edges.tolist() == [[0, 1], [1, 2]]
    with pytest.raises(InvalidProblemError):
        EdgeGraph(2, [(0, 0)])
    with pytest.raises(InvalidProblemError):
        EdgeGraph(2, [(0, 2)])


@pytest.mark.parametrize("name, level", [("F2", 2), ("F3", 1)])
@pytest.mark.parametrize("mode", [NI, FACE])
def test_graph_is_invariant_under_cube_symmetries(name, level, mode):
    # Given the graph of a symmetric carpet
    graph = build_graph(builtin_spec(name), level, mode)
    edges = _edge_set(graph)

    for symmetry in cube_symmetries(graph.spec.dimension):
        # When every vertex is mapped by a symmetry of the cube
        image = graph.vertices.locate(apply_symmetry_coords(symmetry, graph.vertices.coords, level))
        assert (image >= 0).all()

        # Then edges go to edges
        mapped = {tuple(sorted((int(image[u]), int(image[v])))) for u, v in edges}
        assert mapped == edges
