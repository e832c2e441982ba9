"""
Feature: Neighborhood Γ(Q) of a cell
  As a researcher
  I want Q together with all same-level cells meeting it
  So that conductances against Γ(Q)^c can be set up

Scenario: Planar carpet center and corner
  Given the F2 level-1 graph
  When Γ of the center and of a corner is taken
  Then they hold 5 and 4 cells and their complements 16 and 17

Scenario: Mode independence
  Given the face-adjacency graph
  When Γ of the center is taken
  Then it still uses closed-cube intersection
"""

import pytest

from graphs.builder import build_graph, gamma, gamma_complement
from lattice.builtins import builtin_spec
from models.errors import CellNotInGraphError
from models.fractals import CellIndex
from models.graphs import AdjacencyMode


@pytest.fixture(name="graph")
def graph_fixture():
    return build_graph(builtin_spec("F2"), 1)


def test_center(graph):
    center = CellIndex(level=1, coords=(3, 3))
    neighborhood = gamma(graph, center)
    assert neighborhood.as_tuples() == [(2, 2), (2, 4), (3, 3), (4, 2), (4, 4)]
    assert len(gamma_complement(graph, center)) == 16


def test_corner(graph):
    corner = CellIndex(level=1, coords=(1, 1))
    assert gamma(graph, corner).as_tuples() == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert len(gamma_complement(graph, corner)) == 17


def test_face_mode_uses_intersection():
    graph = build_graph(builtin_spec("F2"), 1, AdjacencyMode.SHARED_FACE)
    assert len(gamma(graph, CellIndex(level=1, coords=(3, 3)))) == 5


def test_carpet_3d_center():
    graph = build_graph(builtin_spec("F3"), 1)
    assert len(gamma(graph, CellIndex(level=1, coords=(3, 3, 3)))) == 21


def test_cell_not_in_graph(graph):
    with pytest.raises(CellNotInGraphError):
        gamma(graph, CellIndex(level=1, coords=(3, 2)))
