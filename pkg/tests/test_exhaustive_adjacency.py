"""
Feature: Geometric adjacency reference
  As a maintainer
  I want cell adjacency decided by intersecting closed cubes
  So that the graph builder has an independent cross-check

Scenario: Known counts
  Given F2 and G1 at level 1
  When all pairs are tested
  Then the edge counts are the hand-counted ones
"""

import pytest

from lattice.builtins import builtin_spec
from models.errors import OracleCapError
from models.graphs import AdjacencyMode
from oracle.adjacency import exhaustive_adjacency, recursive_cells


def test_boundary_pattern_has_no_edges_at_level_one():
    assert exhaustive_adjacency(builtin_spec("G1"), 1) == []


@pytest.mark.parametrize("mode, expected", [
    (AdjacencyMode.NONEMPTY_INTERSECTION, 44),
    (AdjacencyMode.SHARED_AT_LEAST_EDGE, 24),
    (AdjacencyMode.SHARED_FACE, 24),
])
def test_f2_level_one(mode, expected):
    assert len(exhaustive_adjacency(builtin_spec("F2"), 1, mode)) == expected


def test_f3_faces_level_one():
    assert len(exhaustive_adjacency(builtin_spec("F3"), 1, AdjacencyMode.SHARED_FACE)) == 264


def test_recursive_cells():
    cells = recursive_cells(builtin_spec("G1"), 2)
    assert cells == [(1,), (5,), (21,), (25,)]
    assert len(recursive_cells(builtin_spec("F2"), 2)) == 441


def test_cap():
    with pytest.raises(OracleCapError):
        recursive_cells(builtin_spec("F3"), 2)
