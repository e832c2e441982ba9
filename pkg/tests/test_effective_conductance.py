"""
Feature: Effective p-conductance between cell sets
  As a researcher
  I want E_p(A, B; m) for disjoint level-n cell sets
  So that conductances of carpet cells can be studied

Scenario: Closed forms at depth 0
  Given the center or corner cell of F2 and the complement of its neighborhood
  When the conductance is computed at m = 0
  Then it matches the hand-computed value

Scenario: Invalid input
  Given overlapping sets, a wrong level or an oversized graph
  When the conductance is requested
  Then a domain error is raised
"""

import pytest

from lattice.builtins import builtin_spec
from lattice.cells import cells_at_level
from graphs.builder import gamma_cells
from models.errors import BudgetExceededError, InvalidProblemError, OverlappingSetsError
from models.fractals import CellIndex, CellSet
from models.solver import SolverConfig
from solvers.dirichlet import effective_conductance


@pytest.fixture(name="f2")
def f2_fixture():
    return builtin_spec("F2")


def _against_complement(spec, coords):
    cell = CellIndex(level=1, coords=coords)
    vertices = cells_at_level(spec, 1)
    return CellSet.from_cells([cell]), vertices.difference(gamma_cells(vertices, cell))


def test_center_at_depth_zero(f2):
    # Given the center cell against the outside of its neighborhood
    first, second = _against_complement(f2, (3, 3))

    # When solved at p = 2 and m = 0
    result = effective_conductance(f2, 1, first, second, 0, 2.0)

    # Then the four diagonal neighbors each sit at 1/6
    assert result.value == pytest.approx(10 / 3, rel=1e-10)


@pytest.mark.parametrize("p", [1.2, 1.5, 3.0, 4.5])
def test_center_at_depth_zero_general_p(f2, p):
    first, second = _against_complement(f2, (3, 3))
    g = 1.0 / (1.0 + 5.0 ** (1.0 / (p - 1.0)))
    expected = 4.0 * ((1.0 - g) ** p + 5.0 * g ** p)
    result = effective_conductance(f2, 1, first, second, 0, p, config=SolverConfig(rel_tolerance=1e-12))
    assert result.converged
    assert result.value == pytest.approx(expected, rel=1e-8)


def test_corner_at_depth_zero(f2):
    first, second = _against_complement(f2, (1, 1))
    result = effective_conductance(f2, 1, first, second, 0, 2.0)
    assert result.value == pytest.approx(29 / 16, rel=1e-10)


def test_corner_at_depth_one_respects_lower_bound(f2):
    first, second = _against_complement(f2, (1, 1))
    result = effective_conductance(f2, 1, first, second, 1, 2.0)
    assert 1 / 3 <= result.value <= 4


def test_disconnected_sets_have_zero_conductance():
    # Given the two cells of G1, which never touch
    spec = builtin_spec("G1")
    first = CellSet(1, [(1,)])
    second = CellSet(1, [(5,)])

    # Then no energy is needed
    result = effective_conductance(spec, 1, first, second, 1, 2.0)
    assert result.value == 0.0


@pytest.mark.parametrize("corner", [(1, 5), (5, 1), (5, 5)])
def test_symmetric_corners_agree(f2, corner):
    reference = effective_conductance(f2, 1, *_against_complement(f2, (1, 1)), 1, 2.0).value
    other = effective_conductance(f2, 1, *_against_complement(f2, corner), 1, 2.0).value
    assert other == pytest.approx(reference, rel=1e-8)


def test_overlapping_sets(f2):
    cells = CellSet(1, [(1, 1), (1, 2)])
    with pytest.raises(OverlappingSetsError):
        effective_conductance(f2, 1, cells, CellSet(1, [(1, 2)]), 0, 2.0)


def test_invalid_arguments(f2):
    first, second = _against_complement(f2, (3, 3))
    with pytest.raises(InvalidProblemError):
        effective_conductance(f2, 1, first, second, 0, 1.0)
    with pytest.raises(InvalidProblemError):
        effective_conductance(f2, 1, first, second, -1, 2.0)
    with pytest.raises(InvalidProblemError):
        effective_conductance(f2, 2, first, second, 0, 2.0)


def test_budget(f2):
    first, second = _against_complement(f2, (3, 3))
    with pytest.raises(BudgetExceededError):
        effective_conductance(f2, 1, first, second, 2, 2.0, budget=1000)
