"""
Feature: Solve the p-harmonic Dirichlet problem
  As a researcher
  I want the minimal p-energy among functions with prescribed boundary values
  So that effective p-conductances can be computed

Scenario: Closed forms
  Given a path or a star with fixed end values
  When the problem is solved
  Then the minimizer and energy match the closed forms

Scenario: Invariants
  Given random problems on small graphs
  When they are solved
  Then the maximum principle, the c^p scaling law, backend agreement
  and first-order optimality hold

Scenario: Isolated vertices
  Given free vertices without a path to a fixed vertex
  When the problem is solved
  Then they are set to 0 and reported

Scenario: Iteration cap
  Given max_iterations = 1 and p != 2
  When the problem is solved
  Then a result with converged = False is returned
"""

import numpy as np
import pytest
from pydantic import ValidationError

from graphs.builder import EdgeGraph, build_graph
from lattice.builtins import builtin_spec
from models.graphs import AdjacencyMode
from models.solver import DirichletProblem, GeneralBackend, P2Backend, SolverConfig
from solvers.dirichlet import solve_dirichlet
from solvers.energy import energy

TIGHT = SolverConfig(rel_tolerance=1e-14)


def _random_problem(rng, graph, p, scale=1.0):
    count = graph.num_vertices
    fixed = rng.choice(count, size=max(2, count // 5), replace=False)
    values = rng.random(fixed.size) * scale
    values[0], values[1] = 0.0, scale
    return DirichletProblem(graph=graph, fixed_index=fixed, fixed_value=values, p=p)


@pytest.fixture(name="level_two")
def level_two_fixture():
    return build_graph(builtin_spec("F2"), 2)


@pytest.mark.parametrize("k", [1, 5, 20, 100])
@pytest.mark.parametrize("p", [1.1, 1.5, 2.0, 3.0])
def test_path_conductance(k, p):
    # Given a path with k edges, ends fixed to 1 and 0
    problem = DirichletProblem.from_mapping(EdgeGraph.path(k), {0: 1.0, k: 0.0}, p)

    # When solved
    result = solve_dirichlet(problem, TIGHT)

    # Then the minimizer is linear and the energy is k^(1-p)
    assert result.converged
    assert result.value == pytest.approx(k ** (1 - p), rel=1e-10)
    assert np.allclose(result.solution, np.linspace(1.0, 0.0, k + 1), atol=1e-8)


@pytest.mark.parametrize("p", [1.3, 2.0, 4.0])
def test_three_vertex_path(p):
    result = solve_dirichlet(DirichletProblem.from_mapping(EdgeGraph.path(2), {0: 1.0, 2: 0.0}, p))
    assert result.solution[1] == pytest.approx(0.5, abs=1e-9)


def test_star():
    # Given a star whose first leaf is 1 and five leaves are 0
    fixed = {1: 1.0, 2: 0.0, 3: 0.0, 4: 0.0, 5: 0.0, 6: 0.0}
    result = solve_dirichlet(DirichletProblem.from_mapping(EdgeGraph.star(6), fixed, 2.0))

    # Then the center is 1/6 and the energy 5/6
    assert result.solution[0] == pytest.approx(1 / 6, abs=1e-12)
    assert result.value == pytest.approx(5 / 6, rel=1e-12)
    assert result.backend == "direct"


def test_all_vertices_fixed():
    problem = DirichletProblem.from_mapping(EdgeGraph.path(2), {0: 1.0, 1: 0.25, 2: 0.0}, 2.0)
    result = solve_dirichlet(problem)
    assert result.converged
    assert result.value == pytest.approx(0.75 ** 2 + 0.25 ** 2)


def test_constant_boundary_data():
    problem = DirichletProblem.from_mapping(EdgeGraph.path(4), {0: 0.3, 4: 0.3}, 1.5)
    result = solve_dirichlet(problem)
    assert result.value == 0.0
    assert np.allclose(result.solution, 0.3)


def test_isolated_component():
    # Given a path 0-1-2 and a separate edge 3-4
    graph = EdgeGraph(5, [(0, 1), (1, 2), (3, 4)])
    problem = DirichletProblem.from_mapping(graph, {0: 1.0, 2: 0.0}, 2.0)

    # When solved
    result = solve_dirichlet(problem)

    # Then the separate edge is pinned to 0 and flagged
    assert result.isolated == [3, 4]
    assert result.solution[3] == 0.0 and result.solution[4] == 0.0
    assert result.value == pytest.approx(0.5)


def test_invalid_problems():
    graph = EdgeGraph.path(2)
    with pytest.raises(ValidationError):
        DirichletProblem.from_mapping(graph, {0: 1.0}, 1.0)
    with pytest.raises(ValidationError):
        DirichletProblem.from_mapping(graph, {}, 2.0)
    with pytest.raises(ValidationError):
        DirichletProblem.from_mapping(graph, {5: 1.0}, 2.0)
    with pytest.raises(ValidationError):
        DirichletProblem.from_mapping(graph, {0: float("nan")}, 2.0)


def test_iteration_cap_reports_non_convergence():
    # Given a star whose p = 2 warm start is not optimal for p = 1.5
    fixed = {1: 1.0, 2: 0.0, 3: 0.0, 4: 0.0, 5: 0.0, 6: 0.0}
    problem = DirichletProblem.from_mapping(EdgeGraph.star(6), fixed, 1.5)

    # When only one iteration is allowed
    result = solve_dirichlet(problem, SolverConfig(max_iterations=1))

    # Then the result is returned and flagged
    assert not result.converged
    assert result.iterations == 1


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_maximum_principle(level_two, p):
    rng = np.random.default_rng(11)
    problem = _random_problem(rng, level_two, p)
    result = solve_dirichlet(problem)
    low, high = problem.fixed_value.min(), problem.fixed_value.max()
    assert result.solution.min() >= low - 1e-6
    assert result.solution.max() <= high + 1e-6
    assert np.array_equal(result.solution[problem.fixed_index], problem.fixed_value)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_value_is_energy_of_solution(level_two, p):
    rng = np.random.default_rng(5)
    result = solve_dirichlet(_random_problem(rng, level_two, p))
    assert result.value == pytest.approx(energy(level_two, result.solution, p), rel=1e-12)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_scaling_law(level_two, p):
    # Given the same problem with boundary values multiplied by c = 3
    rng = np.random.default_rng(3)
    base = _random_problem(rng, level_two, p)
    scaled = DirichletProblem(graph=level_two, fixed_index=base.fixed_index,
                              fixed_value=3.0 * base.fixed_value, p=p)

    # Then the energy scales by c^p
    first = solve_dirichlet(base, TIGHT).value
    second = solve_dirichlet(scaled, TIGHT).value
    assert second == pytest.approx(3.0 ** p * first, rel=1e-8)


def test_p2_backends_agree(level_two):
    rng = np.random.default_rng(17)
    problem = _random_problem(rng, level_two, 2.0)
    direct = solve_dirichlet(problem, SolverConfig(p2_backend=P2Backend.DIRECT))
    iterative = solve_dirichlet(problem, SolverConfig(p2_backend=P2Backend.CONJUGATE_GRADIENT))
    assert iterative.backend == "conjugate-gradient"
    assert iterative.iterations > 1
    assert iterative.value == pytest.approx(direct.value, rel=1e-7)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_general_backends_agree(level_two, p):
    rng = np.random.default_rng(23)
    problem = _random_problem(rng, level_two, p)
    newton = solve_dirichlet(problem, SolverConfig(general_backend=GeneralBackend.DAMPED_NEWTON))
    irls = solve_dirichlet(problem, SolverConfig(general_backend=GeneralBackend.IRLS))
    assert newton.backend == "damped-Newton" and irls.backend == "IRLS"
    assert newton.converged and irls.converged
    assert irls.value == pytest.approx(newton.value, rel=1e-6)


@pytest.mark.parametrize("p", [1.5, 2.0])
def test_more_edges_never_lower_the_energy(p):
    # Given the same fixed data on the face graph and the intersection graph
    spec = builtin_spec("F2")
    sparse_graph = build_graph(spec, 2, mode=AdjacencyMode.SHARED_FACE)
    dense_graph = build_graph(spec, 2)
    rng = np.random.default_rng(31)
    problem = _random_problem(rng, dense_graph, p)
    sparse_problem = DirichletProblem(graph=sparse_graph, fixed_index=problem.fixed_index,
                                      fixed_value=problem.fixed_value, p=p)

    # Then the graph with more edges has at least the energy
    assert solve_dirichlet(sparse_problem).value <= solve_dirichlet(problem).value + 1e-9


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_first_order_optimality(p):
    # Given a random connected graph on 12 vertices
    rng = np.random.default_rng(41)
    edges = [(i, i + 1) for i in range(11)]
    edges += [(int(a), int(b)) for a, b in rng.integers(0, 12, size=(15, 2)) if a != b]
    graph = EdgeGraph(12, edges)
    problem = DirichletProblem.from_mapping(graph, {0: 1.0, 11: 0.0, 5: 0.4}, p)

    # When solved tightly
    result = solve_dirichlet(problem, TIGHT)

    # Then every free directional derivative vanishes up to tolerance
    step = 1e-5
    free = [v for v in range(12) if v not in (0, 5, 11)]
    for vertex in free:
        up, down = result.solution.copy(), result.solution.copy()
        up[vertex] += step
        down[vertex] -= step
        slope = (energy(graph, up, p) - energy(graph, down, p)) / (2 * step)
        assert abs(slope) <= 1e-6 * (1 + result.value)
