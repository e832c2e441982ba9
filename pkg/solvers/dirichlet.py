from typing import Optional, Tuple

import numpy as np
from scipy import sparse

from graphs.builder import CellGraph, cached_graph
from lattice.cells import check_budget, subdivide
from models.errors import InvalidProblemError, OverlappingSetsError
from models.fractals import CellSet, FractalSpec
from models.graphs import AdjacencyMode
from models.solver import ConductanceResult, DirichletProblem, SolverConfig
from settings import logger

from .base import DescentBackend, DescentBackendFactory, LinearBackend, LinearBackendFactory

ARMIJO = 1e-4
MIN_STEP = 1e-12
MAX_STEP = 16.0
EPS_FACTOR = 0.1


class ReducedSystem:
    """Free-vertex view of a Dirichlet problem.

    Free vertices whose component holds no fixed vertex are isolated: they
    are pinned to 0 and leave the system. The remaining free vertices are
    the unknowns, indexed 0..k-1.
    """

    def __init__(self, problem: DirichletProblem):
        graph = problem.graph
        n = graph.num_vertices
        self.p = float(problem.p)

        is_fixed = np.zeros(n, dtype=bool)
        is_fixed[problem.fixed_index] = True
        count, labels = graph.components()
        anchored = np.zeros(count, dtype=bool)
        anchored[labels[problem.fixed_index]] = True
        free = ~is_fixed
        self.isolated = np.flatnonzero(free & ~anchored[labels])
        self.active = np.flatnonzero(free & anchored[labels])

        self.base = np.zeros(n)
        self.base[problem.fixed_index] = problem.fixed_value
        self.span = float(problem.fixed_value.max() - problem.fixed_value.min())

        local = np.full(n, -1, dtype=np.int64)
        local[self.active] = np.arange(self.active.size)
        edges = graph.edges
        moving = (local[edges[:, 0]] >= 0) | (local[edges[:, 1]] >= 0)
        self.edges = edges[moving]
        static = edges[~moving]
        self.static_energy = float(np.sum(np.abs(self.base[static[:, 0]] - self.base[static[:, 1]]) ** self.p))

        self.head = local[self.edges[:, 0]]
        self.tail = local[self.edges[:, 1]]
        self._both = (self.head >= 0) & (self.tail >= 0)
        self._head_free = self.head >= 0
        self._tail_free = self.tail >= 0

    @property
    def size(self) -> int:
        return int(self.active.size)

    def expand(self, x: np.ndarray) -> np.ndarray:
        values = self.base.copy()
        values[self.active] = x
        return values

    def differences(self, x: np.ndarray) -> np.ndarray:
        values = self.expand(x)
        return values[self.edges[:, 0]] - values[self.edges[:, 1]]

    def true_energy(self, x: np.ndarray) -> float:
        return float(np.sum(np.abs(self.differences(x)) ** self.p)) + self.static_energy

    def smoothed_energy(self, x: np.ndarray, eps: float) -> float:
        delta = self.differences(x)
        terms = np.power(delta * delta + eps * eps, self.p / 2.0) - eps ** self.p
        return float(np.sum(terms)) + self.static_energy

    def gradient(self, flux: np.ndarray) -> np.ndarray:
        """Gradient on the unknowns from per-edge derivatives d/dΔ."""
        k = self.size
        return (np.bincount(self.head[self._head_free], weights=flux[self._head_free], minlength=k)
                - np.bincount(self.tail[self._tail_free], weights=flux[self._tail_free], minlength=k))

    def smoothed_gradient(self, delta: np.ndarray, eps: float) -> np.ndarray:
        return self.gradient(self.p * delta * np.power(delta * delta + eps * eps, self.p / 2.0 - 1.0))

    def weighted_laplacian(self, weights: np.ndarray) -> sparse.csr_matrix:
        """Laplacian of the unknowns with edge weights; edges to fixed vertices add to the diagonal."""
        both = self._both
        rows = np.concatenate([self.head[both], self.tail[both],
                               self.head[self._head_free], self.tail[self._tail_free]])
        cols = np.concatenate([self.tail[both], self.head[both],
                               self.head[self._head_free], self.tail[self._tail_free]])
        data = np.concatenate([-weights[both], -weights[both],
                               weights[self._head_free], weights[self._tail_free]])
        k = self.size
        return sparse.csr_matrix((data, (rows, cols)), shape=(k, k))


def _line_search(system: ReducedSystem, x: np.ndarray, direction: np.ndarray, slope: float,
                 current: float, eps: float) -> Tuple[float, float]:
    """Armijo backtracking from t = 1, expanding by doubling when t = 1 is accepted."""
    step = 1.0
    while step >= MIN_STEP:
        trial = system.smoothed_energy(x + step * direction, eps)
        if trial <= current + ARMIJO * step * slope:
            break
        step *= 0.5
    else:
        return 0.0, current

    if step == 1.0:
        while step < MAX_STEP:
            longer = system.smoothed_energy(x + 2.0 * step * direction, eps)
            if longer >= trial:
                break
            step, trial = 2.0 * step, longer
    return step, trial


def _solve_quadratic(system: ReducedSystem, linear: LinearBackend) -> Tuple[np.ndarray, int, float, bool]:
    """Minimizer of the p = 2 energy on the unknowns (one Laplacian solve).

    The residual is the relative norm |L x - b| / |b|.
    """
    delta = system.differences(np.zeros(system.size))
    rhs = -system.gradient(2.0 * delta)
    matrix = system.weighted_laplacian(np.full(system.edges.shape[0], 2.0))
    solved = linear.solve(matrix, rhs)
    scale = max(float(np.linalg.norm(rhs)), np.finfo(float).tiny)
    residual = float(np.linalg.norm(matrix @ solved.solution - rhs)) / scale
    return solved.solution, solved.iterations, residual, solved.converged


def _descend(system: ReducedSystem, start: np.ndarray, descent: DescentBackend,
             linear: LinearBackend, config: SolverConfig) -> Tuple[np.ndarray, int, float, bool]:
    """Smoothed-energy descent with ε continuation down to the floor."""
    p = system.p
    eps = config.eps_start * system.span
    floor = config.eps_floor * system.span
    tol = config.rel_tolerance

    x = start
    current = system.smoothed_energy(x, eps)
    residual = np.inf
    converged = False
    iterations = 0

    while iterations < config.max_iterations:
        iterations += 1
        delta = system.differences(x)
        gradient = system.smoothed_gradient(delta, eps)
        matrix = system.weighted_laplacian(descent.curvature_weights(delta, eps, p))
        direction = linear.solve(matrix, -gradient).solution
        decrement = float(-gradient @ direction)
        scale = max(current, np.finfo(float).tiny)
        residual = float(np.sqrt(max(decrement, 0.0) / (2.0 * scale)))

        if not np.isfinite(decrement) or decrement < 0:
            logger.warning("Descent direction is not downhill", extra={
                "iteration": iterations,
                "eps": eps,
                "decrement": decrement
            })
            break

        if decrement / 2.0 <= tol * scale:
            if eps > floor:
                eps = max(eps * EPS_FACTOR, floor)
                current = system.smoothed_energy(x, eps)
                continue
            converged = True
            break

        step, trial = _line_search(system, x, direction, -decrement, current, eps)
        if step == 0.0:
            if eps > floor:
                eps = max(eps * EPS_FACTOR, floor)
                current = system.smoothed_energy(x, eps)
                continue
            logger.warning("Line search stalled at the smoothing floor", extra={
                "iteration": iterations,
                "residual": residual
            })
            break
        x = x + step * direction
        current = trial

    return x, iterations, residual, converged


def solve_dirichlet(problem: DirichletProblem, config: Optional[SolverConfig] = None) -> ConductanceResult:
    """Minimize Σ|f(u) - f(v)|^p over f agreeing with the fixed values.

    Returns the minimal energy, the minimizer on every vertex and
    convergence diagnostics. Non-convergence is reported, not raised.
    """
    config = config or SolverConfig()
    system = ReducedSystem(problem)
    linear = LinearBackendFactory.get_backend(config.p2_backend)

    if system.isolated.size:
        logger.warning("Free vertices with no path to a fixed vertex were set to 0", extra={
            "isolated": int(system.isolated.size)
        })

    if system.size == 0:
        x = np.zeros(0)
        iterations, residual, converged, backend = 0, 0.0, True, linear.name
    elif system.span == 0.0:
        # constant boundary data: the constant extension has zero energy
        x = np.full(system.size, float(problem.fixed_value[0]))
        iterations, residual, converged, backend = 0, 0.0, True, linear.name
    else:
        x, iterations, residual, converged = _solve_quadratic(system, linear)
        backend = linear.name
        if problem.p != 2:
            descent = DescentBackendFactory.get_backend(config.general_backend)
            x, iterations, residual, converged = _descend(system, x, descent, linear, config)
            backend = descent.name

    solution = system.expand(x)
    value = system.true_energy(x)
    if not converged:
        logger.warning("Dirichlet solve did not converge", extra={
            "backend": backend,
            "iterations": iterations,
            "residual": residual,
            "p": problem.p
        })

    return ConductanceResult(
        value=value,
        solution=solution,
        iterations=iterations,
        residual=residual if np.isfinite(residual) else float(np.finfo(float).max),
        converged=converged,
        backend=backend,
        isolated=[int(v) for v in system.isolated]
    )


def conductance_problem(spec: FractalSpec, n: int, first: CellSet, second: CellSet, m: int, p: float,
                        mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION,
                        budget: Optional[int] = None) -> Tuple[CellGraph, DirichletProblem]:
    """Level-(n+m) graph with S^m(first) fixed to 1 and S^m(second) fixed to 0."""
    if not p > 1:
        raise InvalidProblemError(f"p must exceed 1, got {p}")
    if len(first) == 0 and len(second) == 0:
        raise InvalidProblemError("both cell sets are empty")
    if first.intersects(second):
        raise OverlappingSetsError("the two cell sets share a cell")
    if first.level != n or second.level != n:
        raise InvalidProblemError(f"cell sets must be level {n}, got {first.level} and {second.level}")
    if m < 0:
        raise InvalidProblemError(f"m must be non-negative, got {m}")
    check_budget(spec.retained_count ** (n + m), budget, what=f"level-{n + m} graph")

    graph = cached_graph(spec, n + m, mode)
    ones = graph.vertices.indices_of(subdivide(spec, first, m, budget))
    zeros = graph.vertices.indices_of(subdivide(spec, second, m, budget))
    problem = DirichletProblem(
        graph=graph,
        fixed_index=np.concatenate([ones, zeros]),
        fixed_value=np.concatenate([np.ones(ones.size), np.zeros(zeros.size)]),
        p=p
    )
    return graph, problem


def effective_conductance(spec: FractalSpec, n: int, first: CellSet, second: CellSet, m: int, p: float,
                          mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION,
                          config: Optional[SolverConfig] = None,
                          budget: Optional[int] = None) -> ConductanceResult:
    """E_p(first, second; m): energy between the depth-m refinements of two disjoint level-n cell sets."""
    graph, problem = conductance_problem(spec, n, first, second, m, p, mode, budget)
    logger.info("Solving effective conductance", extra={
        "spec": spec.name,
        "level": n,
        "depth": m,
        "p": p,
        "vertices": graph.num_vertices,
        "fixed": int(problem.fixed_index.size)
    })
    return solve_dirichlet(problem, config)
