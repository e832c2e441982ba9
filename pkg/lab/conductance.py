from typing import Optional, Tuple

from lattice.cells import cells_at_level
from graphs.builder import CellGraph, gamma_cells
from models.errors import BudgetExceededError
from models.fractals import BASE, CellIndex, CellSet, FractalSpec
from models.graphs import AdjacencyMode
from models.reports import BoundReport
from models.solver import ConductanceResult, DirichletProblem, SolverConfig
from settings import M_BUDGET, SLOW_M, logger
from solvers.dirichlet import conductance_problem, solve_dirichlet

from .bounds import center_upper_bound, corner_lower_bound, is_carpet

BOUND_SLACK = 1e-9


def max_depth(d: int, allow_slow: bool = False) -> int:
    """Deepest refinement m permitted for scans in dimension d."""
    budget = M_BUDGET.get(d, 0)
    if allow_slow:
        return budget
    return min(budget, SLOW_M.get(d, budget + 1) - 1)


def check_slow(d: int, m: int, allow_slow: bool = False) -> None:
    """Depths at or beyond SLOW_M need allow_slow."""
    if not allow_slow and m >= SLOW_M.get(d, m + 1):
        raise BudgetExceededError(f"m = {m} in d = {d} is a slow run; pass allow_slow to run it")


def check_depth(d: int, m: int, allow_slow: bool = False) -> None:
    limit = max_depth(d, allow_slow)
    if m > limit:
        hint = "" if allow_slow or m > M_BUDGET.get(d, 0) else " (pass allow_slow to go deeper)"
        raise BudgetExceededError(f"m = {m} exceeds the depth budget {limit} for d = {d}{hint}")


def _applicable_bounds(spec: FractalSpec, n: int, cell: CellIndex, m: int, p: float):
    if not is_carpet(spec) or n != 1 or m < 1:
        return None, None
    d = spec.dimension
    lower = corner_lower_bound(d, p, m) if all(c in (1, BASE) for c in cell.coords) else None
    upper = center_upper_bound(d, m) if all(c == (BASE + 1) // 2 for c in cell.coords) else None
    return lower, upper


def cell_problem(spec: FractalSpec, n: int, cell: CellIndex, m: int, p: float,
                 mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION) -> Tuple[CellGraph, DirichletProblem]:
    """Dirichlet problem for Q against Γ(Q)^c on the level-(n+m) graph."""
    vertices = cells_at_level(spec, n)
    neighborhood = gamma_cells(vertices, cell)
    return conductance_problem(
        spec, n,
        CellSet.from_cells([cell], level=n, dimension=spec.dimension),
        vertices.difference(neighborhood),
        m, p, mode
    )


def cell_conductance(spec: FractalSpec, n: int, cell: CellIndex, m: int, p: float,
                     mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION,
                     config: Optional[SolverConfig] = None) -> BoundReport:
    """E_{p,m}(Q, Γ(Q)^c) with the corner lower bound or center upper bound attached when they apply."""
    return solve_cell(spec, n, cell, m, p, mode, config)[0]


def solve_cell(spec: FractalSpec, n: int, cell: CellIndex, m: int, p: float,
               mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION,
               config: Optional[SolverConfig] = None) -> Tuple[BoundReport, CellGraph, ConductanceResult]:
    """cell_conductance plus the graph and the full solver result (minimizer included)."""
    graph, problem = cell_problem(spec, n, cell, m, p, mode)
    logger.info("Solving cell conductance", extra={
        "spec": spec.name,
        "cell": cell.label,
        "depth": m,
        "p": p,
        "vertices": graph.num_vertices
    })
    result = solve_dirichlet(problem, config)

    lower, upper = _applicable_bounds(spec, n, cell, m, p)
    tolerance = BOUND_SLACK + result.residual
    satisfied = (
        lower is None or result.value >= lower - tolerance,
        upper is None or result.value <= upper + tolerance,
    )
    if not all(satisfied):
        logger.warning("Computed conductance violates an analytic bound", extra={
            "spec": spec.name,
            "cell": cell.label,
            "m": m,
            "p": p,
            "computed": result.value,
            "lower": lower,
            "upper": upper
        })

    report = BoundReport(
        spec=spec.name,
        d=spec.dimension,
        n=n,
        cell=cell.label,
        p=p,
        m=m,
        computed=result.value,
        lower=lower,
        upper=upper,
        tolerance=tolerance,
        satisfied=satisfied,
        iterations=result.iterations,
        residual=result.residual,
        converged=result.converged
    )
    return report, graph, result
