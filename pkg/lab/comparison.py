from typing import Iterable, Optional

from lattice.builtins import builtin_spec
from models.errors import BudgetExceededError, InvalidProblemError
from models.fractals import FractalSpec
from models.reports import ComparisonResult, ComparisonRow
from models.solver import SolverConfig
from tasks.scan_tasks import ConductanceTask, run_grid

from .bounds import corner_cell
from .scaling import scaling_fit_from_samples

MAX_COMPARISON_DEPTH = 2


def subgraph_comparison(m_range: Iterable[int], p: float, config: Optional[SolverConfig] = None,
                        spec: Optional[FractalSpec] = None, sub_spec: Optional[FractalSpec] = None,
                        threads: Optional[int] = None) -> ComparisonResult:
    """Corner conductance on a fractal against the same quantity on a sub-fractal.

    Defaults to F2 against tildeF2. The sub-fractal value is the plain
    cell-graph conductance, flagged as a surrogate in the result.
    """
    spec = spec or builtin_spec("F2")
    sub_spec = sub_spec or builtin_spec("tildeF2")
    if spec.dimension != sub_spec.dimension:
        raise InvalidProblemError("fractal and sub-fractal must share the dimension")
    depths = sorted(set(m_range))
    if not depths:
        raise InvalidProblemError("m_range is empty")
    if not p > 1:
        raise InvalidProblemError(f"p must exceed 1, got {p}")
    if depths[0] < 0 or depths[-1] > MAX_COMPARISON_DEPTH:
        raise BudgetExceededError(f"comparison depths must lie in 0..{MAX_COMPARISON_DEPTH}, got {depths}")

    corner = corner_cell(spec.dimension)
    tasks = []
    for m in depths:
        tasks.append(ConductanceTask(spec=spec, n=1, cell=corner, m=m, p=p, config=config))
        tasks.append(ConductanceTask(spec=sub_spec, n=1, cell=corner, m=m, p=p, config=config))
    reports = run_grid(tasks, threads)

    rows = []
    for m, full, sub in zip(depths, reports[0::2], reports[1::2]):
        tolerance = 1e-9 + full.residual + sub.residual
        rows.append(ComparisonRow(
            m=m,
            p=p,
            value=full.computed,
            sub_value=sub.computed,
            holds=full.computed >= sub.computed - tolerance
        ))

    sub_sigma = None
    if len(depths) >= 2:
        sub_sigma = scaling_fit_from_samples([(row.m, row.sub_value) for row in rows], p).sigma
    return ComparisonResult(spec=spec.name, sub_spec=sub_spec.name, rows=rows, sub_sigma=sub_sigma)
