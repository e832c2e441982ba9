"""Bisection for the exponent where the fitted conductance decay factor crosses 1.

For each p the conductances E_{p,m}(Q, Γ(Q)^c) are computed for
m = 1..m_max and every representative cell Q; the per-m maximum over Q
is fitted with scaling_fit_from_samples. sigma(p) < 1 means growing
conductances. The result is an estimate from small m, not a certified
bound.
"""
from typing import Callable, Dict, Optional

from lattice.symmetry import representative_cells as orbit_representatives
from models.errors import InvalidProblemError
from models.fractals import CellIndex, CellSet, FractalSpec
from models.graphs import AdjacencyMode
from models.reports import CriticalPBracket
from models.solver import SolverConfig
from settings import logger
from tasks.scan_tasks import ConductanceTask, run_grid

from .scaling import scaling_fit_from_samples

ConductanceFn = Callable[[CellIndex, int, float], float]


def _grid_conductance(spec: FractalSpec, n: int, cells: CellSet, m_max: int, mode: AdjacencyMode,
                      config: Optional[SolverConfig], threads: Optional[int]):
    """Max over cells of the conductance per m, computed on the scan grid."""

    def sample(p: float) -> Dict[int, float]:
        tasks = [ConductanceTask(spec=spec, n=n, cell=cell, m=m, p=p, mode=mode, config=config)
                 for m in range(1, m_max + 1) for cell in cells]
        reports = run_grid(tasks, threads)
        best: Dict[int, float] = {}
        for report in reports:
            best[report.m] = max(best.get(report.m, 0.0), report.computed)
        return best

    return sample


def critical_p_bracket(spec: FractalSpec, n: int = 1, representative_cells: Optional[CellSet] = None,
                       m_max: int = 2, p_lo: float = 1.05, p_hi: float = 2.5,
                       config: Optional[SolverConfig] = None, width: float = 0.05,
                       conductance_fn: Optional[ConductanceFn] = None,
                       mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION,
                       threads: Optional[int] = None) -> CriticalPBracket:
    """Narrow [p_lo, p_hi] around the crossing sigma(p) = 1 down to `width`.

    `conductance_fn(cell, m, p)` replaces the solver when given.
    """
    if not 1 < p_lo < p_hi:
        raise InvalidProblemError(f"need 1 < p_lo < p_hi, got [{p_lo}, {p_hi}]")
    if m_max < 2:
        raise InvalidProblemError(f"the sigma fit needs m_max >= 2, got {m_max}")
    if width <= 0:
        raise InvalidProblemError(f"width must be positive, got {width}")

    cells = representative_cells if representative_cells is not None else orbit_representatives(spec, n)
    if len(cells) == 0:
        raise InvalidProblemError("no representative cells")

    if conductance_fn is None:
        grid = _grid_conductance(spec, n, cells, m_max, mode, config, threads)
    else:
        def grid(p: float) -> Dict[int, float]:
            return {m: max(conductance_fn(cell, m, p) for cell in cells) for m in range(1, m_max + 1)}

    evaluations: Dict[float, float] = {}

    def sigma(p: float) -> float:
        if p not in evaluations:
            samples = sorted(grid(p).items())
            evaluations[p] = scaling_fit_from_samples(samples, p).sigma
            logger.info("Fitted sigma", extra={"spec": spec.name, "p": p, "sigma": evaluations[p]})
        return evaluations[p]

    low, high = p_lo, p_hi
    below_low = sigma(low) < 1.0
    below_high = sigma(high) < 1.0
    sign_change = below_low != below_high

    if not sign_change:
        logger.warning("Fitted sigma does not cross 1 on the search interval", extra={
            "spec": spec.name,
            "p_lo": p_lo,
            "p_hi": p_hi,
            "sigma_lo": evaluations[low],
            "sigma_hi": evaluations[high]
        })
    else:
        while high - low > width:
            middle = 0.5 * (low + high)
            if (sigma(middle) < 1.0) == below_low:
                low = middle
            else:
                high = middle

    return CriticalPBracket(
        spec=spec.name,
        p_low=low,
        p_high=high,
        sigma_low=evaluations[low],
        sigma_high=evaluations[high],
        m_max=m_max,
        representative_cells=cells.labels(),
        sign_change=sign_change,
        evaluations=evaluations
    )
