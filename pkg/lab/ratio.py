from typing import Iterable, List, Optional

from lattice.builtins import carpet_for_dimension
from models.errors import InvalidProblemError
from models.reports import RatioRow, RatioScan
from models.solver import SolverConfig
from settings import logger
from tasks.scan_tasks import ConductanceTask, run_grid

from .bounds import check_dimension, center_cell, corner_cell, failure_threshold
from .conductance import check_depth


def ratio_scan(d: int, p: float, m_range: Iterable[int], config: Optional[SolverConfig] = None,
               allow_slow: bool = False, threads: Optional[int] = None) -> RatioScan:
    """Corner and center conductances at level 1 of the carpet F^(d) and their ratio, per m."""
    check_dimension(d)
    depths: List[int] = sorted(set(m_range))
    if not depths:
        raise InvalidProblemError("m_range is empty")
    if not p > 1:
        raise InvalidProblemError(f"p must exceed 1, got {p}")
    for m in depths:
        if m < 1:
            raise InvalidProblemError(f"ratio scans need m >= 1, got {m}")
        check_depth(d, m, allow_slow)

    spec = carpet_for_dimension(d)
    tasks = []
    for m in depths:
        tasks.append(ConductanceTask(spec=spec, n=1, cell=corner_cell(d), m=m, p=p, config=config))
        tasks.append(ConductanceTask(spec=spec, n=1, cell=center_cell(d), m=m, p=p, config=config))
    reports = run_grid(tasks, threads)

    rows = []
    for m, corner, center in zip(depths, reports[0::2], reports[1::2]):
        rows.append(RatioRow(
            d=d,
            p=p,
            m=m,
            corner=corner,
            center=center,
            ratio=corner.computed / center.computed,
            floor=corner.lower / center.upper
        ))

    ratios = [row.ratio for row in rows]
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    threshold = failure_threshold(d)
    if p < threshold and len(rows) > 1 and not increasing:
        logger.warning("Ratio is not increasing below the failure threshold", extra={
            "d": d,
            "p": p,
            "ratios": ratios
        })
    return RatioScan(d=d, p=p, rows=rows, threshold=threshold, increasing=increasing)
