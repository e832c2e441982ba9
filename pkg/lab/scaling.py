from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from models.errors import DegenerateFitError
from models.fractals import CellIndex, FractalSpec
from models.graphs import AdjacencyMode
from models.reports import ScalingFit, SigmaProfile
from models.solver import SolverConfig
from tasks.scan_tasks import ConductanceTask, run_grid


def scaling_fit_from_samples(samples: Sequence[Tuple[int, float]], p: float) -> ScalingFit:
    """Fit log E = intercept + slope * m; sigma = exp(-slope)."""
    pairs = [(int(m), float(value)) for m, value in samples]
    if len({m for m, _ in pairs}) < 2:
        raise DegenerateFitError("a scaling fit needs at least two distinct m")
    if any(not value > 0 for _, value in pairs):
        raise DegenerateFitError("zero or negative conductance: the two sets are not connected")

    depths = np.array([m for m, _ in pairs], dtype=np.float64)
    logs = np.log(np.array([value for _, value in pairs]))
    fit = linregress(depths, logs)
    stderr = float(np.nan_to_num(fit.stderr))
    return ScalingFit(
        p=p,
        samples=pairs,
        sigma=float(np.exp(-fit.slope)),
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        slope_stderr=abs(stderr)
    )


def scaling_fit(spec: FractalSpec, n: int, cell: CellIndex, p: float, m_range: Iterable[int],
                mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION,
                config: Optional[SolverConfig] = None, threads: Optional[int] = None) -> ScalingFit:
    depths = sorted(set(m_range))
    tasks = [ConductanceTask(spec=spec, n=n, cell=cell, m=m, p=p, mode=mode, config=config) for m in depths]
    reports = run_grid(tasks, threads)
    return scaling_fit_from_samples([(r.m, r.computed) for r in reports], p)


def sigma_profile(spec: FractalSpec, n: int, cell: CellIndex, p_values: Iterable[float],
                  m_range: Iterable[int], mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION,
                  config: Optional[SolverConfig] = None, threads: Optional[int] = None) -> SigmaProfile:
    """Fitted sigma for each p; `increasing` checks that sigma grows with p."""
    exponents = sorted(set(p_values))
    depths = sorted(set(m_range))
    tasks = [ConductanceTask(spec=spec, n=n, cell=cell, m=m, p=p, mode=mode, config=config)
             for p in exponents for m in depths]
    reports = run_grid(tasks, threads)

    fits: List[ScalingFit] = []
    for index, p in enumerate(exponents):
        chunk = reports[index * len(depths):(index + 1) * len(depths)]
        fits.append(scaling_fit_from_samples([(r.m, r.computed) for r in chunk], p))
    sigmas = [fit.sigma for fit in fits]
    return SigmaProfile(
        cell=cell.label,
        fits=fits,
        increasing=all(b > a for a, b in zip(sigmas, sigmas[1:]))
    )
