from typing import List, Optional, Sequence

from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field

from lab.conductance import cell_conductance
from models.fractals import CellIndex, FractalSpec
from models.graphs import AdjacencyMode
from models.reports import BoundReport
from models.solver import SolverConfig
from settings import THREADS, logger


class ConductanceTask(BaseModel):
    """One (spec, n, cell, m, p) point of a scan grid."""
    model_config = ConfigDict(frozen=True)

    spec: FractalSpec
    n: int = Field(..., ge=0)
    cell: CellIndex
    m: int = Field(..., ge=0)
    p: float = Field(..., gt=1)
    mode: AdjacencyMode = AdjacencyMode.NONEMPTY_INTERSECTION
    config: Optional[SolverConfig] = None


def run_conductance_task(task: ConductanceTask) -> BoundReport:
    logger.info("Running conductance task", extra={
        "spec": task.spec.name,
        "cell": task.cell.label,
        "m": task.m,
        "p": task.p
    })
    return cell_conductance(task.spec, task.n, task.cell, task.m, task.p, task.mode, task.config)


def run_grid(tasks: Sequence[ConductanceTask], threads: Optional[int] = None) -> List[BoundReport]:
    """Evaluate every task; results come back in task order whatever the worker count."""
    workers = min(threads or THREADS, max(len(tasks), 1))
    if workers == 1:
        return [run_conductance_task(task) for task in tasks]
    logger.info("Dispatching scan grid", extra={"tasks": len(tasks), "workers": workers})
    return list(Parallel(n_jobs=workers)(delayed(run_conductance_task)(task) for task in tasks))
