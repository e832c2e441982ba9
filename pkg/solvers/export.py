import json
from pathlib import Path
from typing import Any, Dict, Optional

from graphs.builder import CellGraph
from graphs.export import PathLike, cells_frame
from models.solver import ConductanceResult
from settings import logger


def write_solution_csv(graph: CellGraph, result: ConductanceResult, path: PathLike) -> Path:
    """One row per vertex: coordinates x1..xd and the minimizer's value."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = cells_frame(graph.vertices)
    frame["value"] = result.solution
    frame.to_csv(path)
    logger.info("Wrote solution", extra={"path": str(path), "vertices": graph.num_vertices})
    return path


def write_diagnostics_json(result: ConductanceResult, path: PathLike,
                           context: Optional[Dict[str, Any]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {**(context or {}), **result.diagnostics()}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True))
    return path
