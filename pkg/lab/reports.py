from pathlib import Path
from typing import Iterable, Sequence, Union

import pandas as pd
from pydantic import BaseModel

from models.reports import REPORT_COLUMNS, BoundReport, RatioScan
from settings import logger

PathLike = Union[str, Path]

RATIO_COLUMNS = ["d", "p", "m", "corner", "center", "ratio", "floor", "converged"]


def reports_frame(reports: Iterable[BoundReport]) -> pd.DataFrame:
    """One row per (d, p, m, cell) in the documented column order."""
    return pd.DataFrame([report.row() for report in reports], columns=REPORT_COLUMNS)


def ratio_frame(scans: Sequence[RatioScan]) -> pd.DataFrame:
    rows = []
    for scan in scans:
        for row in scan.rows:
            rows.append({
                "d": row.d,
                "p": row.p,
                "m": row.m,
                "corner": row.corner.computed,
                "center": row.center.computed,
                "ratio": row.ratio,
                "floor": row.floor,
                "converged": row.corner.converged and row.center.converged,
            })
    return pd.DataFrame(rows, columns=RATIO_COLUMNS)


def write_frame(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info("Wrote table", extra={"path": str(path), "rows": len(frame)})
    return path


def write_json(model: BaseModel, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2))
    return path
