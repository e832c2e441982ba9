from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import PatchCollection  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402
from pydantic import BaseModel  # noqa: E402

from lattice.cells import cells_at_level  # noqa: E402
from models.errors import RenderError  # noqa: E402
from models.fractals import BASE, FractalSpec  # noqa: E402
from models.reports import RatioScan  # noqa: E402
from settings import logger  # noqa: E402

PathLike = Union[str, Path]

MAX_RENDER_LEVEL = 5

# Fixed ids and no timestamp, so identical input gives identical bytes
matplotlib.rcParams["svg.hashsalt"] = "carpet-lab"
_SVG_METADATA = {"Date": None}


class RenderSummary(BaseModel):
    path: str
    squares: int


def _save(figure, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    figure.savefig(path, format="svg", metadata=_SVG_METADATA)
    plt.close(figure)
    return path


def render_cells_svg(spec: FractalSpec, level: int, path: PathLike) -> RenderSummary:
    """Filled unit-square picture of the level-`level` approximation of a planar fractal."""
    if spec.dimension != 2:
        raise RenderError(f"only planar fractals can be rendered, '{spec.name}' has d = {spec.dimension}")
    if not 0 <= level <= MAX_RENDER_LEVEL:
        raise RenderError(f"render level must be within 0..{MAX_RENDER_LEVEL}, got {level}")

    cells = cells_at_level(spec, level)
    side = 1.0 / BASE ** level
    corners = (cells.coords - 1) * side
    squares = [Rectangle((float(x), float(y)), side, side) for x, y in corners]

    figure, axes = plt.subplots(figsize=(6, 6))
    axes.add_collection(PatchCollection(squares, facecolor="black", edgecolor="none"))
    axes.set_xlim(0, 1)
    axes.set_ylim(0, 1)
    axes.set_aspect("equal")
    axes.set_axis_off()
    saved = _save(figure, path)

    logger.info("Rendered fractal", extra={"spec": spec.name, "level": level, "squares": len(squares)})
    return RenderSummary(path=str(saved), squares=len(squares))


def render_ratio_plot(scans: Sequence[RatioScan], path: PathLike) -> Path:
    """log(E(corner) / E(center)) against m, one line per p."""
    figure, axes = plt.subplots(figsize=(6, 4))
    for scan in scans:
        depths = [row.m for row in scan.rows]
        logs = np.log([row.ratio for row in scan.rows])
        axes.plot(depths, logs, marker="o", label=f"p = {scan.p:g}")
    axes.set_xlabel("m")
    axes.set_ylabel("log ratio")
    if scans:
        axes.legend()
        axes.set_title(f"corner / center conductance, d = {scans[0].d}")
    return _save(figure, path)
