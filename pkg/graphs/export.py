from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
from scipy import io as scipy_io
from scipy import sparse

from models.fractals import CellSet
from settings import logger
from .builder import CellGraph, EdgeGraph

PathLike = Union[str, Path]


def laplacian(graph: EdgeGraph, weights: Optional[np.ndarray] = None) -> sparse.csr_matrix:
    """Combinatorial Laplacian D - W; unit weights unless edge weights are given."""
    n = graph.num_vertices
    w = np.ones(graph.num_edges) if weights is None else np.asarray(weights, dtype=np.float64)
    i, j = graph.edges[:, 0], graph.edges[:, 1]
    off = sparse.csr_matrix(
        (np.concatenate([w, w]), (np.concatenate([i, j]), np.concatenate([j, i]))), shape=(n, n)
    )
    degree = np.asarray(off.sum(axis=1)).ravel()
    return (sparse.diags(degree) - off).tocsr()


def write_edge_list(graph: CellGraph, path: PathLike) -> Path:
    """Header `<level> <mode>`, then one `u v` line per edge (canonical vertex indices)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{graph.level} {graph.mode.value}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    path.write_text("\n".join(lines) + "\n")
    logger.info("Wrote edge list", extra={"path": str(path), "edges": graph.num_edges})
    return path



def write_laplacian_mtx(graph: EdgeGraph, path: PathLike) -> Path:
    """Matrix Market export of the unit-weight (p = 2) Laplacian."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    scipy_io.mmwrite(str(path), laplacian(graph).tocoo(), symmetry="symmetric")
    return path


def cells_frame(cells: CellSet) -> pd.DataFrame:
    columns = {f"x{axis + 1}": cells.coords[:, axis] for axis in range(cells.dimension)}
    frame = pd.DataFrame(columns)
    frame.index.name = "vertex"
    return frame


def write_cells_csv(cells: CellSet, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cells_frame(cells).to_csv(path)
    logger.info("Wrote cell list", extra={"path": str(path), "cells": len(cells)})
    return path
