from typing import Mapping, Union

import numpy as np

from graphs.builder import CellGraph, EdgeGraph
from models.errors import InvalidProblemError
from models.fractals import CellIndex

VertexValues = Union[Mapping, np.ndarray, list]


def vertex_array(graph: EdgeGraph, f: VertexValues) -> np.ndarray:
    """Dense value vector from an array or a mapping keyed by vertex index (or CellIndex on a CellGraph)."""
    if isinstance(f, Mapping):
        values = np.full(graph.num_vertices, np.nan)
        for key, value in f.items():
            if isinstance(key, CellIndex):
                if not isinstance(graph, CellGraph):
                    raise InvalidProblemError("CellIndex keys need a cell graph")
                key = graph.index_of(key)
            if not 0 <= int(key) < graph.num_vertices:
                raise InvalidProblemError(f"vertex {key} is outside the graph")
            values[int(key)] = float(value)
    else:
        values = np.asarray(f, dtype=np.float64).ravel()
        if values.shape[0] != graph.num_vertices:
            raise InvalidProblemError(
                f"expected {graph.num_vertices} values, got {values.shape[0]}"
            )

    missing = np.flatnonzero(np.isnan(values))
    if missing.size:
        raise InvalidProblemError(f"no value for {missing.size} vertices (first: {int(missing[0])})")
    return values


def edge_differences(graph: EdgeGraph, values: np.ndarray) -> np.ndarray:
    return values[graph.edges[:, 0]] - values[graph.edges[:, 1]]


def energy(graph: EdgeGraph, f: VertexValues, p: float) -> float:
    """Σ over edges of |f(u) - f(v)|^p."""
    if not p > 1:
        raise InvalidProblemError(f"p must exceed 1, got {p}")
    values = vertex_array(graph, f)
    return float(np.sum(np.abs(edge_differences(graph, values)) ** p))

