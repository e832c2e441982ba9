from enum import Enum
from typing import Dict, List, Mapping

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from graphs.builder import EdgeGraph
from settings import SOLVER_MAX_ITERATIONS, SOLVER_TOLERANCE


class P2Backend(str, Enum):
    """Linear solver used for the p = 2 Laplacian system."""
    DIRECT = "direct"
    CONJUGATE_GRADIENT = "conjugate-gradient"


class GeneralBackend(str, Enum):
    """Descent scheme used for p != 2."""
    IRLS = "IRLS"
    DAMPED_NEWTON = "damped-Newton"


class SolverConfig(BaseModel):
    """Tolerances and backend choices for solve_dirichlet."""
    model_config = ConfigDict(frozen=True)

    rel_tolerance: float = Field(default=SOLVER_TOLERANCE, gt=0, description="Relative tolerance on predicted energy decrease")
    max_iterations: int = Field(default=SOLVER_MAX_ITERATIONS, gt=0, description="Maximum outer iterations")
    p2_backend: P2Backend = Field(default=P2Backend.DIRECT, description="Linear solver for p = 2")
    general_backend: GeneralBackend = Field(default=GeneralBackend.DAMPED_NEWTON, description="Descent scheme for p != 2")
    eps_start: float = Field(default=1e-2, gt=0, description="Initial smoothing, relative to the boundary value span")
    eps_floor: float = Field(default=1e-8, gt=0, description="Final smoothing, relative to the boundary value span")

    @model_validator(mode="after")
    def _check_eps(self) -> "SolverConfig":
        if self.eps_floor > self.eps_start:
            raise ValueError("eps_floor must not exceed eps_start")
        return self


class OracleConfig(BaseModel):
    """Settings of the brute-force reference minimizer."""
    model_config = ConfigDict(frozen=True)

    step_tolerance: float = Field(default=1e-12, gt=0, description="Stop when a sweep lowers the energy by less than this fraction of it")
    gap_tolerance: float = Field(default=1e-10, gt=0, description="Stop when the certified relative gap to the minimum falls below this")
    max_vertices: int = Field(default=50, gt=0, description="Cap on free vertices")
    max_sweeps: int = Field(default=200000, gt=0, description="Safety cap on coordinate sweeps")


class DirichletProblem(BaseModel):
    """A graph, fixed boundary values on some vertices, and an exponent p > 1."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    graph: EdgeGraph
    fixed_index: np.ndarray = Field(..., description="Sorted indices of fixed vertices")
    fixed_value: np.ndarray = Field(..., description="Values at fixed_index")
    p: float = Field(..., gt=1, description="Energy exponent")

    @field_validator("fixed_index", mode="before")
    @classmethod
    def _index_array(cls, value) -> np.ndarray:
        return np.asarray(value, dtype=np.int64).ravel()

    @field_validator("fixed_value", mode="before")
    @classmethod
    def _value_array(cls, value) -> np.ndarray:
        return np.asarray(value, dtype=np.float64).ravel()

    @model_validator(mode="after")
    def _check_fixed(self) -> "DirichletProblem":
        index, value = self.fixed_index, self.fixed_value
        if index.size == 0:
            raise ValueError("at least one vertex must be fixed")
        if index.shape != value.shape:
            raise ValueError("fixed_index and fixed_value differ in length")
        if index.min() < 0 or index.max() >= self.graph.num_vertices:
            raise ValueError("fixed vertex outside the graph")
        if np.unique(index).size != index.size:
            raise ValueError("a vertex is fixed twice")
        if not np.all(np.isfinite(value)):
            raise ValueError("fixed values must be finite")
        order = np.argsort(index, kind="stable")
        object.__setattr__(self, "fixed_index", index[order])
        object.__setattr__(self, "fixed_value", value[order])
        return self

    @classmethod
    def from_mapping(cls, graph: EdgeGraph, fixed: Mapping[int, float], p: float) -> "DirichletProblem":
        return cls(graph=graph, fixed_index=list(fixed.keys()), fixed_value=list(fixed.values()), p=p)

    @property
    def fixed(self) -> Dict[int, float]:
        return {int(i): float(v) for i, v in zip(self.fixed_index, self.fixed_value)}


class ConductanceResult(BaseModel):
    """Minimized energy with its minimizer and convergence diagnostics."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: float = Field(..., ge=0, description="Minimized p-energy")
    solution: np.ndarray = Field(..., exclude=True, description="Value at every vertex")
    iterations: int = Field(..., ge=0, description="Outer iterations (linear solver iterations for p = 2)")
    residual: float = Field(..., ge=0, description="Scaled first-order optimality measure")
    converged: bool
    backend: str = Field(..., description="Backend that produced the result")
    isolated: List[int] = Field(default_factory=list, description="Free vertices with no fixed vertex in their component (set to 0)")

    def diagnostics(self) -> dict:
        return self.model_dump()
