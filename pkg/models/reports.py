from datetime import datetime
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

REPORT_COLUMNS = ["d", "p", "m", "cell", "computed", "lower_bound", "upper_bound", "iterations", "converged"]


class BoundReport(BaseModel):
    """Effective conductance of Q against Γ(Q)^c with the analytic bounds that apply to it."""
    spec: str = Field(..., description="Fractal name")
    d: int = Field(..., description="Ambient dimension")
    n: int = Field(..., description="Level of the cell")
    cell: str = Field(..., description="Cell label, coordinates joined by commas")
    p: float
    m: int
    computed: float = Field(..., description="Effective p-conductance E_{p,m}(Q, Γ(Q)^c)")
    lower: Optional[float] = Field(None, description="Corner-cell lower bound, when it applies")
    upper: Optional[float] = Field(None, description="Center-cell upper bound, when it applies")
    tolerance: float = Field(..., ge=0, description="Slack used for the satisfied flags")
    satisfied: Tuple[bool, bool] = Field(..., description="(computed >= lower - tol, computed <= upper + tol); True when no bound applies")
    iterations: int
    residual: float
    converged: bool

    def row(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "p": self.p,
            "m": self.m,
            "cell": self.cell,
            "computed": self.computed,
            "lower_bound": self.lower,
            "upper_bound": self.upper,
            "iterations": self.iterations,
            "converged": self.converged,
        }


class RatioRow(BaseModel):
    d: int
    p: float
    m: int
    corner: BoundReport = Field(..., description="Corner cell report")
    center: BoundReport = Field(..., description="Center cell report")
    ratio: float = Field(..., description="corner.computed / center.computed")
    floor: float = Field(..., description="Analytic floor lower_bound / upper_bound of the ratio")


class RatioScan(BaseModel):
    d: int
    p: float
    rows: List[RatioRow]
    threshold: float = Field(..., description="Exponent below which the ratio is proven to diverge")
    increasing: bool = Field(..., description="Ratio column strictly increasing in m")


class ScalingFit(BaseModel):
    """Least-squares fit of log E against m; sigma = exp(-slope)."""
    p: float
    samples: List[Tuple[int, float]] = Field(..., description="(m, conductance) pairs")
    sigma: float = Field(..., gt=0)
    slope: float
    intercept: float
    slope_stderr: float = Field(..., ge=0)

    @model_validator(mode="after")
    def _check_samples(self) -> "ScalingFit":
        if len({m for m, _ in self.samples}) < 2:
            raise ValueError("a scaling fit needs at least two distinct m")
        return self


class SigmaProfile(BaseModel):
    cell: str
    fits: List[ScalingFit]
    increasing: bool = Field(..., description="Fitted sigma strictly increasing in p")


class CriticalPBracket(BaseModel):
    """Estimated interval containing the exponent where the fitted sigma crosses 1."""
    spec: str
    p_low: float
    p_high: float
    sigma_low: float = Field(..., description="Fitted sigma at p_low")
    sigma_high: float = Field(..., description="Fitted sigma at p_high")
    m_max: int
    representative_cells: List[str]
    sign_change: bool = Field(..., description="False when sigma - 1 keeps its sign on the search interval")
    evaluations: Dict[float, float] = Field(default_factory=dict, description="Fitted sigma per evaluated p")
    estimate: bool = Field(True, description="Always an estimate from small m, never a certified bound")

    @model_validator(mode="after")
    def _check_order(self) -> "CriticalPBracket":
        if not self.p_low < self.p_high:
            raise ValueError("p_low must be below p_high")
        return self


class ComparisonRow(BaseModel):
    m: int
    p: float
    value: float = Field(..., description="Corner conductance on the full fractal")
    sub_value: float = Field(..., description="Corner conductance on the sub-fractal")
    holds: bool = Field(..., description="value >= sub_value - tolerance")


class ComparisonResult(BaseModel):
    spec: str
    sub_spec: str
    rows: List[ComparisonRow]
    sub_sigma: Optional[float] = Field(None, description="Fitted sigma of the sub-fractal values when two or more m are given")
    surrogate: bool = Field(True, description="Plain cell-graph conductance stands in for the averaged energy")


class RunManifest(BaseModel):
    """Record written next to every CLI output."""
    run_id: str
    command: str
    parameters: Dict[str, object]
    version: str
    started_at: datetime
    wall_time: float = Field(..., ge=0, description="Seconds")
    outputs: List[str] = Field(default_factory=list)


class IndicatorCut(BaseModel):
    """Energy of the indicator of S^m(Q) on the level-(n+m) graph."""
    cell: str
    m: int
    p: float
    energy: float = Field(..., ge=0, description="Number of edges leaving S^m(Q); p-independent")
    boundary_cells: int = Field(..., ge=0, description="Cells of S^m(Q) with a neighbor outside S^m(Q)")
