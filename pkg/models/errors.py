class CarpetError(Exception):
    """Base class for all domain errors. `detail` is the human readable reason."""

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UnknownSpecError(CarpetError):
    """Requested fractal name is not a built-in."""


class DimensionMismatchError(CarpetError):
    """Cell and fractal live in different dimensions."""


class CellRangeError(CarpetError):
    """Cell coordinates outside {1, ..., 5^n}."""


class BudgetExceededError(CarpetError):
    """An enumeration or experiment exceeds the configured size budget."""


class CellNotInGraphError(CarpetError):
    """Cell is not a vertex of the graph."""


class InvalidProblemError(CarpetError):
    """Dirichlet problem data is inconsistent with its graph."""


class OverlappingSetsError(CarpetError):
    """The two boundary cell sets of a conductance share a cell."""


class DegenerateFitError(CarpetError):
    """Scaling fit input cannot produce a decay rate."""


class UnsupportedDimensionError(CarpetError):
    """Analytic formula requested for a dimension it does not cover."""


class OracleCapError(CarpetError):
    """Instance too large for the brute-force reference implementations."""


class RenderError(CarpetError):
    """Figure request cannot be rendered."""


class SpecFormatError(CarpetError):
    """Text serialization of a fractal spec cannot be parsed."""
