from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import CellRangeError, DimensionMismatchError

BASE = 5


class FractalSpec(BaseModel):
    """Digit-defined self-similar subset of [0,1]^d (5-adic, retained level-1 pattern)."""
    model_config = ConfigDict(frozen=True)

    name: str = Field(default="custom", description="Identifier of the fractal")
    dimension: int = Field(..., ge=1, description="Ambient dimension d")
    base: int = Field(default=BASE, description="Subdivision base, fixed at 5")
    retained: FrozenSet[Tuple[int, ...]] = Field(..., description="Retained level-1 cells as 1-based d-tuples")

    @field_validator("base")
    @classmethod
    def _base_is_fixed(cls, value: int) -> int:
        if value != BASE:
            raise ValueError(f"base must be {BASE}, got {value}")
        return value

    @model_validator(mode="after")
    def _check_retained(self) -> "FractalSpec":
        if not self.retained:
            raise ValueError("retained pattern must be nonempty")
        for cell in self.retained:
            if len(cell) != self.dimension:
                raise ValueError(f"retained cell {cell} does not have {self.dimension} coordinates")
            if any(c < 1 or c > self.base for c in cell):
                raise ValueError(f"retained cell {cell} has entries outside 1..{self.base}")
        return self

    @property
    def retained_count(self) -> int:
        return len(self.retained)

    def sorted_retained(self) -> List[Tuple[int, ...]]:
        return sorted(self.retained)

    def same_pattern(self, other: "FractalSpec") -> bool:
        """True when both specs define the same set, regardless of name."""
        return self.dimension == other.dimension and self.retained == other.retained


class CellIndex(BaseModel):
    """Level-n cell of the 5-adic partition, 1-based coordinates as in prod [(l-1)/5^n, l/5^n]."""
    model_config = ConfigDict(frozen=True)

    level: int = Field(..., ge=0, description="Refinement level n")
    coords: Tuple[int, ...] = Field(..., min_length=1, description="Coordinates l_i in 1..5^n")

    @model_validator(mode="after")
    def _check_range(self) -> "CellIndex":
        side = BASE ** self.level
        for c in self.coords:
            if c < 1 or c > side:
                raise ValueError(f"coordinate {c} out of range 1..{side} at level {self.level}")
        return self

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def label(self) -> str:
        return ",".join(str(c) for c in self.coords)

    @classmethod
    def parse(cls, text: str, level: int) -> "CellIndex":
        """Parse '1,1' (parentheses and spaces tolerated)."""
        cleaned = text.strip().strip("()")
        coords = tuple(int(part) for part in cleaned.split(",") if part.strip())
        return cls(level=level, coords=coords)


class CellSet:
    """Canonically ordered, duplicate-free set of same-level cells.

    Backed by an (N, d) integer array in lexicographic order, which is also the
    row-major order of the linear keys, so membership is a binary search.
    """

    __slots__ = ("level", "dimension", "_coords", "_keys", "_shape")

    def __init__(self, level: int, coords, dimension: Optional[int] = None):
        if level < 0:
            raise CellRangeError(f"level must be non-negative, got {level}")
        array = np.asarray(coords, dtype=np.int64)
        if array.size == 0:
            if dimension is None:
                raise ValueError("dimension is required for an empty cell set")
            array = array.reshape(0, dimension)
        if array.ndim != 2:
            raise ValueError("cell coordinates must be a 2-d array")
        if dimension is not None and array.shape[1] != dimension:
            raise DimensionMismatchError(
                f"cells have {array.shape[1]} coordinates, expected {dimension}"
            )

        side = BASE ** level
        if array.size and (array.min() < 1 or array.max() > side):
            raise CellRangeError(f"cell coordinates outside 1..{side} at level {level}")

        self.level = level
        self.dimension = array.shape[1]
        self._shape = (side,) * self.dimension
        keys = np.unique(self._ravel(array))
        self._keys = keys
        self._coords = np.stack(np.unravel_index(keys, self._shape), axis=1).astype(np.int64) + 1
        self._coords.setflags(write=False)
        self._keys.setflags(write=False)

    @classmethod
    def from_cells(cls, cells: Iterable[CellIndex], level: Optional[int] = None,
                   dimension: Optional[int] = None) -> "CellSet":
        cells = list(cells)
        if level is None:
            if not cells:
                raise ValueError("level is required for an empty cell set")
            level = cells[0].level
        if any(cell.level != level for cell in cells):
            raise CellRangeError("all cells of a cell set must share the level")
        return cls(level, [cell.coords for cell in cells], dimension=dimension)

    def _ravel(self, array: np.ndarray) -> np.ndarray:
        if array.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        return np.ravel_multi_index(tuple((array - 1).T), self._shape).astype(np.int64)

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def keys(self) -> np.ndarray:
        return self._keys

    def locate(self, coords) -> np.ndarray:
        """Positions of the given coordinate rows in this set, -1 where absent or out of range."""
        array = np.asarray(coords, dtype=np.int64).reshape(-1, self.dimension)
        result = np.full(array.shape[0], -1, dtype=np.int64)
        side = self._shape[0] if self._shape else 1
        inside = np.all((array >= 1) & (array <= side), axis=1)
        if not inside.any() or len(self) == 0:
            return result
        keys = self._ravel(array[inside])
        pos = np.searchsorted(self._keys, keys)
        pos_clipped = np.minimum(pos, len(self) - 1)
        found = self._keys[pos_clipped] == keys
        result[np.flatnonzero(inside)[found]] = pos_clipped[found]
        return result

    def indices_of(self, other: "CellSet") -> np.ndarray:
        self._check_compatible(other)
        return self.locate(other.coords)

    def index_of(self, cell: CellIndex) -> int:
        if cell.level != self.level or cell.dimension != self.dimension:
            raise KeyError(cell.label)
        position = int(self.locate([cell.coords])[0])
        if position < 0:
            raise KeyError(cell.label)
        return position

    def union(self, other: "CellSet") -> "CellSet":
        self._check_compatible(other)
        return CellSet(self.level, np.vstack([self._coords, other.coords]), dimension=self.dimension)

    def difference(self, other: "CellSet") -> "CellSet":
        self._check_compatible(other)
        keep = ~np.isin(self._keys, other.keys)
        return CellSet(self.level, self._coords[keep], dimension=self.dimension)

    def intersects(self, other: "CellSet") -> bool:
        self._check_compatible(other)
        return bool(np.isin(self._keys, other.keys).any())

    def _check_compatible(self, other: "CellSet") -> None:
        if other.dimension != self.dimension:
            raise DimensionMismatchError(
                f"cell sets have dimensions {self.dimension} and {other.dimension}"
            )
        if other.level != self.level:
            raise CellRangeError(f"cell sets have levels {self.level} and {other.level}")

    def cell(self, position: int) -> CellIndex:
        return CellIndex(level=self.level, coords=tuple(int(c) for c in self._coords[position]))

    def labels(self) -> List[str]:
        return [",".join(str(int(c)) for c in row) for row in self._coords]

    def __len__(self) -> int:
        return int(self._keys.shape[0])

    def __iter__(self) -> Iterator[CellIndex]:
        for position in range(len(self)):
            yield self.cell(position)

    def __contains__(self, cell: object) -> bool:
        if not isinstance(cell, CellIndex):
            return False
        if cell.level != self.level or cell.dimension != self.dimension:
            return False
        return bool(self.locate([cell.coords])[0] >= 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        return (
            self.level == other.level
            and self.dimension == other.dimension
            and np.array_equal(self._keys, other.keys)
        )

    def __repr__(self) -> str:
        return f"CellSet(level={self.level}, dimension={self.dimension}, size={len(self)})"

    def as_tuples(self) -> List[Tuple[int, ...]]:
        return [tuple(int(c) for c in row) for row in self._coords]
