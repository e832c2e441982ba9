import math
from typing import List, Optional, Tuple

import numpy as np

from models.errors import BudgetExceededError, CellRangeError, DimensionMismatchError
from models.fractals import BASE, CellIndex, CellSet, FractalSpec
from settings import CELL_BUDGET, logger


def check_budget(count: int, budget: Optional[int] = None, what: str = "enumeration") -> None:
    """Raise BudgetExceededError when `count` cells would exceed the cap."""
    cap = CELL_BUDGET if budget is None else budget
    if count > cap:
        raise BudgetExceededError(f"{what} needs {count} cells, budget is {cap}")


def _retained_mask(spec: FractalSpec) -> np.ndarray:
    mask = np.zeros((BASE,) * spec.dimension, dtype=bool)
    for cell in spec.retained:
        mask[tuple(c - 1 for c in cell)] = True
    return mask


def cell_digits(cell: CellIndex) -> List[Tuple[int, ...]]:
    """Base-5 digit tuples of the cell (1-based), most significant (level-1 ancestor) first."""
    zero_based = [c - 1 for c in cell.coords]
    digits = []
    for power in range(cell.level - 1, -1, -1):
        scale = BASE ** power
        digits.append(tuple((z // scale) % BASE + 1 for z in zero_based))
    return digits


def contains_cell(spec: FractalSpec, cell: CellIndex) -> bool:
    """True iff every digit tuple of the cell is a retained pattern cell."""
    if cell.dimension != spec.dimension:
        raise DimensionMismatchError(
            f"cell has dimension {cell.dimension}, fractal '{spec.name}' has {spec.dimension}"
        )
    return all(digits in spec.retained for digits in cell_digits(cell))


def contains_coords(spec: FractalSpec, level: int, coords) -> np.ndarray:
    """Vectorized digit test over an (N, d) array of level-`level` coordinates."""
    array = np.asarray(coords, dtype=np.int64).reshape(-1, spec.dimension)
    side = BASE ** level
    inside = np.all((array >= 1) & (array <= side), axis=1)
    result = inside.copy()
    mask = _retained_mask(spec)
    zero_based = np.clip(array - 1, 0, side - 1)
    for power in range(level):
        digits = (zero_based // BASE ** power) % BASE
        result &= mask[tuple(digits.T)]
    return result


def cells_at_level(spec: FractalSpec, n: int, budget: Optional[int] = None) -> CellSet:
    """All level-n cells of the fractal, canonical order; |retained|^n of them."""
    if n < 0:
        raise CellRangeError(f"level must be non-negative, got {n}")
    count = spec.retained_count ** n
    check_budget(count, budget, what=f"'{spec.name}' level {n}")

    digits = np.array(spec.sorted_retained(), dtype=np.int64) - 1
    offsets = np.zeros((1, spec.dimension), dtype=np.int64)
    for _ in range(n):
        offsets = (offsets[:, None, :] * BASE + digits[None, :, :]).reshape(-1, spec.dimension)

    logger.debug("Enumerated fractal cells", extra={"spec": spec.name, "level": n, "count": count})
    return CellSet(n, offsets + 1, dimension=spec.dimension)


def subdivide(spec: FractalSpec, cells: CellSet, m: int, budget: Optional[int] = None) -> CellSet:
    """S^m(A): the level n+m fractal cells contained in some member of A."""
    if m < 0:
        raise CellRangeError(f"refinement depth must be non-negative, got {m}")
    if cells.dimension != spec.dimension:
        raise DimensionMismatchError(
            f"cell set has dimension {cells.dimension}, fractal '{spec.name}' has {spec.dimension}"
        )
    if not contains_coords(spec, cells.level, cells.coords).all():
        raise CellRangeError(f"cell set contains cells outside '{spec.name}'")
    if m == 0:
        return cells

    check_budget(len(cells) * spec.retained_count ** m, budget,
                 what=f"subdivision of {len(cells)} '{spec.name}' cells by {m} levels")
    pattern = cells_at_level(spec, m, budget).coords - 1
    base = (cells.coords - 1) * BASE ** m
    children = (base[:, None, :] + pattern[None, :, :]).reshape(-1, spec.dimension) + 1
    return CellSet(cells.level + m, children, dimension=spec.dimension)


def parent(cell: CellIndex) -> CellIndex:
    if cell.level == 0:
        raise CellRangeError("the root cell has no parent")
    return CellIndex(level=cell.level - 1, coords=tuple(int(c) for c in ancestor_coords(cell.coords, 1)))


def children(spec: FractalSpec, cell: CellIndex) -> CellSet:
    return subdivide(spec, CellSet.from_cells([cell]), 1)


def ancestor_coords(coords, levels_up: int) -> np.ndarray:
    """Coordinates of the ancestors `levels_up` levels above the given cells."""
    array = np.asarray(coords, dtype=np.int64)
    return (array - 1) // BASE ** levels_up + 1


def hausdorff_dimension(spec: FractalSpec) -> float:
    """log |retained| / log 5."""
    return math.log(spec.retained_count) / math.log(BASE)
