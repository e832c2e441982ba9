"""Built-in fractal patterns.

F2, F3     carpets: the cube {1..5}^d minus the 2d cells sharing a face with the center cell.
tildeF2    planar carpet: {1..5}^2 minus the plus-shaped cross through the center (5 cells).
G1, G2     boundary patterns: the cells of the (d)-carpet pattern that touch the boundary of the cube.
"""

from functools import lru_cache
from itertools import product
from typing import Callable, Dict, FrozenSet, Tuple

from models.errors import UnknownSpecError
from models.fractals import BASE, FractalSpec

Cell = Tuple[int, ...]

CENTER = (BASE + 1) // 2


def _full_cube(dimension: int) -> FrozenSet[Cell]:
    return frozenset(product(range(1, BASE + 1), repeat=dimension))


def _is_center_face_neighbor(cell: Cell) -> bool:
    off_center = [c for c in cell if c != CENTER]
    return len(off_center) == 1 and abs(off_center[0] - CENTER) == 1


def carpet_retained(dimension: int) -> FrozenSet[Cell]:
    """Cube pattern with the face-neighbors of the center removed (5^d - 2d cells)."""
    return frozenset(c for c in _full_cube(dimension) if not _is_center_face_neighbor(c))


def boundary_retained(dimension: int) -> FrozenSet[Cell]:
    """Cells of the carpet pattern touching the boundary of [0,1]^d."""
    return frozenset(c for c in carpet_retained(dimension) if any(x in (1, BASE) for x in c))


def cross_retained() -> FrozenSet[Cell]:
    """Square pattern with the center and its four face-neighbors removed (20 cells)."""
    cross = {(CENTER, CENTER)}
    for step in (-1, 1):
        cross.add((CENTER + step, CENTER))
        cross.add((CENTER, CENTER + step))
    return _full_cube(2) - cross


_BUILTINS: Dict[str, Callable[[], FractalSpec]] = {
    "F2": lambda: FractalSpec(name="F2", dimension=2, retained=carpet_retained(2)),
    "F3": lambda: FractalSpec(name="F3", dimension=3, retained=carpet_retained(3)),
    "tildeF2": lambda: FractalSpec(name="tildeF2", dimension=2, retained=cross_retained()),
    "G1": lambda: FractalSpec(name="G1", dimension=1, retained=boundary_retained(1)),
    "G2": lambda: FractalSpec(name="G2", dimension=2, retained=boundary_retained(2)),
}

BUILTIN_NAMES = tuple(_BUILTINS)


@lru_cache(maxsize=None)
def builtin_spec(name: str) -> FractalSpec:
    """Return the built-in fractal spec registered under `name`."""
    factory = _BUILTINS.get(name)
    if factory is None:
        raise UnknownSpecError(
            f"Unknown fractal '{name}'. Available: {', '.join(BUILTIN_NAMES)}"
        )
    return factory()


def carpet_for_dimension(dimension: int) -> FractalSpec:
    """The carpet F^(d) for d in {2, 3}."""
    return builtin_spec(f"F{dimension}")


def boundary_for_dimension(dimension: int) -> FractalSpec:
    """The boundary pattern G^(d) for d in {1, 2}."""
    return builtin_spec(f"G{dimension}")
