from itertools import permutations, product
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models.fractals import BASE, CellIndex, CellSet, FractalSpec
from .cells import cells_at_level


class CubeSymmetry(BaseModel):
    """Element of the symmetry group of the cube: axis permutation followed by reflections."""
    model_config = ConfigDict(frozen=True)

    permutation: Tuple[int, ...] = Field(..., description="New axis i takes old axis permutation[i]")
    flips: Tuple[bool, ...] = Field(..., description="Reflect axis i (l -> 5^n + 1 - l) after permuting")


def cube_symmetries(dimension: int) -> List[CubeSymmetry]:
    """All 2^d * d! symmetries; the identity comes first."""
    return [
        CubeSymmetry(permutation=perm, flips=flips)
        for perm in permutations(range(dimension))
        for flips in product((False, True), repeat=dimension)
    ]


def apply_symmetry_coords(symmetry: CubeSymmetry, coords, level: int) -> np.ndarray:
    array = np.asarray(coords, dtype=np.int64).reshape(-1, len(symmetry.permutation))
    image = array[:, list(symmetry.permutation)].copy()
    side = BASE ** level
    for axis, flip in enumerate(symmetry.flips):
        if flip:
            image[:, axis] = side + 1 - image[:, axis]
    return image


def apply_symmetry(symmetry: CubeSymmetry, cell: CellIndex) -> CellIndex:
    image = apply_symmetry_coords(symmetry, [cell.coords], cell.level)[0]
    return CellIndex(level=cell.level, coords=tuple(int(c) for c in image))


def is_symmetric(spec: FractalSpec) -> bool:
    """True when the retained pattern is invariant under every cube symmetry."""
    pattern = np.array(spec.sorted_retained(), dtype=np.int64)
    keys = {tuple(row) for row in pattern}
    for symmetry in cube_symmetries(spec.dimension):
        image = apply_symmetry_coords(symmetry, pattern, 1)
        if {tuple(row) for row in image} != keys:
            return False
    return True


def representative_cells(spec: FractalSpec, n: int) -> CellSet:
    """One level-n cell per symmetry orbit, the lexicographically first of each."""
    cells = cells_at_level(spec, n)
    symmetries = cube_symmetries(spec.dimension)
    seen = np.zeros(len(cells), dtype=bool)
    representatives = []
    for position in range(len(cells)):
        if seen[position]:
            continue
        representatives.append(position)
        row = cells.coords[position:position + 1]
        for symmetry in symmetries:
            image = int(cells.locate(apply_symmetry_coords(symmetry, row, n))[0])
            if image >= 0:
                seen[image] = True
    return CellSet(n, cells.coords[representatives], dimension=spec.dimension)
