"""k-colorings of 2^[N], standard constructions, Lubell mass and the coloring file format.

Color 0 is red and color 1 is blue throughout.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError
from .lattice import family_bits

RED = 0
BLUE = 1
MAX_CELLS_N = 24

LubellMass = Fraction


@functools.lru_cache(maxsize=None)
def popcounts(N: int) -> np.ndarray:
    pc = np.zeros(1 << N, dtype=np.uint8)
    for i in range(N):
        pc[1 << i:1 << (i + 1)] = pc[: 1 << i] + 1
    pc.flags.writeable = False
    return pc


def iter_submasks(S: int):
    """All submasks of S, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == S:
            return
        sub = (sub - S) & S


@dataclass(frozen=True, eq=False)
class Coloring:
    N: int
    k: int
    cells: np.ndarray

    def __post_init__(self):
        if not 0 <= self.N <= MAX_CELLS_N:
            raise InvalidInputError(f"colorings limited to N <= {MAX_CELLS_N}, got N={self.N}")
        if self.k < 1 or self.k > 256:
            raise InvalidInputError(f"number of colors must be in 1..256, got {self.k}")
        cells = np.asarray(self.cells)
        if cells.shape != (1 << self.N,):
            raise InvalidInputError(f"expected {1 << self.N} cells, got shape {cells.shape}")
        if cells.size and (cells.min() < 0 or cells.max() >= self.k):
            raise InvalidInputError(f"cell colors must lie in [0, {self.k})")
        cells = cells.astype(np.uint8, copy=True)
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)

    @classmethod
    def constant(cls, N: int, color: int = RED, k: int = 2) -> Coloring:
        return cls(N, k, np.full(1 << N, color, dtype=np.uint8))

    @classmethod
    def from_red_family(cls, N: int, red: Iterable) -> Coloring:
        cells = np.full(1 << N, BLUE, dtype=np.uint8)
        masks, _ = family_bits(red)
        cells[masks] = RED
        return cls(N, 2, cells)

    @classmethod
    def from_int(cls, N: int, value: int) -> Coloring:
        """Two-coloring whose cell S is bit S of ``value`` (1 = blue)."""
        bits = np.array([(value >> s) & 1 for s in range(1 << N)], dtype=np.uint8)
        return cls(N, 2, bits)

    def to_int(self) -> int:
        if self.k != 2:
            raise InvalidInputError("integer packing only defined for two colors")
        return int.from_bytes(np.packbits(self.cells, bitorder="little").tobytes(), "little")

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.N == other.N and self.k == other.k and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.N, self.k, self.cells.tobytes()))

    def __getitem__(self, S) -> int:
        return int(self.cells[int(S)])

    def color_class(self, color: int) -> list[int]:
        return np.flatnonzero(self.cells == color).tolist()

    def to_json(self) -> dict:
        if self.k == 2:
            packed = np.packbits(self.cells, bitorder="little").tobytes()
        else:
            packed = self.cells.tobytes()
        return {"N": self.N, "k": self.k, "cells_hex": packed.hex()}

    @classmethod
    def from_json(cls, data: str | dict) -> Coloring:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            N, k, raw = int(data["N"]), int(data["k"]), bytes.fromhex(data["cells_hex"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed coloring file: {exc}") from None
        if not 0 <= N <= MAX_CELLS_N:
            raise InvalidInputError(f"colorings limited to N <= {MAX_CELLS_N}")
        cells_n = 1 << N
        if k == 2:
            if len(raw) != max(1, cells_n // 8):
                raise InvalidInputError(f"expected {max(1, cells_n // 8)} packed bytes, got {len(raw)}")
            cells = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:cells_n]
            if cells_n < 8 and raw[0] >> cells_n:
                raise InvalidInputError("padding bits set beyond the last cell")
        else:
            if len(raw) != cells_n:
                raise InvalidInputError(f"expected {cells_n} cell bytes, got {len(raw)}")
            cells = np.frombuffer(raw, dtype=np.uint8)
        return cls(N, k, cells)


def layered_coloring(N: int, layer_colors: Sequence[int], k: int | None = None) -> Coloring:
    """Cell S gets ``layer_colors[|S|]``."""
    if len(layer_colors) != N + 1:
        raise InvalidInputError(f"need {N + 1} layer colors, got {len(layer_colors)}")
    lc = np.asarray(layer_colors, dtype=np.int64)
    if k is None:
        k = max(2, int(lc.max()) + 1)
    return Coloring(N, k, lc[popcounts(N)])


def is_layered_on(c: Coloring, S: int) -> bool:
    S = int(S)
    if S >> c.N:
        raise InvalidInputError("S is not a subset of the ground set")
    seen = {}
    for sub in iter_submasks(S):
        size = sub.bit_count()
        col = c.cells[sub]
        if seen.setdefault(size, col) != col:
            return False
    return True


def rng(seed: int) -> np.random.Generator:
    """The package-wide generator: numpy PCG64 seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(seed))


def random_coloring(N: int, k: int = 2, seed: int = 0) -> Coloring:
    if k < 2:
        raise InvalidInputError("random colorings need at least two colors")
    return Coloring(N, k, rng(seed).integers(0, k, size=1 << N, dtype=np.uint8))


def lubell_mass(family: Iterable, N: int) -> Fraction:
    masks, _ = family_bits(family)
    if len(set(masks)) != len(masks):
        raise InvalidInputError("family contains a duplicate set")
    if any(m < 0 or m >> N for m in masks):
        raise InvalidInputError(f"family not contained in 2^[{N}]")
    by_layer = [0] * (N + 1)
    for m in masks:
        by_layer[m.bit_count()] += 1
    return sum((Fraction(cnt, math.comb(N, i)) for i, cnt in enumerate(by_layer) if cnt), Fraction(0))


def complement_recolor(c: Coloring) -> Coloring:
    """cell'[S] = 1 - cell[complement of S]; an involution on two-colorings."""
    if c.k != 2:
        raise InvalidInputError("complement recoloring needs exactly two colors")
    # reversing the cell array maps index S to full ^ S
    return Coloring(c.N, 2, 1 - c.cells[::-1])


def is_complement_symmetric(c: Coloring) -> bool:
    return c == complement_recolor(c)
