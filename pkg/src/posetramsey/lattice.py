"""Subsets as bit masks, finite posets, upsets and antichain counting.

Elements of 2^[N] are plain ints inside every hot loop: bit ``i`` set means
ground element ``i + 1`` belongs to the set.  :class:`SubsetMask` is the
boxed form used at API boundaries when the ground size has to travel with
the bits.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceLimitError

MAX_GROUND = 63


@dataclass(frozen=True, order=True)
class SubsetMask:
    bits: int
    ground_size: int

    def __post_init__(self):
        if not 0 <= self.ground_size <= MAX_GROUND:
            raise InvalidInputError(f"ground size {self.ground_size} outside 0..{MAX_GROUND}")
        if self.bits < 0 or self.bits >> self.ground_size:
            raise InvalidInputError(f"mask {self.bits:#x} has bits outside [{self.ground_size}]")

    @classmethod
    def from_elements(cls, elements: Iterable[int], ground_size: int) -> SubsetMask:
        """Build from 1-based ground elements, e.g. ``{2, 3}`` -> ``0b110``."""
        bits = 0
        for e in elements:
            if not 1 <= e <= ground_size:
                raise InvalidInputError(f"element {e} not in [{ground_size}]")
            bits |= 1 << (e - 1)
        return cls(bits, ground_size)

    def elements(self) -> list[int]:
        return mask_elements(self.bits)

    def issubset(self, other: SubsetMask) -> bool:
        return self.bits & ~other.bits == 0

    def __len__(self):
        return self.bits.bit_count()

    def __int__(self):
        return self.bits

    def __index__(self):
        return self.bits

    def __str__(self):
        return format_mask(self.bits)


def mask_elements(bits: int) -> list[int]:
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def mask_of(elements: Iterable[int]) -> int:
    bits = 0
    for e in elements:
        bits |= 1 << (e - 1)
    return bits


def format_mask(bits: int) -> str:
    return "{" + ",".join(map(str, mask_elements(bits))) + "}"


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def sort_key(bits: int) -> tuple[int, int]:
    """Ascending by cardinality, then by mask value."""
    return (bits.bit_count(), bits)


def family_bits(family: Iterable) -> tuple[list[int], int | None]:
    """Unbox a family of masks; checks that boxed masks agree on the ground size."""
    sizes = set()
    out = []
    for m in family:
        if isinstance(m, SubsetMask):
            sizes.add(m.ground_size)
            out.append(m.bits)
        else:
            out.append(int(m))
    if len(sizes) > 1:
        raise InvalidInputError(f"masks from different ground sizes: {sorted(sizes)}")
    return out, (sizes.pop() if sizes else None)


# ---------------------------------------------------------------------------
# Posets


@dataclass(frozen=True)
class Poset:
    """Finite partial order on ``0..size-1`` given by its full relation matrix."""

    size: int
    leq: tuple[tuple[bool, ...], ...]
    up: tuple[int, ...] = field(init=False, repr=False, compare=False)
    down: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = self.size
        leq = tuple(tuple(bool(x) for x in row) for row in self.leq)
        if len(leq) != m or any(len(row) != m for row in leq):
            raise InvalidInputError(f"relation matrix is not {m}x{m}")
        object.__setattr__(self, "leq", leq)
        for i in range(m):
            if not leq[i][i]:
                raise InvalidInputError(f"not reflexive: element {i} is not <= itself")
        for i in range(m):
            for j in range(i + 1, m):
                if leq[i][j] and leq[j][i]:
                    raise InvalidInputError(f"not antisymmetric: {i} <= {j} and {j} <= {i}")
        up = tuple(sum(1 << j for j in range(m) if leq[i][j]) for i in range(m))
        down = tuple(sum(1 << i for i in range(m) if leq[i][j]) for j in range(m))
        for i in range(m):
            for j in mask_elements(up[i]):
                j -= 1
                if up[j] & ~up[i]:
                    k = mask_elements(up[j] & ~up[i])[0] - 1
                    raise InvalidInputError(
                        f"not transitive: {i} <= {j} and {j} <= {k} but not {i} <= {k}"
                    )
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", down)

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Sequence[int]]) -> Poset:
        """Relation given as all pairs ``i <= j`` (i != j); reflexive pairs implied."""
        rel = [[i == j for j in range(size)] for i in range(size)]
        for i, j in pairs:
            if not (0 <= i < size and 0 <= j < size):
                raise InvalidInputError(f"pair ({i}, {j}) outside 0..{size - 1}")
            rel[i][j] = True
        return cls(size, tuple(map(tuple, rel)))

    @classmethod
    def from_covers(cls, size: int, pairs: Iterable[Sequence[int]]) -> Poset:
        """Like :meth:`from_pairs` but takes the transitive closure first."""
        rel = [[i == j for j in range(size)] for i in range(size)]
        for i, j in pairs:
            rel[i][j] = True
        for k in range(size):
            for i in range(size):
                if rel[i][k]:
                    for j in range(size):
                        if rel[k][j]:
                            rel[i][j] = True
        return cls(size, tuple(map(tuple, rel)))

    @classmethod
    def chain(cls, n: int) -> Poset:
        return cls(n, tuple(tuple(i <= j for j in range(n)) for i in range(n)))

    @classmethod
    def antichain(cls, n: int) -> Poset:
        return cls(n, tuple(tuple(i == j for j in range(n)) for i in range(n)))

    @classmethod
    def boolean_lattice(cls, n: int) -> Poset:
        """Q_n with element index equal to the subset mask."""
        m = 1 << n
        return cls(m, tuple(tuple(i & ~j == 0 for j in range(m)) for i in range(m)))

    @classmethod
    def from_json(cls, text: str | dict) -> Poset:
        data = json.loads(text) if isinstance(text, str) else text
        try:
            size = int(data["size"])
            pairs = [(int(i), int(j)) for i, j in data["leq"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed poset JSON: {exc}") from None
        return cls.from_pairs(size, pairs)

    def to_json(self) -> dict:
        pairs = [[i, j] for i in range(self.size) for j in range(self.size) if i != j and self.leq[i][j]]
        return {"size": self.size, "leq": pairs}

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq[i][j]

    def comparable(self, i: int, j: int) -> bool:
        return self.leq[i][j] or self.leq[j][i]

    def linear_extension(self) -> list[int]:
        """Minimal elements first; ties by element index."""
        remaining = set(range(self.size))
        order = []
        while remaining:
            mins = sorted(i for i in remaining if not any(self.lt(j, i) for j in remaining))
            order.extend(mins)
            remaining.difference_update(mins)
        return order

    def chain_heights(self) -> list[int]:
        """Element p -> number of elements in a longest chain with maximum p."""
        h = [0] * self.size
        for p in self.linear_extension():
            h[p] = 1 + max((h[q] for q in range(self.size) if self.lt(q, p)), default=0)
        return h


def poset_height(P: Poset) -> int:
    """Cardinality of a largest chain (longest path in the strict-order DAG)."""
    return max(P.chain_heights(), default=0)


def lex_product(P: Poset, Q: Poset) -> Poset:
    """Lexicographic product; element ``(p, q)`` has index ``p * |Q| + q``.

    ``(p1, q1) <= (p2, q2)`` iff ``p1 < p2`` strictly, or ``p1 == p2`` and
    ``q1 <= q2``.
    """
    m = Q.size
    size = P.size * m
    rel = [[False] * size for _ in range(size)]
    for p1 in range(P.size):
        for p2 in range(P.size):
            for q1 in range(m):
                for q2 in range(m):
                    if P.lt(p1, p2) or (p1 == p2 and Q.leq[q1][q2]):
                        rel[p1 * m + q1][p2 * m + q2] = True
    return Poset(size, tuple(map(tuple, rel)))


def is_embedding(P: Poset, images: Sequence) -> bool:
    """True iff ``A <= B`` in P exactly when ``images[A]`` is a subset of ``images[B]``.

    Repeated images make order reflection fail, so they yield False.
    """
    imgs, _ = family_bits(images)
    if len(imgs) != P.size:
        raise InvalidInputError(f"expected {P.size} images, got {len(imgs)}")
    for a in range(P.size):
        ia = imgs[a]
        for b in range(P.size):
            if a != b and (ia & ~imgs[b] == 0) != P.leq[a][b]:
                return False
    return True


def dim2(P: Poset, budget: int = 10**6) -> int:
    """Least n such that Q_n contains a copy of P."""
    from .colorings import Coloring
    from .detect import find_poset_copy

    if P.size > 16:
        raise InvalidInputError(f"dim2 limited to posets with at most 16 elements, got {P.size}")
    if P.size == 0:
        return 0
    n = max(poset_height(P) - 1, math.ceil(math.log2(P.size)))
    # p -> down-set of p always embeds, so n never passes |P|
    while n <= P.size:
        if find_poset_copy(Coloring.constant(n, 0), P, 0, budget=budget) is not None:
            return n
        n += 1
    raise AssertionError("down-set embedding must exist")


# ---------------------------------------------------------------------------
# Antichains and upsets


def is_antichain(family: Iterable) -> bool:
    masks, _ = family_bits(family)
    for a, b in itertools.combinations(masks, 2):
        if a & ~b == 0 or b & ~a == 0:
            return False
    return True


@dataclass(frozen=True, order=True)
class UpSet:
    """Upper-closed family of 2^[n], stored as its sorted antichain of minimal sets."""

    n: int
    min_elements: tuple[int, ...]

    def __post_init__(self):
        mins = tuple(int(m) for m in self.min_elements)
        object.__setattr__(self, "min_elements", mins)
        if any(m < 0 or m >> self.n for m in mins):
            raise InvalidInputError(f"minimal element outside 2^[{self.n}]")
        if list(mins) != sorted(set(mins)):
            raise InvalidInputError("minimal elements must be sorted ascending without duplicates")
        if not is_antichain(mins):
            raise InvalidInputError("minimal elements do not form an antichain")

    @classmethod
    def _trusted(cls, n: int, mins: tuple[int, ...]) -> UpSet:
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "min_elements", mins)
        return obj

    @classmethod
    def principal(cls, i: int, n: int) -> UpSet:
        """The upset {i}+ of all sets containing ground element ``i`` (1-based)."""
        return cls._trusted(n, (1 << (i - 1),))

    @functools.cached_property
    def family_mask(self) -> int:
        """Bit S is set iff S belongs to the family."""
        return _family_mask(self.n, self.min_elements)

    def __contains__(self, S) -> bool:
        S = int(S)
        return any(m & ~S == 0 for m in self.min_elements)

    def members(self) -> list[int]:
        fm = self.family_mask
        return [S for S in range(1 << self.n) if fm >> S & 1]

    def __len__(self):
        return self.family_mask.bit_count()

    def to_json(self) -> list[int]:
        return list(self.min_elements)

    def __str__(self):
        return "<" + " ".join(format_mask(m) for m in self.min_elements) + ">+"


@functools.lru_cache(maxsize=None)
def _family_mask(n: int, mins: tuple[int, ...]) -> int:
    fm = 0
    for S in range(1 << n):
        for m in mins:
            if m & ~S == 0:
                fm |= 1 << S
                break
    return fm


def upset_close(generators: Iterable, n: int) -> UpSet:
    gens, size = family_bits(generators)
    if size is not None and size != n:
        raise InvalidInputError(f"generators live in 2^[{size}], not 2^[{n}]")
    gens = sorted(set(gens))
    if any(g >> n for g in gens):
        raise InvalidInputError(f"generator outside 2^[{n}]")
    mins = tuple(g for g in gens if not any(h != g and h & ~g == 0 for h in gens))
    return UpSet._trusted(n, mins)


UPSET_LIMIT = 6
ANTICHAIN_COUNT_LIMIT = 7


def _antichains(n: int):
    """Yield antichains of 2^[n] as tuples, preorder DFS with ascending extensions."""
    universe = list(range(1 << n))

    def rec(chosen, start):
        yield chosen
        for m in universe[start:]:
            if all(m & ~c and c & ~m for c in chosen):
                yield from rec(chosen + (m,), m + 1)

    yield from rec((), 0)


def enumerate_upsets(n: int) -> list[UpSet]:
    """All upper-closed families of 2^[n] in lexicographic order of their minimal sets."""
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    if n > UPSET_LIMIT:
        raise ResourceLimitError(f"enumerate_upsets capped at n={UPSET_LIMIT}")
    return _upsets_cached(n)


@functools.lru_cache(maxsize=None)
def _upsets_cached(n: int) -> list[UpSet]:
    return [UpSet._trusted(n, a) for a in _antichains(n)]


@functools.lru_cache(maxsize=None)
def monotone_family_masks(n: int) -> np.ndarray:
    """Sorted family masks (2^n-bit ints) of all upsets of 2^[n]; n <= 5 fits uint64."""
    if n > 5:
        raise ResourceLimitError("family masks as uint64 need n <= 5")
    return np.array(sorted(_family_mask(n, a) for a in _antichains(n)), dtype=np.uint64)


def _down_up_counts(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    down = np.empty(len(F), dtype=np.int64)
    up = np.empty(len(F), dtype=np.int64)
    for i, f in enumerate(F):
        down[i] = np.count_nonzero(F & ~f == 0)
        up[i] = np.count_nonzero(f & ~F == 0)
    return down, up


def count_antichains_two_levels(base: int) -> int:
    """a(base + 2) from the upsets of 2^[base].

    A monotone function of base+2 variables is a square f00 <= f01, f10 <= f11
    of monotone functions of ``base`` variables; for fixed f01, f10 the free
    corners range over the down-set of their meet and the up-set of their join.
    """
    F = monotone_family_masks(base)
    down, up = _down_up_counts(F)
    total = 0
    for f in F:
        meet = np.searchsorted(F, F & f)
        join = np.searchsorted(F, F | f)
        total += int(np.dot(down[meet], up[join]))
    return total


@functools.lru_cache(maxsize=None)
def count_antichains(n: int) -> int:
    """a(n): number of antichains of 2^[n], including the empty one and {empty set}."""
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    if n > ANTICHAIN_COUNT_LIMIT:
        raise ResourceLimitError(f"antichain counts only computed for n <= {ANTICHAIN_COUNT_LIMIT}")
    if n <= 5:
        return len(monotone_family_masks(n))
    if n == 6:
        # a monotone function of 6 variables is a pair f0 <= f1 over 5 variables
        down, _ = _down_up_counts(monotone_family_masks(5))
        return int(down.sum())
    return count_antichains_two_levels(5)
