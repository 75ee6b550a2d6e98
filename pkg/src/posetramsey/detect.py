"""Searching colored lattices for monochromatic structure.

``None`` always means the search finished and found nothing.  Running out of
budget raises :class:`ResourceLimitError` instead, so Ramsey verdicts never
mistake an aborted search for an absence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .colorings import BLUE, RED, Coloring
from .embeddings import Embedding, _alphabet, copy_table
from .errors import InvalidInputError, ResourceLimitError
from .lattice import Poset, family_bits, format_mask, sort_key

DEFAULT_NODE_BUDGET = 5 * 10**6


@dataclass(frozen=True)
class BooleanAlgebraWitness:
    """Blocks X_0, ..., X_n generating {X_0 | union of X_i over i in I}."""

    X: tuple[int, ...]

    def __post_init__(self):
        X = tuple(int(x) for x in self.X)
        object.__setattr__(self, "X", X)
        if not X:
            raise InvalidInputError("need at least the block X_0")
        if any(x == 0 for x in X[1:]):
            raise InvalidInputError("blocks X_1..X_n must be nonempty")
        seen = 0
        for x in X:
            if x & seen:
                raise InvalidInputError("blocks must be pairwise disjoint")
            seen |= x

    @property
    def n(self) -> int:
        return len(self.X) - 1

    def sets(self) -> list[int]:
        """All 2^n generated sets, indexed by the mask of I."""
        out = []
        for I in range(1 << self.n):
            s = self.X[0]
            for i in range(self.n):
                if I >> i & 1:
                    s |= self.X[i + 1]
            out.append(s)
        return out

    def to_json(self) -> dict:
        return {"X": list(self.X)}

    def describe(self) -> str:
        return ", ".join(f"X_{i}={format_mask(x)}" for i, x in enumerate(self.X))


@dataclass(frozen=True)
class HilbertCubeWitness:
    x: tuple[int, ...]

    def __post_init__(self):
        x = tuple(int(v) for v in self.x)
        object.__setattr__(self, "x", x)
        if not x or x[0] < 0 or any(v < 1 for v in x[1:]):
            raise InvalidInputError("need x_0 >= 0 and x_i >= 1")

    def sums(self) -> list[int]:
        out = []
        for I in range(1 << (len(self.x) - 1)):
            out.append(self.x[0] + sum(v for i, v in enumerate(self.x[1:]) if I >> i & 1))
        return out


# ---------------------------------------------------------------------------
# Copies of general posets


def _poset_copies(P: Poset, cells: Sequence[int], budget: int | None) -> Iterator[list[int]]:
    """Backtracking over a linear extension of P with candidates from ``cells``."""
    order = P.linear_extension()
    below = [[q for q in order[:k] if P.lt(q, p)] for k, p in enumerate(order)]
    others = [[q for q in order[:k] if not P.lt(q, p)] for k, p in enumerate(order)]
    cells = sorted(cells, key=sort_key)
    img = [0] * P.size
    used = set()
    nodes = 0

    def rec(k):
        nonlocal nodes
        if k == len(order):
            yield list(img)
            return
        p = order[k]
        base = 0
        for q in below[k]:
            base |= img[q]
        for c in cells:
            if base & ~c or c in used:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise ResourceLimitError(f"poset search exceeded {budget} nodes", partial=nodes)
            ok = True
            for q in below[k]:
                if img[q] == c:
                    ok = False
                    break
            if ok:
                for q in others[k]:
                    iq = img[q]
                    # q is not below p; p is never below q since q comes first
                    if iq & ~c == 0 or c & ~iq == 0:
                        ok = False
                        break
            if not ok:
                continue
            img[p] = c
            used.add(c)
            yield from rec(k + 1)
            used.discard(c)

    yield from rec(0)


def find_poset_copy(
    c: Coloring, P: Poset, color: int, budget: int | None = DEFAULT_NODE_BUDGET
) -> list[int] | None:
    """Images (indexed by element of P) of a copy of P in the given color, or None."""
    if P.size > 1 << c.N:
        return None
    cells = c.color_class(color)
    return next(_poset_copies(P, cells, budget), None)


def iter_poset_copies(
    P: Poset, N: int, cells: Iterable[int] | None = None, budget: int | None = DEFAULT_NODE_BUDGET
) -> Iterator[list[int]]:
    """All embeddings of P into Q_N (optionally restricted to ``cells``)."""
    cells = range(1 << N) if cells is None else cells
    yield from _poset_copies(P, list(cells), budget)


def poset_copy_families(P: Poset, N: int, budget: int | None = DEFAULT_NODE_BUDGET) -> list[int]:
    """Distinct copies of P in Q_N as sorted list of cell-set bitmasks (Python ints)."""
    fams = set()
    for imgs in iter_poset_copies(P, N, budget=budget):
        m = 0
        for x in imgs:
            m |= 1 << x
        fams.add(m)
    return sorted(fams)


# ---------------------------------------------------------------------------
# Monochromatic Boolean lattices


def find_mono_qn(
    c: Coloring, n: int, color: int, budget: int | None = DEFAULT_NODE_BUDGET
) -> Embedding | None:
    """Monochromatic copy of Q_n, found by choosing the upset in each column.

    Column j fixes bit j of every image.  A partial choice survives only if
    each partial image is the low part of some cell of the right color, and
    enough columns remain for the principal upsets not yet placed.  Principal
    upsets must first appear in the order {1}+, {2}+, ... which removes the
    n! relabellings of the same copy.
    """
    N = c.N
    if not 0 <= n <= N:
        raise InvalidInputError(f"need 0 <= n <= N, got n={n}, N={N}")
    cells = c.color_class(color)
    size = 1 << n
    if len(cells) < size:
        return None
    ups, principal = _alphabet(n)
    slot = {letter: i for i, letter in enumerate(principal)}
    bits = [tuple(u.family_mask >> S & 1 for S in range(size)) for u in ups]
    prefixes = [None] * (N + 1)
    for j in range(N + 1):
        lowmask = (1 << j) - 1
        prefixes[j] = {t & lowmask for t in cells}
    nodes = 0

    def rec(j, imgs, seen):
        nonlocal nodes
        if j == N:
            return imgs
        remaining = N - j - 1
        ok_set = prefixes[j + 1]
        for letter, memb in enumerate(bits):
            s = slot.get(letter)
            nseen = seen
            if s is not None:
                if s > seen:
                    continue
                if s == seen:
                    nseen = seen + 1
            if n - nseen > remaining:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise ResourceLimitError(f"Q_{n} search exceeded {budget} nodes", partial=nodes)
            bit = 1 << j
            new = tuple(p | bit if b else p for p, b in zip(imgs, memb))
            if all(p in ok_set for p in new):
                found = rec(j + 1, new, nseen)
                if found is not None:
                    return found
        return None

    found = rec(0, (0,) * size, 0)
    return None if found is None else Embedding(n, N, found)


def count_mono_qn(c: Coloring, n: int) -> tuple[int, int]:
    """Numbers of all-red and all-blue copies of Q_n (unordered image families)."""
    if c.k != 2:
        raise InvalidInputError("count_mono_qn needs a two-coloring")
    table = copy_table(n, c.N)
    if table.masks is not None:
        blue = np.uint64(c.to_int())
        full = np.uint64((1 << (1 << c.N)) - 1)
        red = full & ~blue
        m = table.masks
        return int(np.count_nonzero(m & red == m)), int(np.count_nonzero(m & blue == m))
    vals = c.cells[table.images]
    return int(np.count_nonzero((vals == RED).all(axis=1))), int(np.count_nonzero((vals == BLUE).all(axis=1)))


def mono_copies_naive(c: Coloring, n: int) -> tuple[int, int]:
    """Per-copy scan over the copy table without packed masks (test oracle)."""
    table = copy_table(n, c.N)
    red = blue = 0
    for row in table.images:
        cols = {int(c.cells[x]) for x in row}
        if cols == {RED}:
            red += 1
        elif cols == {BLUE}:
            blue += 1
    return red, blue


# ---------------------------------------------------------------------------
# Layered sub-cubes, Hilbert cubes, Boolean algebras


def _masks_of_size(N: int, n: int) -> Iterator[int]:
    """All n-subsets of [N] in ascending mask order (Gosper's hack)."""
    if n == 0:
        yield 0
        return
    x = (1 << n) - 1
    limit = 1 << N
    while x < limit:
        yield x
        low = x & -x
        ripple = x + low
        x = (((ripple ^ x) >> 2) // low) | ripple


def find_layered_subcube(c: Coloring, n: int) -> int | None:
    """Smallest mask S with |S| = n on which c is layered."""
    from .colorings import is_layered_on

    if not 0 <= n <= c.N:
        raise InvalidInputError(f"need 0 <= n <= N, got n={n}, N={c.N}")
    if c.N > 20:
        raise InvalidInputError("layered sub-cube scan limited to N <= 20")
    for S in _masks_of_size(c.N, n):
        if is_layered_on(c, S):
            return S
    return None


def find_mono_hilbert_cube(
    colors: Sequence[int], n: int, start: int = 1
) -> tuple[int, HilbertCubeWitness] | None:
    """Monochromatic n-dimensional Hilbert cube among values start, start+1, ...

    ``colors[i]`` is the color of value ``start + i``.  Candidates are tried
    with x_0 ascending, then x_1 <= ... <= x_n in lexicographic order.
    """
    M = len(colors)
    if M > 65:
        raise InvalidInputError("Hilbert cube search limited to 64 values")
    if n > 4 or n < 0:
        raise InvalidInputError("Hilbert cube search limited to dimension <= 4")
    top = start + M - 1

    def col(v):
        return colors[v - start]

    def rec(x, sums, color):
        if len(x) == n + 1:
            return x
        lo = x[-1] if len(x) > 1 else 1
        hi_sum = max(sums)
        for d in range(lo, top - hi_sum + 1):
            new = [s + d for s in sums]
            if all(col(s) == color for s in new):
                found = rec(x + [d], sums | set(new), color)
                if found is not None:
                    return found
        return None

    for x0 in range(start, top + 1):
        color = col(x0)
        found = rec([x0], {x0}, color)
        if found is not None:
            return color, HilbertCubeWitness(tuple(found))
    return None


def find_boolean_algebra(
    family: Iterable, n: int, budget: int | None = DEFAULT_NODE_BUDGET
) -> BooleanAlgebraWitness | None:
    """Boolean algebra of dimension n contained (as a subfamily) in ``family``."""
    masks, _ = family_bits(family)
    members = set(masks)
    if n < 0:
        raise InvalidInputError("dimension must be non-negative")
    nodes = 0
    for x0 in sorted(members, key=sort_key):
        if n == 0:
            return BooleanAlgebraWitness((x0,))
        atoms = sorted(a for a in members if a != x0 and x0 & ~a == 0)

        def rec(start, blocks, unions, used):
            nonlocal nodes
            if len(blocks) == n:
                return blocks
            for k in range(start, len(atoms)):
                d = atoms[k] & ~x0
                if d & used:
                    continue
                nodes += 1
                if budget is not None and nodes > budget:
                    raise ResourceLimitError(f"Boolean algebra search exceeded {budget} nodes")
                new = [u | d for u in unions]
                if all(u in members for u in new):
                    found = rec(k + 1, blocks + [d], unions + new, used | d)
                    if found is not None:
                        return found
            return None

        found = rec(0, [], [x0], 0)
        if found is not None:
            return BooleanAlgebraWitness((x0, *found))
    return None
