"""Embeddings of Q_n into Q_N via characteristic vectors.

An embedding f is determined by its characteristic vector: column j holds
the upset of source sets S with j in f(S).  Sequences of upsets in which
every principal upset {i}+ occurs ("good" sequences) correspond one-to-one
to embeddings, which gives duplicate-free enumeration, exact counting and
splittable rank ranges.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .colorings import iter_submasks
from .errors import InvalidInputError, ResourceLimitError
from .lattice import Poset, UpSet, count_antichains, enumerate_upsets, is_embedding, upset_close

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class Embedding:
    """Map 2^[n] -> 2^[N]; ``image[S]`` is the image of source mask S."""

    n: int
    N: int
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        object.__setattr__(self, "image", image)
        if not 0 <= self.n <= self.N:
            raise InvalidInputError(f"need 0 <= n <= N, got n={self.n}, N={self.N}")
        if len(image) != 1 << self.n:
            raise InvalidInputError(f"image table needs {1 << self.n} entries, got {len(image)}")
        if any(x < 0 or x >> self.N for x in image):
            raise InvalidInputError(f"image outside 2^[{self.N}]")

    def is_valid(self) -> bool:
        return is_embedding(Poset.boolean_lattice(self.n), self.image)

    def family(self) -> frozenset[int]:
        return frozenset(self.image)

    def restrict(self, n: int) -> Embedding:
        """Restriction to the sub-lattice 2^[n] of the source."""
        return Embedding(n, self.N, self.image[: 1 << n])

    def to_json(self) -> dict:
        return {"n": self.n, "N": self.N, "image": list(self.image)}

    @classmethod
    def from_json(cls, data: Mapping) -> Embedding:
        try:
            return cls(int(data["n"]), int(data["N"]), tuple(int(x) for x in data["image"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed embedding JSON: {exc}") from None


@dataclass(frozen=True)
class GoodSequence:
    n: int
    entries: tuple[UpSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if any(u.n != self.n for u in self.entries):
            raise InvalidInputError("all entries must be upsets of the same 2^[n]")
        if not is_good(self.entries, self.n):
            raise InvalidInputError("sequence is not good: some principal upset {i}+ is missing")

    @property
    def N(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [u.to_json() for u in self.entries]}

    @classmethod
    def from_json(cls, data: Mapping) -> GoodSequence:
        n = int(data["n"])
        return cls(n, tuple(UpSet(n, tuple(sorted(e))) for e in data["entries"]))


@dataclass(frozen=True)
class PhiDecomposition:
    """Copy of Q_|I| written as {Y | phi[Y] : Y subset of I}."""

    N: int
    I: int
    phi: Mapping[int, int]

    def validate(self):
        keys = sorted(iter_submasks(self.I))
        if sorted(self.phi) != keys:
            raise InvalidInputError("phi must be defined on exactly the subsets of I")
        for Y, v in self.phi.items():
            if v & self.I or v >> self.N:
                raise InvalidInputError(f"phi[{Y:#x}] must lie inside [N] minus I")
        for Y in keys:
            for Z in keys:
                if Y & ~Z == 0 and self.phi[Y] & ~self.phi[Z]:
                    raise InvalidInputError("phi is not inclusion preserving")


def is_good(entries: Sequence[UpSet], n: int | None = None) -> bool:
    if n is None:
        if not entries:
            return True
        n = entries[0].n
    present = {u.min_elements for u in entries}
    return all((1 << i,) in present for i in range(n))


def characteristic_vector(f: Embedding) -> GoodSequence:
    entries = []
    for j in range(f.N):
        members = [S for S, img in enumerate(f.image) if img >> j & 1]
        entries.append(upset_close(members, f.n))
    return GoodSequence(f.n, tuple(entries))


def embedding_from_sequence(s: GoodSequence | Sequence[UpSet], n: int | None = None) -> Embedding:
    if not isinstance(s, GoodSequence):
        entries = tuple(s)
        if n is None:
            if not entries:
                raise InvalidInputError("cannot infer n from an empty sequence")
            n = entries[0].n
        s = GoodSequence(n, entries)
    image = [0] * (1 << s.n)
    for j, u in enumerate(s.entries):
        fm = u.family_mask
        for S in range(1 << s.n):
            if fm >> S & 1:
                image[S] |= 1 << j
    return Embedding(s.n, s.N, tuple(image))


def decompose_embedding(f: Embedding) -> PhiDecomposition:
    """Pick I from the first occurrence of each {i}+ and read phi off the images."""
    cv = characteristic_vector(f)
    I = 0
    for i in range(f.n):
        j = next(j for j, u in enumerate(cv.entries) if u.min_elements == (1 << i,))
        I |= 1 << j
    phi = {img & I: img & ~I for img in f.image}
    return PhiDecomposition(f.N, I, phi)


def recompose_phi(d: PhiDecomposition) -> list[int]:
    d.validate()
    return [Y | d.phi[Y] for Y in iter_submasks(d.I)]


# ---------------------------------------------------------------------------
# Counting


def _count_good(a: int, missing: int, length: int) -> int:
    """Words of ``length`` letters over an alphabet of ``a`` that use each of
    ``missing`` specified letters at least once (inclusion-exclusion)."""
    return sum((-1) ** k * math.comb(missing, k) * (a - k) ** length for k in range(missing + 1))


def count_embeddings_exact(n: int, N: int) -> int:
    """e(n, N) = sum_k (-1)^k C(n, k) (a(n) - k)^N."""
    if n < 0 or N < 0:
        raise InvalidInputError("dimensions must be non-negative")
    if n > N:
        return 0
    return _count_good(count_antichains(n), n, N)


def count_embeddings_bounds(n: int, N: int) -> tuple[int, int]:
    """Lower and upper bound (N!/(N-n)!) (a(n)-n)^(N-n) and (N!/(N-n)!) a(n)^(N-n)."""
    if not 0 <= n <= N:
        raise InvalidInputError(f"need 0 <= n <= N, got n={n}, N={N}")
    a = count_antichains(n)
    falling = math.perm(N, n)
    return falling * (a - n) ** (N - n), falling * a ** (N - n)


# ---------------------------------------------------------------------------
# Enumeration and ranking


@functools.lru_cache(maxsize=None)
def _alphabet(n: int) -> tuple[list[UpSet], list[int]]:
    ups = enumerate_upsets(n)
    index = {u.min_elements: k for k, u in enumerate(ups)}
    principal = [index[(1 << i,)] for i in range(n)]
    return ups, principal


def _principal_slot(n: int) -> dict[int, int]:
    _, principal = _alphabet(n)
    return {letter: i for i, letter in enumerate(principal)}


def sequence_rank(s: GoodSequence) -> int:
    """Position of ``s`` among good sequences of the same (n, N) in lexicographic order."""
    ups, _ = _alphabet(s.n)
    a = len(ups)
    slot = _principal_slot(s.n)
    index = {u.min_elements: k for k, u in enumerate(ups)}
    missing = (1 << s.n) - 1
    rank = 0
    for j, u in enumerate(s.entries):
        letter = index[u.min_elements]
        remaining = s.N - j - 1
        for smaller in range(letter):
            m = missing & ~(1 << slot[smaller]) if smaller in slot else missing
            rank += _count_good(a, m.bit_count(), remaining) if m.bit_count() <= remaining else 0
        if letter in slot:
            missing &= ~(1 << slot[letter])
    return rank


def _letters_from(n: int, N: int, start: int) -> Iterator[list[int]]:
    """Good letter sequences in lexicographic order, beginning at rank ``start``."""
    ups, _ = _alphabet(n)
    a = len(ups)
    slot = _principal_slot(n)
    word = [0] * N
    skip = [start]

    def rec(j, missing):
        if j == N:
            if skip[0]:
                skip[0] -= 1
                return
            yield word
            return
        remaining = N - j - 1
        for letter in range(a):
            m = missing & ~(1 << slot[letter]) if letter in slot else missing
            if m.bit_count() > remaining:
                continue
            if skip[0]:
                sub = _count_good(a, m.bit_count(), remaining)
                if skip[0] >= sub:
                    skip[0] -= sub
                    continue
            word[j] = letter
            yield from rec(j + 1, m)

    yield from rec(0, (1 << n) - 1)


def sequence_at(n: int, N: int, rank: int) -> GoodSequence:
    """Inverse of :func:`sequence_rank`."""
    total = count_embeddings_exact(n, N)
    if not 0 <= rank < total:
        raise InvalidInputError(f"rank {rank} outside 0..{total - 1}")
    ups, _ = _alphabet(n)
    word = next(_letters_from(n, N, rank))
    return GoodSequence(n, tuple(ups[k] for k in word))


def enumerate_embeddings(
    n: int,
    N: int,
    start: int = 0,
    stop: int | None = None,
    budget: int | None = DEFAULT_BUDGET,
) -> Iterator[Embedding]:
    """Every embedding of Q_n into Q_N exactly once, ordered by good-sequence rank.

    ``start``/``stop`` select a rank range, so disjoint ranges can be handed to
    independent workers.  Yielding more than ``budget`` items raises
    :class:`ResourceLimitError` whose ``partial`` is the count already yielded.
    """
    if not 0 <= n <= N:
        raise InvalidInputError(f"need 0 <= n <= N, got n={n}, N={N}")
    total = count_embeddings_exact(n, N)
    if start < 0 or (stop is not None and stop < start):
        raise InvalidInputError(f"bad rank range [{start}, {stop})")
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    ups, _ = _alphabet(n)
    members = [u.family_mask for u in ups]
    size = 1 << n
    produced = 0
    for word in _letters_from(n, N, start):
        if start + produced >= stop:
            return
        if budget is not None and produced >= budget:
            raise ResourceLimitError(f"enumeration budget of {budget} embeddings exhausted", partial=produced)
        image = [0] * size
        for j, letter in enumerate(word):
            fm = members[letter]
            for S in range(size):
                if fm >> S & 1:
                    image[S] |= 1 << j
        produced += 1
        yield Embedding(n, N, tuple(image))


# ---------------------------------------------------------------------------
# Table of all copies of Q_n in Q_N


@dataclass(frozen=True, eq=False)
class CopyTable:
    """Every copy of Q_n in Q_N once, as rows of images indexed by source mask.

    ``masks`` holds each copy as a 2^N-bit cell set when 2^N <= 64.
    """

    n: int
    N: int
    images: np.ndarray
    masks: np.ndarray | None

    def __len__(self):
        return len(self.images)

    def embedding(self, row: int) -> Embedding:
        return Embedding(self.n, self.N, tuple(int(x) for x in self.images[row]))


DEFAULT_COPY_BUDGET = 2 * 10**6


def count_copies(n: int, N: int) -> int:
    return count_embeddings_exact(n, N) // math.factorial(n)


@functools.lru_cache(maxsize=16)
def copy_table(n: int, N: int, budget: int = DEFAULT_COPY_BUDGET) -> CopyTable:
    """One good sequence per copy: first occurrences of {1}+, ..., {n}+ in order.

    Relabelling source coordinates permutes the principal upsets, so each
    orbit of n! embeddings sharing an image family has exactly one member
    with sorted first occurrences.
    """
    if not 0 <= n <= N:
        raise InvalidInputError(f"need 0 <= n <= N, got n={n}, N={N}")
    expected = count_copies(n, N)
    if expected > budget:
        raise ResourceLimitError(f"{expected} copies of Q_{n} in Q_{N} exceed budget {budget}")
    ups, principal = _alphabet(n)
    a = len(ups)
    size = 1 << n
    member = np.array([[fm >> S & 1 for S in range(size)] for fm in (u.family_mask for u in ups)], dtype=np.int64)
    slot_of = np.full(a, -1, dtype=np.int64)
    slot_of[principal] = np.arange(n)

    words = np.zeros((1, 0), dtype=np.int16)
    seen = np.zeros(1, dtype=np.int64)
    for j in range(N):
        remaining = N - j - 1
        new_words, new_seen = [], []
        for letter in range(a):
            s = slot_of[letter]
            if s < 0:
                ok = np.ones(len(seen), dtype=bool)
                nxt = seen
            else:
                ok = seen >= s
                nxt = seen + (seen == s)
            ok &= (n - nxt) <= remaining
            if ok.any():
                w = words[ok]
                new_words.append(np.hstack([w, np.full((len(w), 1), letter, dtype=np.int16)]))
                new_seen.append(nxt[ok])
        words = np.vstack(new_words)
        seen = np.concatenate(new_seen)
    assert len(words) == expected, (len(words), expected)

    images = np.zeros((len(words), size), dtype=np.int64)
    for j in range(N):
        images |= member[words[:, j]] << j
    masks = None
    if N <= 6:
        masks = np.bitwise_or.reduce(np.left_shift(np.uint64(1), images.astype(np.uint64)), axis=1)
    images.flags.writeable = False
    if masks is not None:
        masks.flags.writeable = False
    return CopyTable(n, N, images, masks)
