"""Constructive proofs turned into procedures.

Each strategy returns a witness and re-validates it before returning; a
failed validation raises :class:`ValidationFailure`.  Ground-set blocks are
always consecutive runs of ascending elements, and "the first red element"
always means the smallest mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .colorings import BLUE, RED, Coloring, is_layered_on, layered_coloring, random_coloring
from .detect import BooleanAlgebraWitness, find_mono_hilbert_cube, find_poset_copy
from .embeddings import Embedding
from .errors import InvalidInputError, NotApplicableError, ValidationFailure
from .lattice import Poset, dim2, is_antichain, is_embedding, lex_product, poset_height

MAX_CHAIN_N = 20


@dataclass(frozen=True)
class GroundPartition:
    N: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        for b in self.blocks:
            if b & seen:
                raise InvalidInputError("blocks overlap")
            seen |= b
        if seen != (1 << self.N) - 1:
            raise InvalidInputError("blocks do not cover the ground set")

    @classmethod
    def consecutive(cls, sizes: Sequence[int]) -> GroundPartition:
        blocks, pos = [], 0
        for s in sizes:
            blocks.append(((1 << s) - 1) << pos)
            pos += s
        return cls(pos, tuple(blocks))

    def offset(self, i: int) -> int:
        """First ground position of block i (blocks laid out consecutively)."""
        return sum(b.bit_count() for b in self.blocks[:i])

    def union(self, lo: int, hi: int) -> int:
        """Union of blocks lo..hi-1."""
        out = 0
        for b in self.blocks[lo:hi]:
            out |= b
        return out


@dataclass(frozen=True)
class PosetEmbedding:
    """Copy of an arbitrary poset in Q_N; ``images[p]`` is the image of element p."""

    poset: Poset
    N: int
    images: tuple[int, ...]

    def is_valid(self) -> bool:
        return all(x >> self.N == 0 for x in self.images) and is_embedding(self.poset, self.images)

    def to_json(self) -> dict:
        return {"poset": self.poset.to_json(), "N": self.N, "images": list(self.images)}


def _check_mono(c: Coloring, images, color: int, what: str):
    if any(c.cells[x] != color for x in images):
        raise ValidationFailure(f"{what}: returned copy is not monochromatic")


def _check_qn(f: Embedding, what: str):
    if not f.is_valid():
        raise ValidationFailure(f"{what}: returned map is not an embedding")


# ---------------------------------------------------------------------------


def blob_embedding(P: Poset, m: int) -> PosetEmbedding:
    """Copy of the lexicographic product P x Q_m in Q_N with N = dim2(P) + h(P) m.

    (p, S) goes to f(p) | X_1 | ... | X_{h(p)-1} | S placed inside X_{h(p)},
    where f embeds P in 2^X_0 and h(p) is the longest chain topped by p.
    """
    if m < 1:
        raise InvalidInputError("m must be at least 1")
    n = dim2(P)
    f = find_poset_copy(Coloring.constant(n, RED), P, RED)
    heights = P.chain_heights()
    h = poset_height(P)
    part = GroundPartition.consecutive([n] + [m] * h)
    product = lex_product(P, Poset.boolean_lattice(m))
    images = []
    for p in range(P.size):
        hp = heights[p]
        base = f[p] | part.union(1, hp)
        shift = part.offset(hp)
        for S in range(1 << m):
            images.append(base | S << shift)
    out = PosetEmbedding(product, part.N, tuple(images))
    if not out.is_valid():
        raise ValidationFailure("blob embedding failed validation")
    return out


def peel_antichains(family: Sequence[int]) -> list[list[int]]:
    """Split a family into antichains by repeatedly removing its minimal sets."""
    rest = sorted(set(family), key=lambda x: (x.bit_count(), x))
    layers = []
    while rest:
        mins = [x for x in rest if not any(y != x and y & ~x == 0 for y in rest)]
        layers.append(sorted(mins))
        keep = set(rest) - set(mins)
        rest = [x for x in rest if x in keep]
    return layers


def _check_decomposition(red: Sequence[int], antichains: Sequence[Sequence[int]]):
    flat = [x for a in antichains for x in a]
    if sorted(flat) != sorted(red) or len(set(flat)) != len(flat):
        raise InvalidInputError("antichains must partition the red sets")
    for i, a in enumerate(antichains):
        if not is_antichain(a):
            raise InvalidInputError(f"layer {i + 1} is not an antichain")
        later = [x for b in antichains[i:] for x in b]
        for x in a:
            if any(y != x and y & ~x == 0 for y in later):
                raise InvalidInputError(f"layer {i + 1} is not minimal among the remaining layers")


def antichain_extract_blue(c: Coloring, antichains: Sequence[Sequence[int]] | None = None) -> Embedding:
    """All-blue copy of Q_{N - l} where the red sets split into l layered antichains.

    Starts from 2^{l+1..N} and, for layer i = 1..l, adds element i to every
    member lying above some set of antichain i.
    """
    if c.k != 2:
        raise InvalidInputError("need a two-coloring")
    red = c.color_class(RED)
    if antichains is None:
        antichains = peel_antichains(red)
    else:
        antichains = [sorted(int(x) for x in a) for a in antichains]
        _check_decomposition(red, antichains)
    ell = len(antichains)
    if ell >= c.N:
        raise NotApplicableError(f"red height {ell} is not below N={c.N}")
    n = c.N - ell
    images = []
    for S in range(1 << n):
        Y = S << ell
        for i, layer in enumerate(antichains):
            if any(A & ~Y == 0 for A in layer):
                Y |= 1 << i
        images.append(Y)
    f = Embedding(n, c.N, tuple(images))
    _check_qn(f, "antichain lemma")
    _check_mono(c, f.image, BLUE, "antichain lemma")
    return f


def strategy_qnqn(c: Coloring, n: int) -> tuple[int, Embedding]:
    """Monochromatic Q_n in a two-coloring of Q_{n^2 + 2n}.

    Blocks X_0, ..., X_{n+1} have n elements each.  For Y inside X_0 the
    family B_Y = {Y | X_1 | ... | X_{|Y|} | X : X inside X_{|Y|+1}} is a copy
    of Q_n; the first all-blue B_Y is returned, otherwise the first red set of
    every B_Y together form a red copy.
    """
    if c.k != 2:
        raise InvalidInputError("need a two-coloring")
    if n < 1 or c.N != n * n + 2 * n:
        raise InvalidInputError(f"strategy needs N = n^2 + 2n = {n * n + 2 * n}, got N={c.N}")
    part = GroundPartition.consecutive([n] * (n + 2))
    picks = []
    for Y in range(1 << n):
        k = Y.bit_count()
        base = Y | part.union(1, k + 1)
        shift = part.offset(k + 1)
        members = [base | X << shift for X in range(1 << n)]
        reds = [z for z in members if c.cells[z] == RED]
        if not reds:
            f = Embedding(n, c.N, tuple(members))
            _check_qn(f, "strategy_qnqn")
            _check_mono(c, f.image, BLUE, "strategy_qnqn")
            return BLUE, f
        picks.append(min(reds))
    f = Embedding(n, c.N, tuple(picks))
    _check_qn(f, "strategy_qnqn")
    _check_mono(c, f.image, RED, "strategy_qnqn")
    return RED, f


def _longest_red_chain(c: Coloring) -> list[int]:
    red = sorted(c.color_class(RED), key=lambda x: (x.bit_count(), x))
    height, prev = {}, {}
    for x in red:
        best, arg = 0, None
        for y in red:
            if y.bit_count() >= x.bit_count():
                break
            if y & ~x == 0 and height[y] > best:
                best, arg = height[y], y
        height[x], prev[x] = best + 1, arg
    if not red:
        return []
    top = min(red, key=lambda x: (-height[x], x))
    chain = [top]
    while prev[chain[-1]] is not None:
        chain.append(prev[chain[-1]])
    return chain[::-1]


def _lowest(bits: int) -> int:
    return bits & -bits


def _spread(S: int, positions: Sequence[int]) -> int:
    out = 0
    for i, p in enumerate(positions):
        if S >> i & 1:
            out |= 1 << p
    return out


def strategy_q2qn(c: Coloring, n: int) -> tuple[int, Embedding]:
    """Red Q_2 or blue Q_n in a two-coloring of Q_{2n+2}.

    A red chain of n+3 sets yields A below B with |B - A| >= n+2: either two
    incomparable red sets sit between them (a red Q_2), or the red sets there
    form a chain and the sets avoiding a and containing b are all blue.
    Otherwise the red poset has height at most n+2 and the antichain lemma
    leaves a blue Q_n.
    """
    if c.k != 2:
        raise InvalidInputError("need a two-coloring")
    if n < 1 or c.N != 2 * n + 2:
        raise InvalidInputError(f"strategy needs N = 2n + 2 = {2 * n + 2}, got N={c.N}")
    chain = _longest_red_chain(c)
    if len(chain) >= n + 3:
        A, B = chain[0], chain[-1]
        between = sorted(
            (z for z in c.color_class(RED) if A & ~z == 0 and z & ~B == 0),
            key=lambda x: (x.bit_count(), x),
        )
        for i, C in enumerate(between):
            for D in between[i + 1:]:
                if C & ~D and D & ~C:
                    f = Embedding(2, c.N, (A, C, D, B))
                    _check_qn(f, "strategy_q2qn")
                    _check_mono(c, f.image, RED, "strategy_q2qn")
                    return RED, f
        a = _lowest(between[1] & ~A)
        b = _lowest(B & ~(A | a))
        free = B & ~(A | a | b)
        positions = [p for p in range(c.N) if free >> p & 1][:n]
        f = Embedding(n, c.N, tuple(A | b | _spread(S, positions) for S in range(1 << n)))
        _check_qn(f, "strategy_q2qn")
        _check_mono(c, f.image, BLUE, "strategy_q2qn")
        return BLUE, f
    f = antichain_extract_blue(c).restrict(n)
    _check_qn(f, "strategy_q2qn")
    _check_mono(c, f.image, BLUE, "strategy_q2qn")
    return BLUE, f


def halfslice_strategy(c: Coloring, n: int, m: int) -> Embedding | None:
    """Red copy {F_S} with F_S the first red member of
    F(S) = {S | X_1 | ... | X_{|S|} | X : X inside X_{|S|+1}, |X| = m/2};
    None when some F(S) is entirely blue."""
    if c.k != 2:
        raise InvalidInputError("need a two-coloring")
    if m < 2 or m % 2:
        raise InvalidInputError("m must be a positive even integer")
    if c.N != n + (n + 1) * m:
        raise InvalidInputError(f"strategy needs N = n + (n+1) m = {n + (n + 1) * m}, got N={c.N}")
    part = GroundPartition.consecutive([n] + [m] * (n + 1))
    halves = [X for X in range(1 << m) if X.bit_count() == m // 2]
    picks = []
    for S in range(1 << n):
        k = S.bit_count()
        base = S | part.union(1, k + 1)
        shift = part.offset(k + 1)
        pick = next((base | X << shift for X in halves if c.cells[base | X << shift] == RED), None)
        if pick is None:
            return None
        picks.append(pick)
    f = Embedding(n, c.N, tuple(picks))
    _check_qn(f, "halfslice")
    _check_mono(c, f.image, RED, "halfslice")
    return f


def halfslice_success_rate(n: int, m: int, trials: int, seed: int) -> dict:
    """Monte-Carlo run of :func:`halfslice_strategy` on uniform random colorings."""
    N = n + (n + 1) * m
    successes = 0
    for t in range(trials):
        if halfslice_strategy(random_coloring(N, 2, seed + t), n, m) is not None:
            successes += 1
    return {"n": n, "m": m, "N": N, "trials": trials, "successes": successes, "seed": seed}


def algebra_from_layered(c: Coloring, n: int) -> tuple[int, BooleanAlgebraWitness] | None:
    """Monochromatic Boolean algebra of dimension n in a layered coloring of Q_N.

    The layer colors form a coloring of the sizes 0..N; a monochromatic
    Hilbert cube x_0, ..., x_n there gives blocks of sizes x_0, ..., x_n
    whose unions all have sizes in the cube.
    """
    full = (1 << c.N) - 1
    if not is_layered_on(c, full):
        raise InvalidInputError("coloring is not layered on the whole ground set")
    sizes = [int(c.cells[(1 << i) - 1]) for i in range(c.N + 1)]
    found = find_mono_hilbert_cube(sizes, n, start=0)
    if found is None:
        return None
    color, cube = found
    part = GroundPartition.consecutive(list(cube.x) + [c.N - sum(cube.x)])
    witness = BooleanAlgebraWitness(part.blocks[: n + 1])
    if any(c.cells[s] != color for s in witness.sets()):
        raise ValidationFailure("lifted Boolean algebra is not monochromatic")
    return color, witness


def symmetric_chain_partition(N: int) -> list[list[int]]:
    """Partition of 2^[N] into C(N, N/2) symmetric skipless chains.

    Reading positions 1..N, a member is ")" and a non-member "(".  After
    matching brackets the unmatched positions read ")...)(...(" and each chain
    flips its unmatched "(" one at a time from the left.
    """
    if not 0 <= N <= MAX_CHAIN_N:
        raise InvalidInputError(f"symmetric chain partition limited to N <= {MAX_CHAIN_N}")
    chains = []
    for S in range(1 << N):
        stack, unmatched_close = [], False
        for p in range(N):
            if S >> p & 1:
                if stack:
                    stack.pop()
                else:
                    unmatched_close = True
            else:
                stack.append(p)
        if unmatched_close:
            continue
        chain = [S]
        for p in stack:
            chain.append(chain[-1] | 1 << p)
        chains.append(chain)
    chains.sort(key=lambda ch: (-len(ch), ch[0]))
    return chains


def antichain_ramsey_formula(n: int) -> int:
    """min{N : 2n - 1 <= C(N, floor(N/2))}."""
    N = 0
    while math.comb(N, N // 2) < 2 * n - 1:
        N += 1
    return N


def antichain_lower_coloring(n: int) -> Coloring:
    """Coloring of Q_{R-1}, R = R(A_n, A_n), by symmetric chains: n-1 red, the rest blue."""
    if n < 2:
        raise InvalidInputError("need n >= 2")
    M = antichain_ramsey_formula(n) - 1
    chains = symmetric_chain_partition(M)
    if len(chains) > 2 * n - 2:
        raise InvalidInputError(f"{len(chains)} chains exceed 2n-2 = {2 * n - 2}")
    red = [x for ch in chains[: n - 1] for x in ch]
    c = Coloring.from_red_family(M, red)
    A = Poset.antichain(n)
    if find_poset_copy(c, A, RED) is not None or find_poset_copy(c, A, BLUE) is not None:
        raise ValidationFailure("chain coloring contains a monochromatic antichain")
    return c


def multicolor_lower_coloring(k: int) -> Coloring:
    """Layered Q_{k-1} with layer i in color i; every color class is an antichain."""
    if not 1 <= k <= 25:
        raise InvalidInputError("k must lie in 1..25")
    return layered_coloring(k - 1, list(range(k)), k=k)
