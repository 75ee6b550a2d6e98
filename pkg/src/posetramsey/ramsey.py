"""Exhaustive poset Ramsey verdicts and annealing search for witness colorings."""

from __future__ import annotations

import itertools
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .colorings import BLUE, RED, Coloring, rng
from .detect import count_mono_qn, find_poset_copy, poset_copy_families
from .embeddings import copy_table
from .errors import InvalidInputError, NotApplicableError, ResourceLimitError, UndecidedError, ValidationFailure
from .lattice import Poset

log = logging.getLogger(__name__)

DEFAULT_SCAN_BUDGET = 1 << 24
CHUNK = 1 << 16
DEFAULT_ANNEAL_BUDGET = 5 * 10**6


@dataclass
class RamseyVerdict:
    N: int
    holds: bool
    counterexample: Coloring | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.holds and self.counterexample is None:
            raise InvalidInputError("a failing verdict needs a counterexample")

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "holds": self.holds,
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
            "metadata": self.metadata,
        }


def isomorphic(P: Poset, Q: Poset) -> bool:
    if P.size != Q.size:
        return False
    if P == Q:
        return True
    if P.size > 8:
        return False
    rows = range(P.size)
    for perm in itertools.permutations(rows):
        if all(P.leq[i][j] == Q.leq[perm[i]][perm[j]] for i in rows for j in rows):
            return True
    return False


def _minimal_masks(masks: list[int]) -> list[int]:
    """Drop copies whose cell set contains another copy; containment is monotone."""
    masks = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    keep = []
    for m in masks:
        if not any(k & ~m == 0 for k in keep):
            keep.append(m)
    return keep


def _scan_range(red_masks, blue_masks, n_cells, start, stop, step, canon_perms):
    """First coloring index in [start, stop) (values ``i * step``) with neither a
    red P nor a blue P2, or -1."""
    full = np.uint64((1 << n_cells) - 1) if n_cells < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)
    red_masks = np.asarray(red_masks, dtype=np.uint64)
    blue_masks = np.asarray(blue_masks, dtype=np.uint64)
    for lo in range(start, stop, CHUNK):
        hi = min(stop, lo + CHUNK)
        x = np.arange(lo, hi, dtype=np.uint64) * np.uint64(step)
        if canon_perms is not None:
            keep = _is_canonical(x, canon_perms)
            x = x[keep]
            if not len(x):
                continue
        bad = _first_bad(x, red_masks, blue_masks, full)
        if bad >= 0:
            return bad
    return -1


def _first_bad(x, red_masks, blue_masks, full) -> int:
    """First coloring in the uint64 array x with no red and no blue copy, or -1."""
    red = full & ~x
    ok = np.zeros(len(x), dtype=bool)
    for m in red_masks:
        ok |= (red & m) == m
    for m in blue_masks:
        ok |= (x & m) == m
    bad = np.flatnonzero(~ok)
    return int(x[bad[0]]) if len(bad) else -1


def _layered_counterexample(N, red_masks, blue_masks) -> int:
    """Cheap first pass: the 2^(N+1) layered colorings, in order of their layer bits."""
    n_cells = 1 << N
    full = np.uint64((1 << n_cells) - 1) if n_cells < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)
    sizes = [S.bit_count() for S in range(n_cells)]
    values = [sum(1 << S for S in range(n_cells) if layers >> sizes[S] & 1) for layers in range(1 << (N + 1))]
    return _first_bad(np.array(values, dtype=np.uint64), np.asarray(red_masks, dtype=np.uint64),
                      np.asarray(blue_masks, dtype=np.uint64), full)


def _cell_permutations(N: int) -> np.ndarray:
    """For every permutation of [N], the induced permutation of the 2^N cells."""
    out = []
    for perm in itertools.permutations(range(N)):
        row = []
        for S in range(1 << N):
            T = 0
            for i in range(N):
                if S >> i & 1:
                    T |= 1 << perm[i]
            row.append(T)
        out.append(row)
    return np.array(out, dtype=np.uint64)


def _is_canonical(x: np.ndarray, perms: np.ndarray) -> np.ndarray:
    """True where x is the smallest integer in its orbit under ground permutations."""
    keep = np.ones(len(x), dtype=bool)
    n_cells = perms.shape[1]
    one = np.uint64(1)
    for row in perms[1:]:
        y = np.zeros_like(x)
        for S in range(n_cells):
            y |= ((x >> np.uint64(S)) & one) << row[S]
        keep &= x <= y
    return keep


def _checkpoint_load(path, key):
    if path and os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        if data.get("key") == key:
            return data
    return None


def _checkpoint_save(path, key, nxt, found):
    if not path:
        return
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump({"key": key, "next": nxt, "found": found}, fh, sort_keys=True)
    os.replace(tmp, path)


def arrowing(
    N: int,
    P: Poset,
    P2: Poset,
    budget: int = DEFAULT_SCAN_BUDGET,
    workers: int = 1,
    symmetry: bool = True,
    permutation_reduction: bool = False,
    checkpoint: str | os.PathLike | None = None,
) -> RamseyVerdict:
    """Does every red/blue coloring of Q_N contain a red P or a blue P2?

    Layered colorings are tried first as cheap counterexamples.  Then all
    colorings are scanned as integers (bit S = color of S) in increasing
    order.  When P and P2 are isomorphic, swapping colors is a symmetry and
    only colorings with the empty set red are scanned.
    """
    if N < 0 or N > 6:
        raise InvalidInputError("exhaustive scans need 0 <= N <= 6")
    n_cells = 1 << N
    swap = symmetry and isomorphic(P, P2)
    step = 2 if swap else 1
    total = (1 << n_cells) // step
    red_masks = _minimal_masks(poset_copy_families(P, N))
    blue_masks = _minimal_masks(poset_copy_families(P2, N))
    perms = _cell_permutations(N) if permutation_reduction and N >= 2 else None
    key = json.dumps([N, P.to_json(), P2.to_json(), swap, perms is not None], sort_keys=True)

    state = _checkpoint_load(checkpoint, key)
    start = state["next"] if state else 0
    found = state["found"] if state else -1
    source = "checkpoint"
    if found < 0 and start < total:
        found = _layered_counterexample(N, red_masks, blue_masks)
        source = "layered"
    if found < 0 and start < total:
        if total > budget:
            raise ResourceLimitError(f"{total} colorings of Q_{N} exceed scan budget {budget}")
        source = "scan"
        if workers > 1:
            bounds = np.linspace(start, total, workers + 1).astype(int)
            with ProcessPoolExecutor(workers) as ex:
                futs = [
                    ex.submit(_scan_range, red_masks, blue_masks, n_cells, int(a), int(b), step, perms)
                    for a, b in zip(bounds[:-1], bounds[1:])
                ]
                hits = [f.result() for f in futs]
            found = next((h for h in hits if h >= 0), -1)
            _checkpoint_save(checkpoint, key, total, found)
        else:
            span = max(CHUNK, total // 64)
            for lo in range(start, total, span):
                hi = min(total, lo + span)
                found = _scan_range(red_masks, blue_masks, n_cells, lo, hi, step, perms)
                _checkpoint_save(checkpoint, key, hi, found)
                if found >= 0:
                    break
    meta = {
        "colorings_in_scan": total,
        "color_swap_symmetry": swap,
        "permutation_reduction": perms is not None,
        "red_copy_masks": len(red_masks),
        "blue_copy_masks": len(blue_masks),
    }
    if found < 0:
        return RamseyVerdict(N, True, None, meta)
    meta["counterexample_source"] = source
    c = Coloring.from_int(N, found)
    # independent re-check by backtracking, no symmetry assumptions
    if find_poset_copy(c, P, RED) is not None or find_poset_copy(c, P2, BLUE) is not None:
        raise ValidationFailure("scan reported a counterexample that contains a required copy")
    return RamseyVerdict(N, False, c, meta)


def ramsey_scan(P: Poset, P2: Poset, N_max: int, **kwargs) -> list[RamseyVerdict]:
    """Verdicts for N = 0, 1, ... up to the first N that arrows (inclusive)."""
    verdicts = []
    for N in range(N_max + 1):
        v = arrowing(N, P, P2, **kwargs)
        verdicts.append(v)
        if v.holds:
            return verdicts
    raise UndecidedError(f"no arrowing found for N <= {N_max}", partial=verdicts)


def ramsey_number(P: Poset, P2: Poset, N_max: int, **kwargs) -> int:
    """Least N with arrowing; every smaller N carries a validated counterexample."""
    return ramsey_scan(P, P2, N_max, **kwargs)[-1].N


# ---------------------------------------------------------------------------
# Multicolor


@dataclass(frozen=True)
class MulticolorVerdict:
    value: int
    exact: bool
    counterexample: Coloring | None = None

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "exact": self.exact,
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
        }


def _has_mono_copy(c: Coloring, P: Poset) -> bool:
    return any(find_poset_copy(c, P, col) is not None for col in range(c.k))


def multicolor_ramsey(
    P: Poset, k: int, N_max: int, lower_bound_only: bool = False, budget: int = DEFAULT_SCAN_BUDGET
) -> MulticolorVerdict:
    """Least N such that every k-coloring of Q_N has a monochromatic P.

    With ``lower_bound_only`` the layered k-coloring of Q_{k-1} certifies the
    bound R_k(P) >= k (P must not be an antichain) and ``exact`` is False.
    """
    if k < 1:
        raise InvalidInputError("k must be positive")
    if lower_bound_only:
        if all(not P.lt(i, j) for i in range(P.size) for j in range(P.size)):
            raise NotApplicableError("layered lower bound needs P with a comparable pair")
        from .constructions import multicolor_lower_coloring

        c = multicolor_lower_coloring(k)
        if _has_mono_copy(c, P):
            raise ValidationFailure("layered coloring contains a monochromatic copy")
        return MulticolorVerdict(k, False, c)

    last_bad = None
    for N in range(N_max + 1):
        n_cells = 1 << N
        total = k ** (n_cells - 1)  # the empty set takes color 0
        if total > budget:
            raise ResourceLimitError(f"{total} colorings of Q_{N} in {k} colors exceed budget {budget}")
        copies = [
            np.array([S for S in range(n_cells) if m >> S & 1], dtype=np.int64)
            for m in _minimal_masks(poset_copy_families(P, N))
        ]
        bad = _multicolor_scan(copies, k, n_cells, total)
        if bad is None:
            return MulticolorVerdict(N, True, last_bad)
        if _has_mono_copy(bad, P):
            raise ValidationFailure("multicolor scan reported a bad coloring that has a copy")
        last_bad = bad
    raise UndecidedError(f"no N <= {N_max} forces a monochromatic copy in {k} colors")


def _multicolor_scan(copies, k, n_cells, total) -> Coloring | None:
    N = n_cells.bit_length() - 1
    powers = k ** np.arange(n_cells - 1, dtype=np.int64)
    for lo in range(0, total, CHUNK):
        idx = np.arange(lo, min(total, lo + CHUNK), dtype=np.int64)
        cols = np.zeros((len(idx), n_cells), dtype=np.int64)
        cols[:, 1:] = (idx[:, None] // powers[None, :]) % k
        ok = np.zeros(len(idx), dtype=bool)
        for cells in copies:
            sub = cols[:, cells]
            ok |= (sub == sub[:, :1]).all(axis=1)
        bad = np.flatnonzero(~ok)
        if len(bad):
            return Coloring(N, k, cols[bad[0]])
    return None


# ---------------------------------------------------------------------------
# Witness search


@dataclass
class AnnealConfig:
    """Simulated-annealing parameters; every field can be set from a JSON file.

    Temperature falls geometrically from ``t_start`` to ``t_end`` over
    ``sweep_steps`` steps and is then reset.  After ``stagnation_steps``
    steps without a new best objective the coloring is re-randomised.
    """

    t_start: float = 2.0
    t_end: float = 0.05
    sweep_steps: int = 20000
    stagnation_steps: int = 60000
    time_limit: float | None = 600.0

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> AnnealConfig:
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidInputError(f"unknown annealing parameters: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> dict:
        return asdict(self)


class _Annealer:
    """Incremental objective over the copy table: copies that are all red or all blue."""

    def __init__(self, N: int, n: int, symmetric: bool):
        table = copy_table(n, N)
        self.N, self.n, self.full = N, n, 1 << n
        self.symmetric = symmetric
        n_cells = 1 << N
        top = n_cells - 1
        if symmetric:
            # one variable per complementary pair; the representative is the smaller mask
            self.reps = [S for S in range(n_cells) if S < top ^ S]
        else:
            self.reps = list(range(n_cells))
        images = table.images
        n_copies = len(images)
        by_cell = [[] for _ in range(n_cells)]
        for col in range(images.shape[1]):
            for row, S in enumerate(images[:, col].tolist()):
                by_cell[S].append(row)
        self.aff, self.coef = [], []
        for S in self.reps:
            counts = np.zeros(n_copies, dtype=np.int8)
            np.subtract.at(counts, by_cell[S], 1)
            if symmetric:
                np.add.at(counts, by_cell[top ^ S], 1)
            idx = np.flatnonzero(counts)
            self.aff.append(idx)
            self.coef.append(counts[idx].astype(np.int16))
        self.images = images
        self.n_cells = n_cells

    def pin(self, fixed: dict[int, int]) -> dict[int, bool]:
        """Translate fixed cell colors into fixed variables (variable -> is red)."""
        top = self.n_cells - 1
        slot = {S: v for v, S in enumerate(self.reps)}
        out: dict[int, bool] = {}
        for S, col in fixed.items():
            if not 0 <= S <= top or col not in (RED, BLUE):
                raise InvalidInputError(f"bad fixed cell {S} -> {col}")
            if S in slot:
                v, red = slot[S], col == RED
            else:
                # symmetric mode: S is the complement of a representative
                v, red = slot[top ^ S], col == BLUE
            if out.setdefault(v, red) != red:
                raise InvalidInputError(f"fixed cells conflict at {S} (complement symmetry)")
        return out

    def cells_from(self, red_rep: np.ndarray) -> np.ndarray:
        """Cell colors from representative colors (True = representative is red)."""
        cells = np.empty(self.n_cells, dtype=np.uint8)
        top = self.n_cells - 1
        for v, S in enumerate(self.reps):
            cells[S] = RED if red_rep[v] else BLUE
            if self.symmetric:
                cells[top ^ S] = BLUE if red_rep[v] else RED
        return cells

    def red_counts(self, cells: np.ndarray) -> np.ndarray:
        return (cells[self.images] == RED).sum(axis=1).astype(np.int16)

    def objective(self, rc: np.ndarray) -> int:
        return int(np.count_nonzero((rc == 0) | (rc == self.full)))

    def delta(self, v: int, is_red: bool, rc: np.ndarray) -> tuple[int, np.ndarray, np.ndarray]:
        idx = self.aff[v]
        d = self.coef[v] if is_red else -self.coef[v]
        before = rc[idx]
        after = before + d
        full = self.full
        change = int(np.count_nonzero((after == 0) | (after == full))) - int(
            np.count_nonzero((before == 0) | (before == full))
        )
        return change, idx, after


def witness_search(
    N: int,
    n: int,
    budget: int = DEFAULT_ANNEAL_BUDGET,
    seed: int = 0,
    symmetric: bool = False,
    config: AnnealConfig | None = None,
    fixed: dict[int, int] | None = None,
) -> Coloring | None:
    """Simulated annealing for a two-coloring of Q_N without monochromatic Q_n.

    ``budget`` counts proposed single-variable flips.  With ``symmetric`` the
    search stays inside the colorings fixed by complement recoloring.
    ``fixed`` pins cells (mask -> color) for the whole run.  The returned
    coloring is re-validated; None means the budget ran out.
    """
    if 1 << N > 64:
        raise InvalidInputError("witness search needs 2^N <= 64 cells")
    if not 1 <= n <= N:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    cfg = config or AnnealConfig()
    ann = _Annealer(N, n, symmetric)
    gen = rng(seed)
    n_vars = len(ann.reps)
    pinned = ann.pin(fixed or {})
    free = np.array([v for v in range(n_vars) if v not in pinned], dtype=np.int64)
    ratio = (cfg.t_end / cfg.t_start) ** (1.0 / max(1, cfg.sweep_steps))
    deadline = None if cfg.time_limit is None else time.monotonic() + cfg.time_limit

    def fresh():
        state = gen.integers(0, 2, size=n_vars).astype(bool)
        for v, red in pinned.items():
            state[v] = red
        rc = ann.red_counts(ann.cells_from(state))
        return state, rc, ann.objective(rc)

    state, rc, obj = fresh()
    best, since_best, temp, sweep = obj, 0, cfg.t_start, 0
    batch = 4096
    step = 0
    while step < budget and len(free):
        if obj == 0:
            break
        if deadline is not None and time.monotonic() > deadline:
            break
        picks = free[gen.integers(0, len(free), size=batch)]
        coins = gen.random(batch)
        for v, u in zip(picks.tolist(), coins.tolist()):
            change, idx, after = ann.delta(v, bool(state[v]), rc)
            if change <= 0 or u < math.exp(-change / temp):
                rc[idx] = after
                state[v] = not state[v]
                obj += change
            step += 1
            since_best += 1
            sweep += 1
            temp *= ratio
            if sweep >= cfg.sweep_steps:
                temp, sweep = cfg.t_start, 0
            if obj < best:
                best, since_best = obj, 0
            if obj == 0 or step >= budget:
                break
            if since_best >= cfg.stagnation_steps:
                log.debug("restart at step %d (best %d)", step, best)
                state, rc, obj = fresh()
                best, since_best, temp, sweep = obj, 0, cfg.t_start, 0
    if obj != 0:
        return None
    c = Coloring(N, 2, ann.cells_from(state))
    if count_mono_qn(c, n) != (0, 0):
        raise ValidationFailure("annealing reported a witness with monochromatic copies")
    return c
