"""The twelve acceptance criteria, each at its stated tolerance and time limit.

Under pytest every criterion is its own test and a PASS/FAIL line per
criterion is printed in the terminal summary.  Run as a script
(``python3 tests/test_acceptance.py``) it prints the same lines directly.
"""

import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from posetramsey.colorings import (  # noqa: E402
    BLUE,
    RED,
    Coloring,
    complement_recolor,
    is_layered_on,
    layered_coloring,
    lubell_mass,
    random_coloring,
    rng,
)
from posetramsey.constructions import (  # noqa: E402
    algebra_from_layered,
    antichain_extract_blue,
    antichain_ramsey_formula,
    blob_embedding,
    multicolor_lower_coloring,
    peel_antichains,
    strategy_q2qn,
    strategy_qnqn,
)
from posetramsey.detect import (  # noqa: E402
    count_mono_qn,
    find_boolean_algebra,
    find_poset_copy,
    iter_poset_copies,
    mono_copies_naive,
)
from posetramsey.embeddings import count_embeddings_bounds, count_embeddings_exact, enumerate_embeddings  # noqa: E402
from posetramsey.lattice import Poset, dim2, is_antichain, is_embedding, lex_product, mask_of, poset_height  # noqa: E402
from posetramsey.ramsey import arrowing, multicolor_ramsey, ramsey_number, witness_search  # noqa: E402

from oracles import all_posets, hilbert_cube_exists  # noqa: E402

RESULTS: dict[int, tuple[bool, str, float]] = {}

F1 = [mask_of(s) for s in ([2], [2, 3], [2, 4, 5], [2, 3, 4, 5, 6])]
F2 = [mask_of(s) for s in ([2], [2, 3, 4], [2, 5], [2, 3, 4, 5])]
F3 = [mask_of(s) for s in ([2], [2, 3], [2, 3, 5], [2, 3, 4, 5])]


def _mono(c, images, color):
    return all(c[x] == color for x in images)


def criterion_1():
    """exact counting equals enumeration (< 1 min)"""
    pairs = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4)]
    for n, N in pairs:
        exact = count_embeddings_exact(n, N)
        assert exact == sum(1 for _ in enumerate_embeddings(n, N, budget=None)), (n, N)
    assert count_embeddings_exact(1, 2) == 5
    assert count_embeddings_exact(2, 2) == 2
    assert count_embeddings_exact(3, 3) == 6
    brute = sum(1 for _ in iter_poset_copies(Poset.boolean_lattice(3), 4, budget=None))
    assert count_embeddings_exact(3, 4) == brute == 444
    return 60


def criterion_2():
    """sandwich bounds for n <= 4, N <= 8 (seconds)"""
    for n in range(5):
        for N in range(n, 9):
            lo, hi = count_embeddings_bounds(n, N)
            e = count_embeddings_exact(n, N)
            assert lo <= e <= hi, (n, N)
            if lo != hi:
                assert lo < e < hi, (n, N)
    return 10


def criterion_3():
    """R(Q_2,Q_2) = 4 (< 2 min)"""
    Q2 = Poset.boolean_lattice(2)
    full = arrowing(4, Q2, Q2, symmetry=False, budget=1 << 16)
    assert full.holds and full.metadata["colorings_in_scan"] == 1 << 16
    v3 = arrowing(3, Q2, Q2)
    assert not v3.holds
    c = v3.counterexample
    assert is_layered_on(c, 0b111)
    assert find_poset_copy(c, Q2, RED) is None and find_poset_copy(c, Q2, BLUE) is None
    return 120


def criterion_4():
    """R(Q_1,Q_n), R(C_n,C_n), R(A_n,A_n) exhaustively (< 5 min)"""
    for n in (1, 2, 3):
        assert ramsey_number(Poset.boolean_lattice(1), Poset.boolean_lattice(n), 5) == n + 1
    for n in (2, 3):
        assert ramsey_number(Poset.chain(n), Poset.chain(n), 5) == 2 * n - 2
    for n in (2, 3):
        assert ramsey_number(Poset.antichain(n), Poset.antichain(n), 5) == antichain_ramsey_formula(n)
    return 300


def criterion_5():
    """strategies never fail on 1000 random colorings each (< 5 min)"""
    for seed in range(1000):
        c = random_coloring(8, 2, seed)
        col, f = strategy_qnqn(c, 2)
        assert f.n == 2 and f.is_valid() and _mono(c, f.image, col)
    for seed in range(1000):
        c = random_coloring(6, 2, seed)
        col, f = strategy_q2qn(c, 2)
        assert f.n == 2 and f.is_valid() and _mono(c, f.image, col)
    return 300


def criterion_6():
    """antichain lemma on 1000 colorings with red height below N"""
    done = seed = 0
    while done < 1000:
        N = 3 + seed % 6
        gen = rng(seed)
        p = [0.1, 0.25, 0.4, 0.5][seed % 4]
        c = Coloring(N, 2, np.where(gen.random(1 << N) < p, RED, BLUE))
        seed += 1
        ell = len(peel_antichains(c.color_class(RED)))
        if ell >= N:
            continue
        f = antichain_extract_blue(c)
        assert f.n == N - ell and f.is_valid() and _mono(c, f.image, BLUE)
        done += 1
    return 300


def criterion_7():
    """blob lemma on every poset with at most 4 elements, m in {1,2}"""
    checked = 0
    for size in range(1, 5):
        for P in all_posets(size):
            for m in (1, 2):
                e = blob_embedding(P, m)
                assert is_embedding(lex_product(P, Poset.boolean_lattice(m)), e.images)
                assert e.N == dim2(P) + poset_height(P) * m
                checked += 1
    assert checked == 2 * (1 + 3 + 19 + 219)
    return 300


def criterion_8():
    """Q_6 coloring without monochromatic Q_3, >= 1 of 3 seeds (10 min budget)"""
    found = 0
    for seed in range(3):
        c = witness_search(6, 3, seed=seed, symmetric=True)
        if c is None:
            continue
        assert mono_copies_naive(c, 3) == (0, 0)
        Q3 = Poset.boolean_lattice(3)
        assert find_poset_copy(c, Q3, RED) is None and find_poset_copy(c, Q3, BLUE) is None
        assert count_mono_qn(complement_recolor(c), 3) == (0, 0)
        found += 1
    assert found >= 1
    return 600


def criterion_9():
    """Lubell identities (seconds)"""
    for N in range(13):
        assert lubell_mass(range(1 << N), N) == N + 1
    for seed in range(100):
        N = 1 + seed % 12
        c = random_coloring(N, 2 + seed % 3, seed)
        assert sum(lubell_mass(c.color_class(col), N) for col in range(c.k)) == N + 1
    return 10


def _all_three_colorings_of_q3_have_mono_q1():
    pairs = [(A, B) for A in range(8) for B in range(8) if A != B and A & ~B == 0]
    idx = np.arange(3 ** 8)
    cols = (idx[:, None] // 3 ** np.arange(8)[None, :]) % 3
    hit = np.zeros(len(idx), dtype=bool)
    for A, B in pairs:
        hit |= cols[:, A] == cols[:, B]
    return bool(hit.all())


def criterion_10():
    """multicolor lower bound k <= 8 and exact R_3(Q_1) (< 2 min)"""
    Q1 = Poset.boolean_lattice(1)
    for k in range(1, 9):
        c = multicolor_lower_coloring(k)
        for col in range(k):
            assert is_antichain(c.color_class(col))
            assert find_poset_copy(c, Q1, col) is None
    v = multicolor_ramsey(Q1, 3, 4)
    assert v.exact and v.value >= 3
    # independent check of the upper side over all 3^8 colorings of Q_3
    assert v.value == 3 and _all_three_colorings_of_q3_have_mono_q1()
    return 120


def criterion_11():
    """Boolean algebras versus copies on the worked families (instant)"""
    w = find_boolean_algebra(F2, 2)
    assert w is not None and w.X == (mask_of([2]), mask_of([3, 4]), mask_of([5]))
    assert find_boolean_algebra(F1, 2) is None
    assert find_boolean_algebra(F3, 2) is None
    Q2 = Poset.boolean_lattice(2)
    for fam, is_copy in ((F1, True), (F2, True), (F3, False)):
        found = find_poset_copy(Coloring.from_red_family(6, fam), Q2, RED)
        assert (found is not None) is is_copy
    return 5


def criterion_12():
    """layered lift on 100 random layered colorings, N <= 16 (< 2 min)"""
    gen = rng(12)
    for _ in range(100):
        N = int(gen.integers(1, 17))
        n = int(gen.integers(1, 4))
        layers = gen.integers(0, 2, size=N + 1).tolist()
        c = layered_coloring(N, layers, k=2)
        found = algebra_from_layered(c, n)
        if found is None:
            assert not hilbert_cube_exists(layers, n, 0)
            continue
        color, w = found
        sets = w.sets()
        assert len(set(sets)) == 1 << n
        assert all(c[s] == color for s in sets)
    return 120


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_criterion(i):
    fn = CRITERIA[i]
    t0 = time.perf_counter()
    try:
        limit = fn()
        elapsed = time.perf_counter() - t0
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    except Exception as exc:
        RESULTS[i] = (False, f"{fn.__doc__}: {type(exc).__name__} {exc}", time.perf_counter() - t0)
        raise
    RESULTS[i] = (True, fn.__doc__, elapsed)


def summary_lines():
    out = []
    for i in sorted(RESULTS):
        ok, text, secs = RESULTS[i]
        out.append(f"{'PASS' if ok else 'FAIL'} criterion {i:2d} ({secs:6.1f}s) {text}")
    return out


@pytest.mark.parametrize("i", range(1, 13))
def test_criterion(i):
    run_criterion(i)


if __name__ == "__main__":
    failed = 0
    for i in CRITERIA:
        try:
            run_criterion(i)
        except Exception:
            failed += 1
        print(summary_lines()[-1] if RESULTS else "", flush=True)
    sys.exit(1 if failed else 0)
