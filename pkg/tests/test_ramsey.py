import json

import pytest

from posetramsey.colorings import BLUE, RED, Coloring, complement_recolor, is_layered_on, layered_coloring
from posetramsey.constructions import antichain_ramsey_formula
from posetramsey.detect import count_mono_qn, find_mono_qn, find_poset_copy, mono_copies_naive
from posetramsey.errors import InvalidInputError, NotApplicableError, ResourceLimitError, UndecidedError
from posetramsey.lattice import Poset
from posetramsey.ramsey import (
    AnnealConfig,
    _checkpoint_save,
    arrowing,
    isomorphic,
    multicolor_ramsey,
    ramsey_number,
    ramsey_scan,
    witness_search,
)

from oracles import all_posets

Q = Poset.boolean_lattice
C = Poset.chain
A = Poset.antichain


def test_isomorphic():
    reversed_chain = Poset.from_pairs(2, [(1, 0)])
    assert isomorphic(reversed_chain, C(2))
    assert not isomorphic(reversed_chain, A(2))
    assert isomorphic(Q(1), C(2))


def test_q2_q2_verdicts():
    v4 = arrowing(4, Q(2), Q(2))
    assert v4.holds and v4.counterexample is None
    v3 = arrowing(3, Q(2), Q(2))
    assert not v3.holds
    c = v3.counterexample
    assert is_layered_on(c, 0b111)
    assert find_poset_copy(c, Q(2), RED) is None and find_poset_copy(c, Q(2), BLUE) is None
    assert v3.metadata["counterexample_source"] == "layered"


def test_chain_verdicts():
    assert not arrowing(3, C(3), C(3)).holds
    assert arrowing(4, C(3), C(3)).holds


@pytest.mark.parametrize("n", [1, 2, 3])
def test_r_q1_qn(n):
    assert ramsey_number(Q(1), Q(n), 5) == n + 1


@pytest.mark.parametrize("n", [2, 3])
def test_r_chains(n):
    assert ramsey_number(C(n), C(n), 5) == 2 * n - 2


@pytest.mark.parametrize("n", [2, 3])
def test_r_antichains(n):
    assert ramsey_number(A(n), A(n), 5) == antichain_ramsey_formula(n)


def test_ramsey_number_examples():
    assert ramsey_number(Q(1), Q(1), 3) == 2
    assert ramsey_number(Q(1), Q(2), 3) == 3
    assert ramsey_number(A(2), A(2), 3) == 3


def test_every_smaller_n_has_a_counterexample():
    verdicts = ramsey_scan(Q(2), Q(2), 5)
    assert [v.holds for v in verdicts] == [False] * 4 + [True]
    for v in verdicts[:-1]:
        c = v.counterexample
        assert find_poset_copy(c, Q(2), RED) is None and find_poset_copy(c, Q(2), BLUE) is None


def test_undecided_and_budget():
    with pytest.raises(UndecidedError) as info:
        ramsey_scan(Q(2), Q(2), 2)
    assert len(info.value.partial) == 3
    with pytest.raises(ResourceLimitError):
        arrowing(4, Q(2), Q(2), budget=100)
    with pytest.raises(InvalidInputError):
        arrowing(7, Q(1), Q(1))


def test_reductions_agree_with_full_scan():
    posets = [P for m in range(1, 4) for P in all_posets(m)][::4]
    for N in range(4):
        for P in posets:
            for P2 in posets[::3]:
                plain = arrowing(N, P, P2, symmetry=False).holds
                assert arrowing(N, P, P2).holds == plain
                assert arrowing(N, P, P2, permutation_reduction=True).holds == plain


def test_permutation_reduction_at_four():
    v = arrowing(4, Q(2), Q(2), permutation_reduction=True)
    assert v.holds and v.metadata["permutation_reduction"]


def test_checkpoint_resume(tmp_path):
    path = tmp_path / "scan.json"
    v = arrowing(4, Q(2), Q(2), checkpoint=path)
    assert v.holds
    state = json.loads(path.read_text())
    assert state["next"] == 1 << 15 and state["found"] == -1
    # a finished checkpoint is trusted as is
    again = arrowing(4, Q(2), Q(2), checkpoint=path)
    assert again.to_json() == v.to_json()
    # resume from the middle of the range
    _checkpoint_save(path, state["key"], 1 << 14, -1)
    assert arrowing(4, Q(2), Q(2), checkpoint=path).holds
    # a checkpoint for another problem is ignored
    other = tmp_path / "other.json"
    _checkpoint_save(other, "different", 1 << 15, -1)
    assert not arrowing(3, Q(2), Q(2), checkpoint=other).holds


def test_checkpoint_with_found_counterexample(tmp_path):
    path = tmp_path / "scan.json"
    v = arrowing(3, C(3), C(3), symmetry=True)
    bad = v.counterexample.to_int()
    key = json.dumps([3, C(3).to_json(), C(3).to_json(), True, False], sort_keys=True)
    _checkpoint_save(path, key, 10, bad)
    w = arrowing(3, C(3), C(3), checkpoint=path)
    assert not w.holds and w.counterexample == v.counterexample
    assert w.metadata["counterexample_source"] == "checkpoint"


def test_parallel_workers_agree():
    a = arrowing(4, Q(2), Q(2), workers=2)
    assert a.holds
    b = arrowing(3, C(3), C(3), workers=2)
    assert not b.holds


def test_multicolor():
    assert multicolor_ramsey(Q(1), 2, 4).value == 2
    v = multicolor_ramsey(Q(1), 3, 4)
    assert v.exact and v.value == 3
    assert v.counterexample is not None and v.counterexample.N == 2
    lower = multicolor_ramsey(Q(1), 3, 4, lower_bound_only=True)
    assert not lower.exact and lower.value == 3
    for k in range(1, 9):
        assert multicolor_ramsey(C(2), k, 0, lower_bound_only=True).value == k
    with pytest.raises(NotApplicableError):
        multicolor_ramsey(A(2), 3, 0, lower_bound_only=True)


def test_witness_search_small():
    c = witness_search(3, 2, seed=0)
    assert c is not None and count_mono_qn(c, 2) == (0, 0)
    assert witness_search(4, 2, budget=20000, seed=0) is None


@pytest.mark.parametrize("symmetric", [False, True])
def test_witness_search_q6(symmetric):
    c = witness_search(6, 3, seed=2, symmetric=symmetric)
    assert c is not None
    assert mono_copies_naive(c, 3) == (0, 0)
    assert find_mono_qn(c, 3, RED) is None and find_mono_qn(c, 3, BLUE) is None
    assert count_mono_qn(complement_recolor(c), 3) == (0, 0)
    if symmetric:
        assert complement_recolor(c) == c


def test_witness_search_respects_stated_trace():
    from posetramsey.colorings import iter_submasks
    from posetramsey.lattice import mask_of

    Y = mask_of([1, 2, 3, 5])
    red = {mask_of(s) for s in ([1, 2, 3, 5], [1, 2, 3], [1, 3, 5], [1, 2], [1], [2], [3], [5], [])}
    fixed = {S: RED if S in red else BLUE for S in iter_submasks(Y)}
    c = witness_search(6, 3, seed=2, symmetric=True, fixed=fixed)
    assert c is not None and count_mono_qn(c, 3) == (0, 0)
    assert {S for S in iter_submasks(Y) if c[S] == RED} == red
    assert complement_recolor(c) == c


def test_witness_search_fixed_conflict():
    with pytest.raises(InvalidInputError):
        witness_search(3, 2, symmetric=True, fixed={0: RED, 7: RED})


def test_anneal_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"t_start": 1.5, "sweep_steps": 500}))
    cfg = AnnealConfig.from_file(path)
    assert cfg.t_start == 1.5 and cfg.sweep_steps == 500 and cfg.t_end == AnnealConfig().t_end
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(InvalidInputError):
        AnnealConfig.from_file(path)


def test_witness_search_is_seed_deterministic():
    a = witness_search(6, 3, seed=5, symmetric=True)
    b = witness_search(6, 3, seed=5, symmetric=True)
    assert a == b


def test_verdict_json_round_trips():
    v = arrowing(1, Q(1), Q(1))
    data = json.loads(json.dumps(v.to_json()))
    assert data["holds"] is False
    assert Coloring.from_json(data["counterexample"]) == v.counterexample


def test_layered_witnesses_fail_at_q6():
    # no layered coloring of Q_6 avoids a monochromatic Q_3
    for layers in range(1 << 7):
        c = layered_coloring(6, [layers >> i & 1 for i in range(7)], k=2)
        assert sum(count_mono_qn(c, 3)) > 0
