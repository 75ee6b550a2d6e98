import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from posetramsey.errors import InvalidInputError, ResourceLimitError
from posetramsey.lattice import (
    Poset,
    SubsetMask,
    UpSet,
    count_antichains,
    count_antichains_two_levels,
    dim2,
    enumerate_upsets,
    family_bits,
    format_mask,
    is_antichain,
    is_embedding,
    lex_product,
    mask_of,
    poset_height,
    upset_close,
)

from oracles import all_posets, upper_closed_families

DEDEKIND = [2, 3, 6, 20, 168, 7581, 7828354, 2414682040998]


def test_subset_mask_round_trip():
    s = SubsetMask.from_elements([1, 3], 4)
    assert s.bits == 0b101
    assert s.elements() == [1, 3]
    assert s.issubset(SubsetMask.from_elements([1, 2, 3], 4))
    assert format_mask(0) == "{}"
    assert format_mask(mask_of([2, 5])) == "{2,5}"


def test_mixed_ground_sizes_rejected():
    with pytest.raises(InvalidInputError):
        family_bits([SubsetMask(1, 2), SubsetMask(1, 3)])


@pytest.mark.parametrize(
    "family, expected",
    [([0], True), ([mask_of([1]), mask_of([2])], True), ([mask_of([1]), mask_of([1, 2])], False)],
)
def test_is_antichain_examples(family, expected):
    assert is_antichain(family) is expected


def test_poset_axioms_named():
    with pytest.raises(InvalidInputError, match="antisymmetric"):
        Poset.from_pairs(2, [(0, 1), (1, 0)])
    with pytest.raises(InvalidInputError, match="transitive"):
        Poset.from_pairs(3, [(0, 1), (1, 2)])
    with pytest.raises(InvalidInputError, match="reflexive"):
        Poset(1, ((False,),))


def test_poset_json_round_trip():
    P = Poset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    text = json.dumps(P.to_json())
    assert Poset.from_json(text) == P
    with pytest.raises(InvalidInputError):
        Poset.from_json('{"size": 2}')


def test_heights():
    assert poset_height(Poset.antichain(3)) == 1
    assert poset_height(Poset.chain(4)) == 4
    assert poset_height(Poset.boolean_lattice(2)) == 3


def test_lex_product_examples():
    Q2 = Poset.boolean_lattice(2)
    assert lex_product(Poset.chain(1), Q2) == Q2
    assert lex_product(Poset.chain(2), Poset.chain(2)) == Poset.chain(4)
    assert lex_product(Poset.antichain(2), Poset.antichain(2)) == Poset.antichain(4)


def test_lex_product_is_always_a_poset():
    small = [P for m in range(1, 4) for P in all_posets(m)]
    for P in small[::3]:
        for Q in small[::5]:
            R = lex_product(P, Q)  # constructor checks the axioms
            assert R.size == P.size * Q.size


def test_dim2_examples():
    assert dim2(Poset.chain(3)) == 2
    assert dim2(Poset.boolean_lattice(2)) == 2
    assert dim2(Poset.antichain(3)) == 3


def test_dim2_lower_bounds_on_small_posets():
    for m in range(1, 5):
        for P in all_posets(m):
            d = dim2(P)
            assert d >= math.ceil(math.log2(P.size))
            assert d >= poset_height(P) - 1


F1 = [mask_of(s) for s in ([2], [2, 3], [2, 4, 5], [2, 3, 4, 5, 6])]
F3 = [mask_of(s) for s in ([2], [2, 3], [2, 3, 5], [2, 3, 4, 5])]


def test_is_embedding_examples():
    Q2 = Poset.boolean_lattice(2)
    assert is_embedding(Q2, F1)
    assert is_embedding(Poset.chain(2), [0, 1])
    import itertools

    assert not any(is_embedding(Q2, list(p)) for p in itertools.permutations(F3))


@pytest.mark.parametrize("n", range(5))
def test_identity_is_embedding(n):
    assert is_embedding(Poset.boolean_lattice(n), list(range(1 << n)))


def test_upset_close_examples():
    assert upset_close([mask_of([1]), mask_of([1, 2])], 2).min_elements == (mask_of([1]),)
    assert len(upset_close([], 3)) == 0
    u = upset_close([mask_of([1, 2]), mask_of([2, 3])], 3)
    assert u.min_elements == (mask_of([1, 2]), mask_of([2, 3]))
    brute = [S for S in range(8) if S & 0b011 == 0b011 or S & 0b110 == 0b110]
    assert len(u) == len(brute) == 3


@given(st.integers(0, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, (1 << n) - 1)))))
def test_upset_close_is_upper_closed(case):
    n, gens = case
    u = upset_close(gens, n)
    fam = set(u.members())
    assert set(gens) <= fam
    for S in fam:
        for i in range(n):
            assert S | 1 << i in fam
    assert is_antichain(u.min_elements)
    # nothing outside the closure of the generators
    assert all(any(g & ~S == 0 for g in gens) for S in fam)


@pytest.mark.parametrize("n", range(4))
def test_enumerate_upsets_matches_brute_force(n):
    ups = enumerate_upsets(n)
    masks = [u.family_mask for u in ups]
    assert len(set(masks)) == len(masks)
    assert sorted(masks) == sorted(upper_closed_families(n))
    assert ups == sorted(ups)


def test_enumerate_upsets_limits():
    with pytest.raises(ResourceLimitError):
        enumerate_upsets(7)


@pytest.mark.parametrize("n", range(6))
def test_count_matches_enumeration(n):
    assert count_antichains(n) == len(enumerate_upsets(n)) == DEDEKIND[n]


def test_count_antichains_known_values():
    assert [count_antichains(n) for n in range(8)] == DEDEKIND
    # the two-level formula over smaller bases gives independent values
    assert count_antichains_two_levels(3) == count_antichains(5)
    assert count_antichains_two_levels(4) == count_antichains(6)
    with pytest.raises(ResourceLimitError):
        count_antichains(8)


def test_upset_validation():
    with pytest.raises(InvalidInputError):
        UpSet(2, (1, 3))
    assert mask_of([1]) in UpSet.principal(1, 2)
    assert mask_of([2]) not in UpSet.principal(1, 2)
