import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from irreducibles.errors import HasPrincipalSubtype
from irreducibles.groups import canonical_ordering, groups_of_order, make_group
from irreducibles.typelab import (
    class_sum,
    davenport,
    davenport_of_ordering,
    enumerate_irreducible_types,
    extend_to_irreducible,
    factorial_weight,
    has_nonzero_principal_subtype,
    is_irreducible_type,
    is_principal,
    is_subtype,
    maximal_types,
    sequence_type,
    types_maximal_wrt,
)

Z3 = canonical_ordering(make_group([3]))
V4 = canonical_ordering(make_group([2, 2]))
SMALL = [G for n in range(1, 9) for G in groups_of_order(n)]
UP_TO_12 = [G for n in range(1, 13) for G in groups_of_order(n)]


def test_class_sum_and_principal_examples():
    assert class_sum(Z3, (3, 0, 0)) == (0,)
    assert class_sum(Z3, (1, 1, 0)) == (0,)
    assert class_sum(Z3, (1, 0, 0)) == (1,)
    assert is_principal(Z3, (0, 0, 1))
    assert is_principal(Z3, (3, 0, 0))
    assert not is_principal(Z3, (2, 0, 0))


def test_subtype_examples():
    assert is_subtype((1, 0, 0), (3, 0, 0))
    assert is_subtype((0, 0, 0), (2, 5, 1))
    assert not is_subtype((1, 1, 0), (3, 0, 0))


def test_irreducible_examples():
    assert is_irreducible_type(Z3, (1, 1, 0))
    assert is_irreducible_type(Z3, (3, 0, 0))
    assert not is_irreducible_type(Z3, (1, 1, 1))
    assert not is_irreducible_type(Z3, (0, 0, 0))


def test_enumeration_examples():
    trivial = canonical_ordering(make_group([]))
    assert set(enumerate_irreducible_types(trivial)) == {(1,)}
    assert set(enumerate_irreducible_types(Z3)) == {(0, 0, 1), (1, 1, 0), (3, 0, 0), (0, 3, 0)}
    assert set(enumerate_irreducible_types(V4)) == {
        (0, 0, 0, 1),
        (2, 0, 0, 0),
        (0, 2, 0, 0),
        (0, 0, 2, 0),
        (1, 1, 1, 0),
    }
    assert set(maximal_types(Z3)) == {(3, 0, 0), (0, 3, 0)}
    assert set(maximal_types(trivial)) == {(1,)}
    assert set(maximal_types(V4)) == {(1, 1, 1, 0)}


def test_davenport_examples():
    r = davenport(make_group([]))
    assert r.D == 1 and r.witness == ((),)
    assert davenport(make_group([3])).D == 3
    assert davenport(make_group([2, 2])).D == 3


@pytest.mark.parametrize("G", SMALL, ids=str)
def test_enumeration_matches_subtype_lattice_oracle(G):
    """Every type of length <= |G| checked directly against the definition."""
    o = canonical_ordering(G)
    h = o.h
    found = set(enumerate_irreducible_types(o))
    D = davenport(G).D
    oracle = set()
    for n in range(1, D + 2):
        for combo in itertools.combinations_with_replacement(range(h), n):
            t = [0] * h
            for i in combo:
                t[i] += 1
            if is_irreducible_type(o, t):
                oracle.add(tuple(t))
    assert found == oracle


@pytest.mark.parametrize("G", UP_TO_12, ids=str)
def test_lengths_bounded_by_D_and_attained(G):
    o = canonical_ordering(G)
    D = davenport(G).D
    lengths = enumerate_irreducible_types(o).lengths()
    assert max(lengths) == D == davenport_of_ordering(o)


@pytest.mark.parametrize("G", UP_TO_12, ids=str)
def test_witness_is_irreducible(G):
    o = canonical_ordering(G)
    w = davenport(G).witness
    assert is_irreducible_type(o, sequence_type(o, w))


@pytest.mark.parametrize("n", range(1, 11))
def test_davenport_cyclic(n):
    assert davenport(make_group([] if n == 1 else [n])).D == n


@pytest.mark.parametrize(
    "d1,d2", [(a, b) for a in range(2, 7) for b in range(a, 19) if b % a == 0 and a * b <= 36]
)
def test_davenport_rank_two(d1, d2):
    assert davenport(make_group([d1, d2])).D == d1 + d2 - 1


@pytest.mark.parametrize("inv", [[2, 2, 2], [2, 2, 4], [2, 2, 2, 2], [3, 3, 3], [2, 4, 4]])
def test_davenport_p_groups(inv):
    # for p-groups D = 1 + sum(d_i - 1)
    assert davenport(make_group(inv)).D == 1 + sum(d - 1 for d in inv)


def test_extend_examples():
    assert extend_to_irreducible(Z3, (1, 0, 0)) == (1, 1, 0)
    assert extend_to_irreducible(Z3, (1, 1, 0)) == (1, 1, 0)
    assert extend_to_irreducible(Z3, (2, 0, 0)) == (3, 0, 0)
    with pytest.raises(HasPrincipalSubtype):
        extend_to_irreducible(Z3, (1, 1, 1))


def test_maximal_wrt_examples():
    T, L = types_maximal_wrt(Z3, (1, 0, 0))
    assert set(T) == {(3, 0, 0)} and L == 2
    T, L = types_maximal_wrt(V4, (1, 0, 0, 0))
    # (2,0,0,0) has length 2 only, so (1,1,1,0) alone is maximal
    assert set(T) == {(1, 1, 1, 0)} and L == 2
    with pytest.raises(HasPrincipalSubtype):
        types_maximal_wrt(Z3, (0, 0, 1))


def _zero_sum_free_types(o):
    """Every type with no nonzero principal subtype, by direct search."""
    out = []
    h = o.h

    def rec(t, start):
        out.append(tuple(t))
        for i in range(start, h):
            t[i] += 1
            if not has_nonzero_principal_subtype(o, t):
                rec(t, i)
            t[i] -= 1

    rec([0] * h, 0)
    return out


@pytest.mark.parametrize("G", SMALL, ids=str)
def test_maximal_wrt_zero_is_maximal(G):
    o = canonical_ordering(G)
    T, L = types_maximal_wrt(o, (0,) * o.h)
    assert set(T) == set(maximal_types(o)) and L == davenport(G).D


@pytest.mark.parametrize("G", SMALL, ids=str)
def test_extension_is_irreducible_supertype(G):
    o = canonical_ordering(G)
    D = davenport(G).D
    for sub in _zero_sum_free_types(o):
        t = extend_to_irreducible(o, sub)
        assert is_subtype(sub, t) and is_irreducible_type(o, t)
        T, L = types_maximal_wrt(o, sub)
        assert 1 <= L <= D
        assert L >= sum(t) - sum(sub)


def test_has_principal_subtype_agrees_with_lattice_scan():
    o = canonical_ordering(make_group([2, 4]))
    for t in itertools.product(range(3), repeat=o.h):
        direct = any(
            any(s) and is_principal(o, s)
            for s in itertools.product(*(range(x + 1) for x in t))
        )
        assert has_nonzero_principal_subtype(o, t) == direct


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([G for G in SMALL if G.order > 1]), st.randoms(use_true_random=False))
def test_permutation_invariance(G, rnd):
    o = canonical_ordering(G)
    perm = list(range(o.h))
    rnd.shuffle(perm)
    p = o.permuted(perm)
    assert enumerate_irreducible_types(o).lengths() == enumerate_irreducible_types(p).lengths()
    assert davenport_of_ordering(o) == davenport_of_ordering(p)
    w1 = sum(factorial_weight(t) for t in maximal_types(o))
    w2 = sum(factorial_weight(t) for t in maximal_types(p))
    assert w1 == w2
    # a weakly coprime tau' moved along with the ordering keeps L
    sub = [0] * o.h
    sub[0] = 1
    if not has_nonzero_principal_subtype(o, sub):
        moved = [sub[perm[i]] for i in range(o.h)]
        assert types_maximal_wrt(o, sub)[1] == types_maximal_wrt(p, moved)[1]


def test_factorial_weight():
    assert factorial_weight((3, 0, 0)) == Fraction(1, 6)
    assert factorial_weight((2, 2)) == Fraction(1, 4)
