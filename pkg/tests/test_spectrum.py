import pytest
from hypothesis import given, settings, strategies as st
from math import gcd

import oracle
from cyclozdf.coset import build_subgroup, coset_index_function, cyclic_subgroups
from cyclozdf.modular import ResidueRing
from cyclozdf.spectrum import (
    ZDBF,
    ZDF,
    check_zdbf_condition,
    collision_set,
    collision_sets,
    orbit_count,
    solution_union,
    solution_unions,
    spectrum_direct,
    spectrum_of_table,
    spectrum_via_unions,
)


def G(e, n):
    return build_subgroup(e, ResidueRing(n))


def test_direct_z4():
    sp = spectrum_direct(coset_index_function(4, 3))
    assert sp.S == (0, 2)
    assert sp.per_shift == (0, 2, 0)
    assert sp.classification == ZDF


def test_direct_z9_e2():
    sp = spectrum_direct(coset_index_function(9, 2))
    assert sp.count(3) == sp.count(6) == 7
    assert all(sp.count(a) == 3 for a in (1, 2, 4, 5, 7, 8))
    assert sp.S == (3, 7)


def test_direct_z9_e4():
    sp = spectrum_direct(coset_index_function(9, 4))
    assert sp.count(3) == sp.count(6) == 6
    assert all(sp.count(a) == 0 for a in (1, 2, 4, 5, 7, 8))
    assert sp.S == (0, 6)


def test_count_rejects_zero_shift():
    with pytest.raises(ValueError):
        spectrum_direct(coset_index_function(4, 3)).count(0)


def test_raw_table_spectrum():
    # f(x) = x mod 2 on Z_6: shift a collides everywhere iff a is even
    sp = spectrum_of_table([0, 1, 0, 1, 0, 1])
    assert sp.per_shift == (0, 6, 0, 6, 0)
    assert sp.m == 2


def test_solution_union_examples():
    assert solution_union(G(3, 8), 2).union_set == {1, 5}
    assert solution_union(G(3, 8), 1).size == 0
    assert solution_union(G(2, 9), 3).size == 7


def test_solution_union_rejects_zero():
    with pytest.raises(ValueError):
        solution_union(G(3, 8), 0)


@pytest.mark.parametrize(
    "n,e,S,cls",
    [(4, 3, (0, 2), ZDF), (10, 9, (0, 2), ZDF), (7, 2, (2,), ZDBF)],
)
def test_unions_examples(n, e, S, cls):
    sp = spectrum_via_unions(G(e, n))
    assert sp.S == S
    assert sp.classification == cls
    assert sp == spectrum_direct(coset_index_function(n, e))


def test_spectrum_n10_e9_by_parity():
    sp = spectrum_via_unions(G(9, 10))
    assert all(sp.count(a) == (2 if a % 2 == 0 else 0) for a in range(1, 10))


def test_identity_subgroup_reports_zero():
    sp = spectrum_direct(coset_index_function(4, 1))
    assert sp.S == (0,)
    assert sp.lam == 0
    assert sp.classification == ZDBF


def test_identity_matches_oracle_sets_small():
    for n in range(2, 60):
        for H in cyclic_subgroups(ResidueRing(n)):
            f = coset_index_function(n, H.generator)
            direct = collision_sets(f)
            unions = solution_unions(H)
            for a in range(1, n):
                assert direct[a - 1] == collision_set(f, a)
                assert unions[a - 1].union_set == solution_union(H, a).union_set
                assert direct[a - 1] == unions[a - 1].union_set


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 150), st.data())
def test_both_routes_match_naive_counts(n, data):
    e = data.draw(st.sampled_from(ResidueRing(n).units()))
    expected = oracle.zero_difference_counts(oracle.index_table(oracle.subgroup(e, n), n))
    direct = spectrum_direct(coset_index_function(n, e))
    unions = spectrum_via_unions(G(e, n))
    assert direct.by_shift() == expected == unions.by_shift()
    assert direct.m == unions.m == orbit_count(G(e, n))


def test_total_collisions_identity():
    # summing over every shift, a=0 included, counts pairs (x, y) in a common coset
    for n in (12, 27, 35, 64):
        for H in cyclic_subgroups(ResidueRing(n)):
            f = coset_index_function(n, H.generator)
            sp = spectrum_direct(f)
            pairs = sum(len(c) ** 2 for c in f.partition.cosets)
            assert sum(sp.per_shift) + n == pairs


def test_invariant_under_choice_of_generator():
    for n in (9, 21, 25, 49, 63):
        ring = ResidueRing(n)
        for H in cyclic_subgroups(ring):
            ref = spectrum_direct(coset_index_function(n, H.generator))
            others = [e for e in H.elements if build_subgroup(e, ring).elements == H.elements]
            for e in others:
                assert spectrum_direct(coset_index_function(n, e)) == ref


def test_zdbf_condition_examples():
    c = check_zdbf_condition(G(2, 7))
    assert c.holds and c.predicted == (7, 3, 2)
    c = check_zdbf_condition(G(3, 8))
    assert not c.holds and c.offending == (3,)
    c = check_zdbf_condition(G(1, 4))
    assert c.holds and c.predicted == (4, 4, 0)


def test_zdbf_condition_on_primes():
    for n in range(2, 101):
        if not oracle.is_prime(n):
            continue
        for H in cyclic_subgroups(ResidueRing(n)):
            c = check_zdbf_condition(H)
            assert c.holds
            sp = spectrum_direct(coset_index_function(n, H.generator))
            assert (sp.n, sp.m, sp.lam) == c.predicted
            assert sp.S == (H.order - 1,)


def test_zdbf_condition_implies_balanced_for_composites():
    for n in range(4, 200):
        for H in cyclic_subgroups(ResidueRing(n)):
            c = check_zdbf_condition(H)
            if c.holds:
                sp = spectrum_via_unions(H)
                assert (sp.n, sp.m, sp.lam) == c.predicted
            else:
                assert all(gcd(g - 1, n) != 1 for g in c.offending)
