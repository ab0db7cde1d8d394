"""Permutations, cyclic groups, closures, and subgroup enumeration."""

import math

import numpy as np
import pytest

from rcopselect import (
    CapExceededError,
    CyclicGroup,
    Permutation,
    PermutationGroup,
    closure,
    cyclic_group,
    enumerate_cyclic_subgroups,
    identity,
    parse_cycles,
    proposal_distribution,
    totient,
    transpositions,
)


def test_identity_basics():
    e = identity(4)
    assert e.p == 4
    assert e.is_identity
    assert str(e) == "id"
    assert list(e.cycles()) == []
    assert e.order() == 1


def test_cycle_string_sorted_min_first_fixed_points_omitted():
    s = parse_cycles("(4,5)(1,2,3)", 6)
    assert str(s) == "(1,2,3)(4,5)"
    assert s(6) == 6
    # (3,1,2) sends 3 to 1 and 1 to 2, so the min-first form starts 1,2
    t = parse_cycles("(3,1,2)", 3)
    assert str(t) == "(1,2,3)"
    assert str(parse_cycles("(2,1)", 5)) == "(1,2)"


def test_parse_round_trip():
    for text in ["(1,2,3)(4,5)", "(1,4)(2,3)", "(1,2,3,4,5,6)", "id"]:
        s = parse_cycles(text, 6)
        assert parse_cycles(str(s), 6) == s


def test_parse_rejects_bad_input():
    with pytest.raises(ValueError):
        parse_cycles("(1,2", 4)
    with pytest.raises(ValueError):
        parse_cycles("(1,2)(2,3)", 4)
    with pytest.raises(ValueError):
        parse_cycles("(0,1)", 4)
    with pytest.raises(ValueError):
        parse_cycles("(1,5)", 4)
    with pytest.raises(ValueError):
        parse_cycles("1,2,3", 4)


def test_composition_convention():
    # (a * b)(i) = a(b(i)): apply b first.
    a = parse_cycles("(1,2)", 3)
    b = parse_cycles("(2,3)", 3)
    ab = a * b
    assert ab(2) == a(b(2)) == a(3) == 3
    assert str(ab) == "(1,2,3)"
    ba = b * a
    assert str(ba) == "(1,3,2)"


def test_inverse_and_pow():
    s = parse_cycles("(1,2,3,4,5)", 5)
    assert (s * s.inverse()).is_identity
    assert s ** 5 == identity(5)
    assert s ** -1 == s.inverse()
    assert s ** 2 == s * s


def test_order_and_cycle_lengths():
    s = parse_cycles("(1,2,3)(4,5)", 6)
    assert sorted(s.cycle_lengths()) == [1, 2, 3]
    assert s.order() == 6
    assert parse_cycles("(1,2,3,4)(5,6,7)(8,9)", 9).order() == 12


def test_permutation_action_on_matrix_indices():
    s = parse_cycles("(1,2,3)", 3)
    m = np.arange(9.0).reshape(3, 3)
    # entry (i, j) of the transported matrix equals m[s^-1 i, s^-1 j]
    inv = [s.inverse()(i + 1) - 1 for i in range(3)]
    moved = m[np.ix_(inv, inv)]
    assert moved[s(1) - 1, s(2) - 1] == m[0, 1]


def test_transpositions_lexicographic():
    ts = transpositions(4)
    assert len(ts) == 6
    assert str(ts[0]) == "(1,2)"
    assert str(ts[-1]) == "(3,4)"
    assert len(set(ts)) == 6


def brute_totient(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_totient_matches_gcd_count():
    for n in range(1, 200):
        assert totient(n) == brute_totient(n)


def test_cyclic_group_canonical_generator():
    # <(1,3,2)> = <(1,2,3)>; the stored generator is the lexicographically
    # smallest image tuple among the coprime powers.
    a = CyclicGroup(parse_cycles("(1,2,3)", 3))
    b = CyclicGroup(parse_cycles("(1,3,2)", 3))
    assert a.key == b.key
    assert str(a.generator) == "(1,2,3)"
    assert a.order == 3
    assert a.generator_count() == totient(3)


def test_cyclic_group_elements_and_orbits():
    c = cyclic_group(parse_cycles("(1,2,3)(4,5)", 6))
    assert c.order == 6
    assert len(set(c.elements())) == 6
    orbits = c.orbits()
    assert [len(o) for o in orbits] == [3, 2, 1]
    assert orbits[0][0] == 1 and orbits[2] == (6,)


def test_closure_sizes():
    s4 = closure([parse_cycles("(1,2)", 4), parse_cycles("(1,2,3,4)", 4)])
    assert len(s4) == 24
    klein = closure([parse_cycles("(1,2)(3,4)", 4), parse_cycles("(1,3)(2,4)", 4)])
    assert len(klein) == 4
    with pytest.raises(CapExceededError):
        closure([parse_cycles("(1,2)", 9), parse_cycles("(1,2,3,4,5,6,7,8,9)", 9)],
                cap=1000)


def test_permutation_group_order():
    g = PermutationGroup([parse_cycles("(1,2)", 3), parse_cycles("(1,2,3)", 3)])
    assert g.order == 6
    assert len({e.images for e in g.elements}) == 6


def test_enumerate_cyclic_subgroups_small_counts():
    for p, count in [(1, 1), (2, 2), (3, 5), (4, 17), (5, 67)]:
        assert len(enumerate_cyclic_subgroups(p)) == count


def test_enumerate_cyclic_subgroups_distinct_and_sorted():
    subs = enumerate_cyclic_subgroups(4)
    keys = [c.key for c in subs]
    assert len(set(keys)) == len(keys)
    orders = [c.order for c in subs]
    assert orders == sorted(orders)
    assert subs[0].order == 1


def test_proposal_distribution_is_normalized():
    for text, p in [("", 3), ("(1,2,3,4)", 4), ("(1,2)(3,4)", 4)]:
        c = CyclicGroup(parse_cycles(text, p))
        dist = proposal_distribution(c)
        total = sum(dist.values())
        assert abs(total - 1.0) < 1e-12
        m = p * (p - 1) // 2
        # each neighbor's mass is a multiple of 1/m
        for prob in dist.values():
            assert abs(prob * m - round(prob * m)) < 1e-9


def test_proposal_distribution_neighbors_are_transposition_twists():
    c = CyclicGroup(parse_cycles("(1,2,3)", 4))
    dist = proposal_distribution(c)
    expected = set()
    for t in transpositions(4):
        expected.add(CyclicGroup(c.generator * t).key)
    assert {g.key for g in dist} == expected


def test_hash_and_sort():
    perms = [parse_cycles(t, 4) for t in ["(1,2)", "(1,3)", "id", "(1,2,3,4)"]]
    assert len(set(perms)) == 4
    ordered = sorted(perms)
    assert ordered[0].is_identity
