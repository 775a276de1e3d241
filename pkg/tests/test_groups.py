"""Finite groups and right actions: builders, validation, freeness, enumeration."""

import pytest

from fusionalg.groups import FiniteGroup, FiniteGSet, cyclic_actions, is_free


def test_cyclic_group_structure():
    g = FiniteGroup.cyclic(4)
    assert g.order == 4
    assert g.identity == 0
    for a in range(4):
        for b in range(4):
            assert g.mul(a, b) == (a + b) % 4
        assert g.mul(a, g.inv(a)) == 0


def test_symmetric_group():
    s3 = FiniteGroup.symmetric(3)
    assert s3.order == 6
    noncommuting = [
        (a, b)
        for a in range(6)
        for b in range(6)
        if s3.mul(a, b) != s3.mul(b, a)
    ]
    assert noncommuting  # S3 is not abelian
    for a in range(6):
        assert s3.mul(s3.inv(a), a) == s3.identity


def test_direct_product():
    g = FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(3))
    assert g.order == 6
    # Z/2 x Z/3 is cyclic of order 6: some element has order 6
    orders = set()
    for a in range(6):
        k, x = 1, a
        while x != g.identity:
            x = g.mul(x, a)
            k += 1
        orders.add(k)
    assert 6 in orders


def test_group_from_table_rejects_bad_tables():
    with pytest.raises(ValueError):
        FiniteGroup.from_table(("e", "a"), ((0, 1), (1, 1)))  # not a bijection in rows
    with pytest.raises(ValueError):
        # associative magma with no identity behaviour: constant table
        FiniteGroup.from_table(("e", "a"), ((0, 0), (0, 0)))


def test_regular_action_is_free():
    for g in (FiniteGroup.cyclic(3), FiniteGroup.symmetric(3)):
        reg = FiniteGSet.regular(g)
        assert reg.size == g.order
        assert is_free(reg)


def test_trivial_action_freeness():
    z2 = FiniteGroup.cyclic(2)
    assert not is_free(FiniteGSet.trivial(z2, 2))
    one = FiniteGroup.cyclic(1)
    assert is_free(FiniteGSet.trivial(one, 3))  # trivial group acts freely


def test_disjoint_union_of_free_orbits():
    z2 = FiniteGroup.cyclic(2)
    two = FiniteGSet.disjoint_union(FiniteGSet.regular(z2), FiniteGSet.regular(z2))
    assert two.size == 4
    assert is_free(two)
    mixed = FiniteGSet.disjoint_union(FiniteGSet.regular(z2), FiniteGSet.trivial(z2, 1))
    assert not is_free(mixed)


def test_gset_from_table_validation():
    z2 = FiniteGroup.cyclic(2)
    with pytest.raises(ValueError):
        # identity must fix every point
        FiniteGSet.from_table(z2, ("p",), ((1,),))
    with pytest.raises(ValueError):
        # x·(gh) must equal (x·g)·h: this table breaks compatibility
        FiniteGSet.from_table(z2, ("p", "q", "r"), ((0, 1), (1, 2), (2, 0)))


def test_action_apply():
    z3 = FiniteGroup.cyclic(3)
    reg = FiniteGSet.regular(z3)
    for x in range(3):
        for g in range(3):
            assert reg.apply(x, g) == (x + g) % 3


def test_cyclic_action_enumeration_counts():
    # actions of Z/2 on n points = involutions: 1, 2, 4, 10
    expected_z2 = {1: 1, 2: 2, 3: 4, 4: 10}
    # actions of Z/3 on n points = permutations of order dividing 3: 1, 1, 3, 9
    expected_z3 = {1: 1, 2: 1, 3: 3, 4: 9}
    for n, expect in expected_z2.items():
        assert len(cyclic_actions(2, n)) == expect
    for n, expect in expected_z3.items():
        assert len(cyclic_actions(3, n)) == expect


def test_cyclic_action_enumeration_free_counts():
    # free Z/2 actions = fixed-point-free involutions: 0, 1, 0, 3
    free_z2 = [sum(1 for a in cyclic_actions(2, n) if is_free(a)) for n in (1, 2, 3, 4)]
    assert free_z2 == [0, 1, 0, 3]
    # free Z/3 actions: only multiples of 3 points, all points in 3-cycles
    free_z3 = [sum(1 for a in cyclic_actions(3, n) if is_free(a)) for n in (1, 2, 3, 4)]
    assert free_z3 == [0, 0, 2, 0]


def test_cyclic_action_enumeration_is_deterministic():
    first = [a.act for a in cyclic_actions(2, 4)]
    second = [a.act for a in cyclic_actions(2, 4)]
    assert first == second
