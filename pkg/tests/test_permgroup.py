import math

import pytest

from circlespec import (
    EnumerationCapError,
    Perm,
    PermSubgroup,
    closure,
    contiguous_block_group,
    interleaved_block_group,
    orbit_count_free,
    orbits_on_points,
    wreath_block_group,
)


def test_perm_basics():
    p = Perm([1, 0, 2])
    assert p(0) == 1 and p(2) == 2
    assert p * p == Perm.identity(3)
    assert p.inverse() == p
    assert Perm.from_cycle(4, (0, 1, 2)) == Perm([1, 2, 0, 3])
    assert p.serialize() == "[1,0,2]"
    with pytest.raises(ValueError):
        Perm([0, 0, 1])


def test_composition_acts_right_to_left():
    # (p * q)(i) = p(q(i))
    p = Perm.from_cycle(3, (0, 1))
    q = Perm.from_cycle(3, (1, 2))
    assert (p * q)(1) == p(q(1))
    assert [(p * q)(i) for i in range(3)] == [1, 2, 0]


def test_closure_and_standard_groups():
    s3 = closure(3, [Perm.transposition(3, 0, 1), Perm.from_cycle(3, (0, 1, 2))])
    assert len(s3) == 6
    assert len(closure(3, [Perm.from_cycle(3, (0, 1, 2))])) == 3
    s4 = PermSubgroup(4, [Perm.transposition(4, 0, 1), Perm.from_cycle(4, (0, 1, 2, 3))])
    assert s4.order == 24
    assert PermSubgroup.trivial(5).order == 1
    assert PermSubgroup.symmetric(4).order == 24
    assert PermSubgroup.cyclic(4).order == 4


def test_lagrange_divisibility():
    s4 = PermSubgroup.symmetric(4)
    for g in (
        PermSubgroup.trivial(4),
        PermSubgroup.cyclic(4),
        PermSubgroup(4, [Perm.transposition(4, 0, 1)]),
        PermSubgroup(4, [Perm.from_cycle(4, (0, 1, 2))]),
    ):
        assert s4.order % g.order == 0


def test_orbit_count_free_reference_values():
    assert orbit_count_free(PermSubgroup.trivial(3)) == 6
    assert orbit_count_free(PermSubgroup.symmetric(3)) == 1
    c2 = PermSubgroup(4, [Perm.transposition(4, 0, 1)])
    assert orbit_count_free(c2) == 12
    assert orbit_count_free(PermSubgroup.symmetric(4)) == 1


def test_orbit_count_free_equals_index_formula():
    for G in (
        PermSubgroup.cyclic(4),
        PermSubgroup(4, [Perm.from_cycle(4, (0, 1, 2))]),
        wreath_block_group(2, 2),
    ):
        assert orbit_count_free(G) == math.factorial(G.degree) // G.order


def test_orbit_count_free_cap():
    with pytest.raises(EnumerationCapError):
        orbit_count_free(PermSubgroup.trivial(6), tuple_cap=100)


def test_block_group_orders():
    assert contiguous_block_group(2, 2).order == 4
    assert contiguous_block_group(3, 2).order == 36
    assert interleaved_block_group(2, 3).order == 36
    assert wreath_block_group(2, 2).order == 8
    assert wreath_block_group(2, 3).order == 48


def test_contiguous_blocks_fix_block_membership():
    G = contiguous_block_group(2, 2)
    for p in G.elements:
        for i in range(4):
            assert p(i) // 2 == i // 2


def test_interleaved_blocks_fix_residue():
    G = interleaved_block_group(2, 3)
    for p in G.elements:
        for i in range(6):
            assert p(i) % 2 == i % 2


def test_orbits_on_points():
    # tuples carry atom indices; the group permutes coordinate positions
    G = PermSubgroup.symmetric(2)
    tuples = [(0, 1), (1, 0), (0, 0), (2, 3), (3, 2), (1, 1)]
    orbits = orbits_on_points(G, tuples)
    assert [tuple(sorted(o)) for o in orbits] == [
        ((0, 1), (1, 0)),
        ((0, 0),),
        ((2, 3), (3, 2)),
        ((1, 1),),
    ]
    with pytest.raises(ValueError):
        orbits_on_points(G, [(0, 1, 2)])


def test_describe_is_json_ready():
    d = PermSubgroup.symmetric(3).describe()
    assert d["degree"] == 3 and d["order"] == 6
    assert all(isinstance(s, str) for s in d["generators"])
