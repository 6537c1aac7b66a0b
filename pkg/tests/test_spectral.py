import math
from fractions import Fraction

import pytest

from circlespec import (
    AtomicMeasure,
    CirclePoint,
    EnumerationCapError,
    GeneratorAllocator,
    PermSubgroup,
    check_simplicity_levels,
    check_symmetric_power,
    check_tensor_power,
    check_translate_singularity,
    cs_criterion,
    fibers,
    fock_multiplicity_set,
    generic_measure,
    girsanov_step,
    matrix_oracle,
    minimal_m_for_cs,
    multiplicity,
    nonsimple_counterexample,
    paired_relation_measure,
    simple_spectrum,
    tensor_vs_symmetric,
)

from tests.helpers import designed_relation_measure


def test_fibers_partition_all_tuples():
    mu = generic_measure(3)
    fcs = fibers(mu, 2)
    assert sum(fc.size for fc in fcs) == 9
    assert len(fcs) == 6  # 3 squares + 3 cross products
    eigs = [fc.eigenvalue for fc in fcs]
    assert eigs == sorted(eigs)
    generic = [fc for fc in fcs if fc.is_generic]
    squares = [fc for fc in fcs if not fc.is_generic]
    assert len(generic) == 3 and all(fc.size == 2 for fc in generic)
    assert len(squares) == 3 and all(fc.size == 1 for fc in squares)


def test_fiber_counts_follow_multiset_combinatorics():
    mu = generic_measure(4)
    for n in (1, 2, 3):
        fcs = fibers(mu, n)
        assert sum(fc.size for fc in fcs) == 4**n
        assert sum(len(fc.multisets()) for fc in fcs) == math.comb(4 + n - 1, n)
        # fresh generators: one multiset per eigenvalue
        assert all(len(fc.multisets()) == 1 for fc in fcs)


def test_designed_relation_doubles_a_fiber():
    mu = designed_relation_measure()
    fcs = fibers(mu, 2)
    doubled = [fc for fc in fcs if len(fc.multisets()) == 2]
    assert len(doubled) == 1
    fc = doubled[0]
    assert fc.size == 4
    # the fiber eigenvalue is x*y = z*w
    x, y = CirclePoint.generator(0), CirclePoint.generator(1)
    assert fc.eigenvalue == x * y


def test_fibers_cap():
    with pytest.raises(EnumerationCapError):
        fibers(generic_measure(10), 4, tuple_cap=100)


def test_multiplicity_reference_values():
    mu = generic_measure(4)
    trivial = multiplicity(mu, 3, PermSubgroup.trivial(3))
    assert trivial.generic_value == 6
    assert trivial.homogeneous_on_generic
    full = multiplicity(mu, 3, PermSubgroup.symmetric(3))
    assert full.generic_value == 1
    cyclic = multiplicity(mu, 3, PermSubgroup.cyclic(3))
    assert cyclic.generic_value == 2
    assert trivial.total_tuples == full.total_tuples == 64


def test_multiplicity_rejects_degree_mismatch():
    with pytest.raises(ValueError):
        multiplicity(generic_measure(2), 3, PermSubgroup.symmetric(2))


def test_matrix_oracle_agrees_on_generic_measure():
    mu = generic_measure(4)
    for G in (PermSubgroup.trivial(2), PermSubgroup.cyclic(2), PermSubgroup.symmetric(2)):
        orbit = multiplicity(mu, 2, G)
        rank = matrix_oracle(mu, 2, G)
        assert orbit.entries == rank.entries


def test_matrix_oracle_agrees_on_relation_measure():
    mu = designed_relation_measure()
    for G in (PermSubgroup.trivial(2), PermSubgroup.symmetric(2)):
        orbit = multiplicity(mu, 2, G)
        rank = matrix_oracle(mu, 2, G)
        assert orbit.entries == rank.entries
    # the doubled fiber: 4 tuples, 2 swap orbits
    full = multiplicity(mu, 2, PermSubgroup.symmetric(2))
    x, y = CirclePoint.generator(0), CirclePoint.generator(1)
    assert full.entries[x * y] == 2


def test_matrix_oracle_total_rank_counts_invariants():
    # rank of the symmetrizer over all fibers = number of 3-multisets
    mu = generic_measure(6)
    rep = matrix_oracle(mu, 3, PermSubgroup.symmetric(3))
    assert sum(rep.entries.values()) == math.comb(6 + 3 - 1, 3)


def test_matrix_oracle_cap():
    with pytest.raises(EnumerationCapError):
        matrix_oracle(generic_measure(10), 4, PermSubgroup.symmetric(4), matrix_cap=100)


def test_simple_spectrum_and_levels():
    alloc = GeneratorAllocator()
    mu = generic_measure(3, alloc)
    assert simple_spectrum(mu, 2)
    assert simple_spectrum(mu, 3)
    rep = check_simplicity_levels(mu, 4)
    assert rep["levels"] == {"1": True, "2": True, "3": True, "4": True}
    assert rep["monotone"] and rep["violations"] == []


def test_two_point_translate_orbit_is_simple():
    # {x, x*a}: every level eigenvalue x^k a^j pins the multiset uniquely
    alloc = GeneratorAllocator()
    x = alloc.fresh_point()
    a = alloc.fresh_point()
    mu = AtomicMeasure({x: Fraction(1, 2), x * a: Fraction(1, 2)})
    rep = check_simplicity_levels(mu, 4)
    assert all(rep["levels"].values())


def test_translate_sum_breaks_simplicity_above_level_one():
    alloc = GeneratorAllocator()
    sigma = generic_measure(2, alloc)
    tau = sigma + sigma.translate(alloc.fresh_point())
    rep = check_simplicity_levels(tau, 3)
    assert rep["levels"] == {"1": True, "2": False, "3": False}
    assert rep["monotone"] and rep["violations"] == []


def test_check_tensor_power_small_cases():
    rep = check_tensor_power(1, 2, 4)
    assert rep["passed"] and rep["generic_value"] == 2 == rep["formula"]
    assert rep["orbit_route"]["ran"] and rep["matrix_route"]["ran"]
    rep = check_tensor_power(2, 2, 6)
    assert rep["passed"] and rep["generic_value"] == 6
    assert rep["group"]["order"] == 4


def test_check_tensor_power_warns_below_generic_threshold():
    rep = check_tensor_power(2, 2, 3)
    assert rep["warning"] is not None


def test_check_symmetric_power_small_cases():
    rep = check_symmetric_power(1, 2, 4)
    assert rep["passed"] and rep["generic_value"] == 1 == rep["formula"]
    rep = check_symmetric_power(2, 2, 6)
    assert rep["passed"] and rep["generic_value"] == 3
    assert rep["group"]["order"] == 8


def test_fock_multiplicity_set_small():
    rep = fock_multiplicity_set(2, 2, 6)
    assert rep["passed"]
    assert rep["set"] == [1, 3]
    assert rep["levels_pairwise_singular"]


def test_cs_criterion_examples():
    assert cs_criterion(1, 2, 2)["holds"]
    rep = cs_criterion(2, 2, 2)
    assert rep["group_order"] == 4 and rep["tensor_multiplicity"] == 6
    assert not rep["holds"]


def test_minimal_m_for_cs_reference_values():
    for k, want in ((1, 2), (2, 2), (3, 5)):
        rep = minimal_m_for_cs(k)
        assert rep["found"] and rep["m"] == want
    assert minimal_m_for_cs(2)["sequence"][1] == "4/3"
    assert minimal_m_for_cs(1)["sequence"] == ["1", "2"]


def test_minimal_m_for_cs_respects_cap():
    rep = minimal_m_for_cs(3, m_cap=3)
    assert not rep["found"]
    assert len(rep["sequence"]) == 3


def test_translate_singularity_matrix():
    alloc = GeneratorAllocator()
    sigma = generic_measure(4, alloc)
    fresh = alloc.fresh_point()
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            fresh_rep = check_translate_singularity(sigma, n, m, fresh)
            ident_rep = check_translate_singularity(sigma, n, m, CirclePoint.identity())
            assert fresh_rep["singular"]
            assert ident_rep["singular"] == (n != m)


def test_nonsimple_counterexample_two_atoms():
    alloc = GeneratorAllocator()
    sigma = generic_measure(2, alloc)
    rep = nonsimple_counterexample(sigma, alloc.fresh_point())
    assert rep["found"]
    assert rep["translate_not_singular"]
    assert not rep["simple_level_2"]
    assert rep["witness"]["multiplicity"] == 2
    assert len(rep["overlap"]) == 2


def test_nonsimple_counterexample_needs_two_atoms():
    alloc = GeneratorAllocator()
    sigma = generic_measure(1, alloc)
    rep = nonsimple_counterexample(sigma, alloc.fresh_point())
    assert not rep["found"]
    assert "at least 2" in rep["note"]


def test_nonsimple_counterexample_rejects_identity_shift():
    with pytest.raises(ValueError):
        nonsimple_counterexample(generic_measure(2), CirclePoint.identity())


def test_girsanov_trivial_on_generic_measure():
    rep = girsanov_step(generic_measure(3), 2)
    assert rep["q"] == 1 and rep["trivial"]
    assert rep["satisfied"]


def test_girsanov_squares_designed_multiplicity():
    rep = girsanov_step(paired_relation_measure(), 2)
    assert rep["q"] == 2
    assert rep["required"] == 4
    assert rep["chosen_count"] >= 4
    assert len(rep["witness_multisets"]) == rep["chosen_count"]
    assert rep["satisfied"]
    assert rep["level_max"] == {"1": 1, "2": 2, "4": 4}


def test_paired_relation_measure_shape():
    mu = paired_relation_measure()
    assert len(mu) == 8
    assert mu.mass == 1


def test_tensor_vs_symmetric_split():
    rep = tensor_vs_symmetric(generic_measure(3), 2)
    assert rep["passed"] and rep["factorial"] == 2
    degenerate = [r for r in rep["rows"] if not r["generic"]]
    assert len(degenerate) == 3  # the squares
    for row in rep["rows"]:
        if row["generic"]:
            assert row["tensor"] == 2 * row["symmetric"]


def test_tensor_vs_symmetric_flags_relation_fiber():
    rep = tensor_vs_symmetric(designed_relation_measure(), 2)
    assert rep["passed"]
    doubled = [r for r in rep["rows"] if r["symmetric"] == 2]
    assert len(doubled) == 1 and doubled[0]["tensor"] == 4
