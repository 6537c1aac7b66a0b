import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from circlespec import CirclePoint, GeneratorAllocator, MeasureFormatError


def point_strategy(max_index=5, max_exp=3):
    rationals = st.fractions(min_value=0, max_value=1).map(lambda q: q % 1)
    generics = st.dictionaries(
        st.integers(min_value=0, max_value=max_index),
        st.integers(min_value=-max_exp, max_value=max_exp).filter(lambda e: e != 0),
        max_size=3,
    )
    return st.builds(CirclePoint, rationals, generics)


points = point_strategy()


def test_identity_and_generator_basics():
    e = CirclePoint.identity()
    assert e.is_identity and e.is_rational
    g = CirclePoint.generator(3)
    assert g.generic == ((3, 1),) and g.rational == 0
    assert not g.is_identity and not g.is_rational


def test_rational_part_reduced_modulo_one():
    assert CirclePoint(Fraction(5, 4)).rational == Fraction(1, 4)
    assert CirclePoint(Fraction(-1, 3)).rational == Fraction(2, 3)
    assert CirclePoint(2).is_identity


def test_product_merges_exponents_with_cancellation():
    p = CirclePoint(Fraction(1, 4), {1: 2})
    q = CirclePoint(Fraction(3, 4), {1: -1, 2: 1})
    r = p * q
    assert r.rational == 0
    assert r.generic == ((1, 1), (2, 1))
    assert str(r) == "g1^1 * g2^1"


def test_full_cancellation_reaches_identity():
    p = CirclePoint(Fraction(1, 3), {0: 1, 4: -2})
    assert (p * p.inverse()).is_identity


def test_power_is_repeated_product():
    p = CirclePoint(Fraction(1, 6), {2: -1})
    assert p**3 == p * p * p
    assert p**0 == CirclePoint.identity()
    assert p**-2 == (p.inverse()) ** 2
    with pytest.raises(ValueError):
        p ** Fraction(1, 2)


def test_constructor_rejects_bad_generators():
    with pytest.raises(ValueError):
        CirclePoint(0, {-1: 2})
    with pytest.raises(ValueError):
        CirclePoint(0, {1: Fraction(1, 2)})


def test_allocator_produces_distinct_indices():
    alloc = GeneratorAllocator()
    a, b, c = alloc.fresh_point(), alloc.fresh_point(), alloc.fresh_point()
    assert len({a, b, c}) == 3
    assert a.generic[0][0] < b.generic[0][0] < c.generic[0][0]


def test_str_and_parse_round_trip_examples():
    samples = [
        CirclePoint.identity(),
        CirclePoint(Fraction(2, 7)),
        CirclePoint(0, {0: 1, 3: -2}),
        CirclePoint(Fraction(1, 2), {5: 4}),
    ]
    for p in samples:
        assert CirclePoint.parse(str(p)) == p


def test_parse_rejects_malformed_text():
    for text in ("g1^0", "g1^1 * g1^2", "1/2 * 1/3", "h1^1", "", "g-1^1"):
        with pytest.raises(MeasureFormatError):
            CirclePoint.parse(text)


@given(points, points, points)
def test_group_laws(a, b, c):
    e = CirclePoint.identity()
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * e == a
    assert (a * a.inverse()).is_identity


@given(points)
def test_parse_round_trip(p):
    assert CirclePoint.parse(str(p)) == p


@given(points, points)
def test_total_order_is_consistent(a, b):
    assert (a <= b) or (b <= a)
    if a <= b and b <= a:
        assert a == b


@given(st.lists(points, min_size=1, max_size=6))
def test_sort_is_stable_total_order(ps):
    s = sorted(ps)
    for x, y in zip(s, s[1:]):
        assert x <= y


def test_unique_factorization_over_fresh_generators():
    # Distinct multisets of distinct generators give distinct products.
    gens = [CirclePoint.generator(i) for i in range(4)]
    products = {}
    for size in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(range(4), size):
            prod = CirclePoint.identity()
            for i in combo:
                prod = prod * gens[i]
            assert prod not in products, (combo, products[prod])
            products[prod] = combo
