from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from godeaux.scalars import PrimeField, QQ
from godeaux.wpoly import (
    MonomialMap,
    WPoly,
    WRing,
    apply_map,
    compose,
    jacobian,
    map_power,
    monomial_to_str,
    monomials_of_degree,
    parse_monomial,
    parse_poly,
    weighted_degree_counts,
)

R = WRing(("x1", "x2", "x3", "y1", "y3"), (1, 1, 1, 2, 2), QQ)


def test_ring_validation():
    with pytest.raises(ValueError):
        WRing(("a", "a"), (1, 1), QQ)
    with pytest.raises(ValueError):
        WRing(("a", "b"), (1,), QQ)
    with pytest.raises(ValueError):
        WRing(("a",), (0,), QQ)


def test_monomial_counts_frozen():
    # hand-enumerated for weights (1,1,1,2,2)
    assert len(monomials_of_degree(R, 1)) == 3
    assert len(monomials_of_degree(R, 2)) == 8
    assert len(monomials_of_degree(R, 3)) == 16
    assert len(monomials_of_degree(R, 4)) == 30


def test_monomial_counts_match_generating_function():
    counts = weighted_degree_counts(R.weights, 12)
    for d in range(13):
        assert len(monomials_of_degree(R, d)) == counts[d]


def test_monomials_are_graded_lex_descending():
    monos = monomials_of_degree(R, 4)
    assert monos == sorted(monos, reverse=True)
    assert monos[0] == (4, 0, 0, 0, 0)
    assert monos[-1] == (0, 0, 0, 0, 2)


def test_poly_arithmetic():
    x1 = R.variable(0)
    x2 = R.variable(1)
    f = x1 * x1 - 2 * x2 * x2
    g = x1 * x1 + x2 * x2
    assert (f + g).coefficient((2, 0, 0, 0, 0)) == 2
    assert (f - f).is_zero()
    assert (f * g).degree() == 4
    h = (x1 + x2) ** 3
    assert h.coefficient((2, 1, 0, 0, 0)) == 3
    assert f.is_homogeneous()
    assert not (x1 + x1 * x1).is_homogeneous()


def test_zero_coefficients_are_dropped():
    x1 = R.variable(0)
    f = x1 - x1
    assert f.terms == {}
    assert f.to_string() == "0"


def test_coefficient_type_enforcement():
    Rp = WRing(("a", "b"), (1, 1), PrimeField(13))
    with pytest.raises(TypeError):
        WPoly(Rp, {(1, 0): Fraction(1, 2)})
    with pytest.raises(TypeError):
        WPoly(R, {(1, 0, 0, 0, 0): PrimeField(13)(2)})


def test_serialization_round_trip():
    f = R.monomial((4, 0, 0, 0, 0), Fraction(-3, 7)) + R.monomial((0, 0, 0, 1, 1), 2)
    s = f.to_string()
    assert s == "-3/7 * x1^4 + 2 * y1 y3"
    assert parse_poly(R, s) == f
    assert parse_poly(R, "0").is_zero()
    assert parse_poly(R, "5") == R.constant(5)
    assert parse_poly(R, "x1^2 x2") == R.monomial((2, 1, 0, 0, 0))
    assert monomial_to_str(R, (0, 0, 0, 0, 0)) == "1"
    assert parse_monomial(R, "y3^2") == (0, 0, 0, 0, 2)


def test_serialization_round_trip_over_fp():
    Rp = WRing(("a", "b"), (1, 2), PrimeField(13))
    f = Rp.monomial((2, 0), 12) + Rp.monomial((0, 1), 5)
    s = f.to_string()
    assert s == "12 * a^2 + 5 * b"
    assert parse_poly(Rp, s) == f


def test_evaluate():
    f = parse_poly(R, "1 * x1^2 + -1 * y1")
    assert f.evaluate([2, 0, 0, 3, 0]) == 1
    Rp = WRing(("a", "b"), (1, 1), PrimeField(13))
    g = parse_poly(Rp, "3 * a b")
    assert g.evaluate([Rp.field(5), Rp.field(2)]) == 30 % 13


def test_partial_and_jacobian():
    f = parse_poly(R, "1 * x1^4 + 2 * x1 y1 + 5 * y3")
    fx = f.partial(0)
    assert fx == parse_poly(R, "4 * x1^3 + 2 * y1")
    j = jacobian([f])
    assert j[0][3] == parse_poly(R, "2 * x1")
    assert j[0][4] == R.constant(5)


def test_weighted_euler_identity():
    # sum_v w_v x_v df/dx_v = deg(f) f for homogeneous f
    f = parse_poly(R, "1 * x1^2 x2^2 + 3 * y1 y3 + -2 * x1 x2 y1")
    total = R.zero_poly()
    for v in range(R.nvars):
        total = total + R.weights[v] * (R.variable(v) * f.partial(v))
    assert total == 4 * f


def test_monomial_map_validation():
    with pytest.raises(ValueError):
        MonomialMap(R, (1, 1, 1, 1, 0), (0, 1, 2, 3, 4))  # zero scalar
    with pytest.raises(ValueError):
        MonomialMap(R, (1, 1, 1, 1, 1), (0, 0, 2, 3, 4))  # not a permutation
    with pytest.raises(ValueError):
        MonomialMap(R, (1, 1, 1, 1, 1), (3, 1, 2, 0, 4))  # weight mismatch


def test_apply_map_matches_point_action():
    m = MonomialMap(R, (2, -1, 3, 5, -2), (1, 0, 2, 4, 3))
    f = parse_poly(R, "1 * x1^2 x2 + -4 * y1 y3 + 7 * x3^4")
    p = [3, 1, -2, 5, 4]
    assert apply_map(f, m).evaluate(p) == f.evaluate(m.point_image(p))


def test_compose_contravariance():
    a = MonomialMap(R, (2, -1, 3, 5, -2), (1, 0, 2, 4, 3))
    b = MonomialMap(R, (1, 4, -3, 2, 2), (2, 1, 0, 3, 4))
    f = parse_poly(R, "1 * x1 x2 x3 + 5 * y1^2 + -1 * x1^2 y3")
    c = compose(a, b)
    assert apply_map(f, c) == apply_map(apply_map(f, a), b)
    p = [1, 2, 3, 4, 5]
    assert c.point_image(p) == a.point_image(b.point_image(p))


def test_map_power_identity():
    sigma = MonomialMap.diagonal(R, (-1, 1, -1, 1, 1))
    assert map_power(sigma, 2).scalars == MonomialMap.identity(R).scalars
    assert map_power(sigma, 2).targets == MonomialMap.identity(R).targets


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=5, max_size=5),
       st.lists(st.integers(-6, 6), min_size=5, max_size=5))
def test_evaluate_is_ring_morphism(p, q):
    f = parse_poly(R, "2 * x1 x2 + -1 * y1 + 3 * x3^2")
    g = parse_poly(R, "1 * x1^2 + 1 * y3")
    pt = [Fraction(a) for a in p]
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)
    assert (f + g).evaluate(pt) == f.evaluate(pt) + g.evaluate(pt)
