from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kirwanres import (
    FactoredRational,
    LinForm,
    Poly,
    VariableMismatch,
    divides_product,
    exact_divide_linear,
    parse_poly,
)
from strategies import any_forms, circle_forms, polys, rationals

M = 2
P = polys(M)


def X(m=M):
    return Poly.var(m, 0)


def Y(i, m=M):
    return Poly.var(m, i)


@given(P, P, P)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.zero(M)
    assert a * Poly.one(M) == a


@given(P, rationals, rationals)
def test_scalar_multiplication_is_linear(a, s, t):
    assert a.scale(s + t) == a.scale(s) + a.scale(t)
    assert a * s == a.scale(s)


@given(P, P)
def test_degree_of_product(a, b):
    if a.is_zero() or b.is_zero():
        assert (a * b).is_zero()
    else:
        assert (a * b).degree() == a.degree() + b.degree()


def test_zero_polynomial_has_degree_minus_one():
    assert Poly.zero(1).degree() == -1
    assert Poly.const(1, 5).degree() == 0


def test_power_and_constants():
    p = X(1) + Y(1, 1)
    assert p**2 == X(1) * X(1) + 2 * X(1) * Y(1, 1) + Y(1, 1) * Y(1, 1)
    assert p**0 == Poly.one(1)
    assert Poly.const(1, 3) == 3
    assert Poly.const(1, Fraction(1, 2)) == Fraction(1, 2)


def test_mixed_rings_rejected():
    with pytest.raises(VariableMismatch):
        Poly.var(1, 0) + Poly.var(2, 0)


@given(P, circle_forms(M))
def test_substitute_x_at_pole_kills_the_form(p, l):
    pole = l.pole()
    assert l.to_poly().substitute_x(pole).is_zero()
    assert (p * l.to_poly()).substitute_x(pole).is_zero()


def test_substitute_x_example():
    p = parse_poly("X^2 + X*Y1 + Y2", 2)
    l = LinForm([1, 2, 0])  # pole at X = -2*Y1
    assert p.substitute_x(l.pole()) == parse_poly("2*Y1^2 + Y2", 2)


def test_derivative_x():
    p = parse_poly("X^3*Y1 + 2*X + Y2", 2)
    assert p.derivative_x() == parse_poly("3*X^2*Y1 + 2", 2)


def test_linear_substitute_changes_ring():
    p = parse_poly("X*Y1", 1)
    images = [parse_poly("X + Y2", 2), parse_poly("Y1", 2)]
    assert p.linear_substitute(images) == parse_poly("X*Y1 + Y1*Y2", 2)


class TestLinForm:
    def test_canonical_is_primitive_and_positive(self):
        s, l0 = LinForm([Fraction(-2, 3), Fraction(4, 3)]).canonical()
        assert l0.coeffs == (1, -2)
        assert s == Fraction(-2, 3)

    @given(any_forms(M))
    def test_canonical_reconstructs(self, l):
        s, l0 = l.canonical()
        assert l0 * s == l
        assert l0.canonical() == (1, l0)

    def test_zero_form_rejected(self):
        with pytest.raises(ValueError):
            LinForm([0, 0])

    def test_pole_at_origin(self):
        assert LinForm([3, 0]).pole() is None
        with pytest.raises(ValueError):
            LinForm([0, 1]).pole()


class TestExactDivision:
    @given(P, any_forms(M))
    def test_divide_multiple(self, q, l):
        f = q * l.to_poly()
        assert exact_divide_linear(f, l) == q

    @given(P, any_forms(M), st.integers(1, 5))
    def test_constant_perturbation_not_divisible(self, q, l, c):
        f = q * l.to_poly() + c
        assert exact_divide_linear(f, l) is None

    def test_divides_product_with_multiplicities(self):
        l1, l2 = LinForm([1, 1, 0]), LinForm([1, 0, -1])
        g = l1.to_poly() ** 2 * l2.to_poly()
        q = parse_poly("X + Y1*Y2", 2)
        assert divides_product(q * g, [(l1, 2), l2]) == q
        assert divides_product(q * l1.to_poly() * l2.to_poly(), [(l1, 2), l2]) is None


class TestFactoredRational:
    def test_normalize_cancels(self):
        l = LinForm([1, 1])
        h = FactoredRational(l.to_poly() * Poly.var(1, 1), [(l, 2)])
        r = h.normalize()
        assert r.den == ((l, 1),)
        assert r.num == Poly.var(1, 1)

    def test_scalars_absorbed(self):
        h = FactoredRational(Poly.one(1), [LinForm([-2, 0])])
        assert h.den == ((LinForm([1, 0]), 1),)
        assert h.num == Fraction(-1, 2)

    @given(P, P, circle_forms(M), circle_forms(M))
    @settings(max_examples=50)
    def test_addition_matches_cross_multiplication(self, a, b, l1, l2):
        lhs = FactoredRational(a, [l1]) + FactoredRational(b, [l2])
        rhs = FactoredRational(a * l2.to_poly() + b * l1.to_poly(), [l1, l2])
        assert lhs == rhs

    @given(P, circle_forms(M))
    @settings(max_examples=50)
    def test_derivative_quotient_rule(self, a, l):
        h = FactoredRational(a, [(l, 2)])
        d = h.derivative_x()
        lp = l.to_poly()
        want = FactoredRational(a.derivative_x() * lp - a.scale(2 * l.m_coeff), [(l, 3)])
        assert d == want

    def test_substitution_through_pole_raises(self):
        l = LinForm([1, -1])
        with pytest.raises(ZeroDivisionError):
            FactoredRational(Poly.one(1), [l]).substitute_x(l.pole())
