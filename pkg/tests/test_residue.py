from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kirwanres import FactoredRational, LinForm, PoleOnCircleAxis, Poly, parse_fraction, parse_poly, res_gk, res_plus
from kirwanres.residue import residue_at
from strategies import circle_forms, fractions_with_circle_poles, nonzero_rationals, polys, rationals


def R(text, m=2):
    return parse_fraction(text, m)


def P(text, m=2):
    return FactoredRational.from_poly(parse_poly(text, m))


@pytest.mark.parametrize(
    "text, m, expected",
    [
        ("1/(X+2*Y1)", 1, "1"),
        ("1/((X+Y1)*(X-Y1))", 1, "0"),
        ("X/((X+Y1)*(X-Y1))", 1, "1"),
        ("1/X^2", 0, "0"),
        ("1/(-X)", 0, "-1"),
        ("Y1/(X-Y1)", 1, "Y1"),
        # Laurent expansion at infinity by hand: (1/2)(1 - 2Y1/X)(1 + Y2/(2X)) -> -Y1 + Y2/4
        ("X^3/((X+Y1)^2*(2*X-Y2))", 2, "-Y1 + 1/4*Y2"),
        ("X^2+Y1", 1, "0"),
    ],
)
def test_known_values(text, m, expected):
    h = parse_fraction(text, m)
    want = FactoredRational.from_poly(parse_poly(expected, m))
    assert res_plus(h) == want
    assert res_gk(h) == want


@given(st.lists(rationals, min_size=0, max_size=4), nonzero_rationals)
def test_single_simple_pole(beta, a):
    l = LinForm([a, *beta])
    h = FactoredRational(Poly.one(len(beta)), [l])
    assert res_plus(h) == FactoredRational.from_poly(Poly.const(len(beta), 1 / a))


def _specialize(p: Poly, ys) -> Poly:
    return p.linear_substitute([Poly.var(0, 0)] + [Poly.const(0, y) for y in ys])


def _eval_univariate(p: Poly, x) -> Fraction:
    return sum((c * x ** e[0] for e, c in p.terms.items()), Fraction(0))


@given(
    polys(2, 4, 5),
    st.lists(circle_forms(2), min_size=1, max_size=3, unique=True),
    st.lists(rationals, min_size=2, max_size=2),
)
@settings(max_examples=60)
def test_simple_poles_against_pointwise_limit(num, forms, ys):
    """Sum of (x - a) h(x) at each pole, evaluated after fixing the Y's."""
    canon = {l.canonical()[1] for l in forms}
    assume(len(canon) == len(forms))
    poles = [-sum(b * y for b, y in zip(l.beta, ys)) / l.m_coeff for l in forms]
    assume(len(set(poles)) == len(poles))
    expected = Fraction(0)
    for i, (l, a) in enumerate(zip(forms, poles)):
        value = _eval_univariate(_specialize(num, ys), a) / l.m_coeff
        for j, other in enumerate(forms):
            if j != i:
                value /= other.m_coeff * a + sum(b * y for b, y in zip(other.beta, ys))
        expected += value
    got = res_plus(FactoredRational(num, forms)).as_poly()
    assert _specialize(got, ys).constant_term() == expected


@given(fractions_with_circle_poles(2, max_factors=3))
@settings(max_examples=80)
def test_two_residue_operators_agree(h):
    assert res_plus(h) == res_gk(h)


@given(fractions_with_circle_poles(1, max_factors=2), fractions_with_circle_poles(1, max_factors=2), rationals)
@settings(max_examples=40)
def test_linearity(h1, h2, c):
    assert res_plus(h1 * c + h2) == res_plus(h1) * c + res_plus(h2)


@given(fractions_with_circle_poles(1, max_factors=3))
@settings(max_examples=40)
def test_result_is_polynomial(h):
    assert res_plus(h).is_polynomial()


@given(polys(1, 3), circle_forms(1))
@settings(max_examples=40)
def test_polynomial_multiple_has_no_residue(q, l):
    h = FactoredRational(q * l.to_poly(), [l])
    assert res_plus(h).is_zero()


def test_higher_order_pole_uses_derivative():
    # residue of X^2/(X-Y1)^3 at X = Y1 is the second derivative / 2 = 1
    h = R("X^2/(X-Y1)^3", 1)
    assert residue_at(h, LinForm([1, -1])) == P("1", 1)


def test_pure_y_factor_rejected():
    h = FactoredRational(Poly.one(1), [LinForm([0, 1])])
    with pytest.raises(PoleOnCircleAxis):
        res_plus(h)
    with pytest.raises(PoleOnCircleAxis):
        res_gk(h)
