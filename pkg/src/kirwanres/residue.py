"""Residue operators in the circle variable X.

``res_plus`` sums the residues of ``h(X) dX`` over every finite pole, treating
the Y variables as constants.  ``res_gk`` instead expands every factor
``1/(m X + b(Y))`` as a geometric series in ``1/X`` and reads off the total
coefficient of ``X^-1``.  Both agree because the residues of a rational
1-form on the Riemann sphere sum to zero; the test-suite checks this
identity on random input, so neither implementation relies on the other.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .algebra import FactoredRational, LinForm, Poly
from .errors import PoleOnCircleAxis

__all__ = ["res_plus", "res_gk", "residue_at"]


def _check_poles(h: FactoredRational):
    for l, _ in h.den:
        if not l.m_coeff:
            raise PoleOnCircleAxis(
                f"denominator factor {l} has no X term; Res_X^+ is undefined"
            )


def residue_at(h: FactoredRational, factor: LinForm) -> FactoredRational:
    """Residue of ``h dX`` at the zero of ``factor`` (a canonical factor of ``h``)."""
    den = dict(h.den)
    a = den.pop(factor)
    pole = factor.pole()
    mc = factor.m_coeff
    # h = N / (mc^a (X - c)^a g)  =>  Res = 1/(a-1)! d^{a-1}/dX^{a-1} [N/(mc^a g)] at c
    g = FactoredRational._raw(h.num.scale(Fraction(1) / mc**a), tuple(sorted(den.items())))
    if a == 1:
        return g.substitute_x(pole)
    for _ in range(a - 1):
        g = g.derivative_x()
    return g.substitute_x(pole) * Fraction(1, factorial(a - 1))


def res_plus(h: FactoredRational) -> FactoredRational:
    """Sum of residues of ``h dX`` over all finite poles in X."""
    _check_poles(h)
    total = FactoredRational.from_poly(Poly.zero(h.m))
    if h.is_zero():
        return total
    # factors are stored primitive, so distinct factors have distinct poles
    for factor, _ in h.den:
        total = total + residue_at(h, factor)
    return total.normalize()


def _series_inverse(l: LinForm, order: int, m: int) -> list[Poly]:
    """Coefficients s_j with ``1/(mX + b) = (1/(mX)) * sum_j s_j X^-j``."""
    ratio = l.substitute_x(None)  # b(Y), or None when b == 0
    q = Poly.zero(m) if ratio is None else ratio.to_poly().scale(-1 / l.m_coeff)
    out = [Poly.one(m)]
    for _ in range(order):
        out.append(out[-1] * q)
    return out


def _truncated_product(a: list[Poly], b: list[Poly], order: int) -> list[Poly]:
    m = a[0].m
    out = [Poly.zero(m) for _ in range(order + 1)]
    for i, x in enumerate(a[: order + 1]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            out[i + j] = out[i + j] + x * y
    return out


def res_gk(h: FactoredRational) -> FactoredRational:
    """Total coefficient of ``X^-1`` after expanding every factor at X = infinity."""
    _check_poles(h)
    m = h.m
    if h.is_zero():
        return FactoredRational.from_poly(Poly.zero(m))
    total_mult = sum(k for _, k in h.den)
    parts = h.num.collect(0)
    # a numerator term X^e meets series order J in X^(e - total_mult - J);
    # X^-1 needs J = e - total_mult + 1, so J never exceeds this bound
    order = h.num.x_degree() - total_mult + 1
    if order < 0:
        return FactoredRational.from_poly(Poly.zero(m))
    series = [Poly.one(m)] + [Poly.zero(m)] * order
    lead = Fraction(1)
    for l, k in h.den:
        lead *= l.m_coeff**k
        s = _series_inverse(l, order, m)
        for _ in range(k):
            series = _truncated_product(series, s, order)
    result = Poly.zero(m)
    for e, coeff in parts.items():
        j = e - total_mult + 1
        if 0 <= j <= order:
            result = result + coeff * series[j]
    return FactoredRational.from_poly(result.scale(1 / lead))
