"""Canonical classes, the split of a class across the reduction level, and kernel decisions.

Fixed points are ordered by their moment value ``f(F)``.  The negative
normal bundle at ``F`` is spanned by the weight spaces whose weight has a
negative X-coefficient, so ``e(nu^- F)`` is the product of those weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Mapping

from .algebra import FactoredRational, LinForm, Poly, divides_product
from .errors import NotInSpan, SpaceError, TiedMomentValues
from .localization import (
    EquivClass,
    FixedPoint,
    Space,
    pairing,
    split_fixed_points,
)
from .residue import res_plus

__all__ = [
    "CanonicalBasis",
    "BasisReport",
    "Decomposition",
    "KernelVerdict",
    "CriterionResult",
    "negative_euler",
    "positive_euler",
    "validate_basis",
    "expand_in_basis",
    "decompose",
    "kernel_test",
    "divisibility_witness",
    "residue_criterion",
    "monomials",
    "probe_classes",
]


def _prod(forms: Iterable[LinForm], m: int) -> Poly:
    out = Poly.one(m)
    for w in forms:
        out = out * w.to_poly()
    return out


def negative_euler(point: FixedPoint) -> Poly:
    """Euler class of the downward normal bundle at ``point``."""
    return _prod(point.negative_weights, point.weights[0].m)


def positive_euler(point: FixedPoint) -> Poly:
    return _prod(point.positive_weights, point.weights[0].m)


@dataclass(frozen=True)
class CanonicalBasis:
    """The families ``alpha_minus(F)`` and ``alpha_plus(F)`` keyed by fixed point label."""

    alpha_minus: Mapping[str, EquivClass]
    alpha_plus: Mapping[str, EquivClass]


@dataclass
class BasisReport:
    ok: bool = True
    violations: list[dict] = field(default_factory=list)

    def add(self, kind, family, f, g=None, detail=""):
        self.ok = False
        self.violations.append(
            {"kind": kind, "family": family, "F": f, "G": g, "detail": detail}
        )

    def as_dict(self):
        return {"ok": self.ok, "violations": list(self.violations)}


def validate_basis(space: Space, basis: CanonicalBasis) -> BasisReport:
    """Check triangularity and diagonal normalization of both families."""
    report = BasisReport()
    for family, classes, diag, below in (
        ("alpha_minus", basis.alpha_minus, negative_euler, True),
        ("alpha_plus", basis.alpha_plus, positive_euler, False),
    ):
        for f in space.points:
            cls = classes.get(f.label)
            if cls is None:
                report.add("missing", family, f.label)
                continue
            missing = [g for g in space.labels if g not in cls.restrictions]
            if missing:
                report.add("not_total", family, f.label, detail=",".join(missing))
                continue
            want = diag(f)
            if cls[f.label] != want:
                report.add(
                    "diagonal", family, f.label, f.label,
                    f"restriction {cls[f.label]} differs from Euler factor {want}",
                )
            for g in space.points:
                vanishing = g.moment < f.moment if below else g.moment > f.moment
                if vanishing and not cls[g.label].is_zero():
                    report.add(
                        "triangularity", family, f.label, g.label,
                        f"restriction at {g.label} is {cls[g.label]}, expected 0",
                    )
    return report


def _require_distinct_moments(points: list[FixedPoint]):
    for a, b in zip(points, points[1:]):
        if a.moment == b.moment:
            tied = [p.label for p in points if p.moment == a.moment]
            raise TiedMomentValues(tied, a.moment)


def expand_in_basis(space: Space, basis: CanonicalBasis, eta: EquivClass) -> dict[str, Poly]:
    """Polynomial coefficients ``p_F`` with ``eta = sum_F p_F alpha_minus(F)``.

    Solved by back-substitution in increasing moment order; raises
    :class:`NotInSpan` when some remainder is not divisible by the downward
    Euler class.
    """
    ordered = space.by_moment()
    _require_distinct_moments(ordered)
    remainder = {lbl: eta[lbl] for lbl in space.labels}
    coeffs = {}
    for f in ordered:
        r = remainder[f.label]
        if r.is_zero():
            coeffs[f.label] = r
            continue
        q = divides_product(r, f.negative_weights)
        if q is None:
            raise NotInSpan(
                f"class {eta.name!r}: remainder {r} at {f.label} is not divisible by "
                f"{negative_euler(f)}; not a polynomial combination of the basis"
            )
        coeffs[f.label] = q
        alpha = basis.alpha_minus[f.label]
        for g in space.labels:
            a = alpha[g]
            if not a.is_zero():
                remainder[g] = remainder[g] - q * a
    assert all(v.is_zero() for v in remainder.values())
    return coeffs


def _restrict(
    space: Space, basis: CanonicalBasis, coeffs: Mapping[str, FactoredRational]
) -> dict[str, FactoredRational]:
    m = space.num_y_vars
    out = {}
    for g in space.labels:
        total = FactoredRational.from_poly(Poly.zero(m))
        for f, c in coeffs.items():
            a = basis.alpha_minus[f][g]
            if not a.is_zero() and not c.is_zero():
                total = total + c * a
        out[g] = total.normalize()
    return out


@dataclass
class Decomposition:
    """``eta = eta_minus + eta_plus`` over the ``alpha_minus`` basis.

    ``expansion`` holds the initial polynomial coefficients ``p_F``;
    ``corrections`` the rational functions ``r_F`` moved from the lower to the
    upper part at each ``F`` above the level; ``plus_coeffs`` the resulting
    coefficients of ``eta_plus`` (each ``p_F + r_F``, normalized).
    Restrictions of both parts to every fixed point are included.
    """

    expansion: dict[str, Poly]
    corrections: dict[str, FactoredRational]
    minus_coeffs: dict[str, FactoredRational]
    plus_coeffs: dict[str, FactoredRational]
    eta_minus: dict[str, FactoredRational]
    eta_plus: dict[str, FactoredRational]
    plus_order: list[str]

    def check(self, space: Space, eta: EquivClass) -> list[str]:
        """Return a list of violated contract conditions (empty when sound)."""
        problems = []
        minus, plus = split_fixed_points(space)
        for p in space.points:
            total = self.eta_minus[p.label] + self.eta_plus[p.label]
            if total != eta[p.label]:
                problems.append(f"eta_minus + eta_plus != eta at {p.label}")
        for p in minus:
            if not self.eta_plus[p.label].is_zero():
                problems.append(f"eta_plus does not vanish at {p.label}")
        for p in plus:
            if not self.eta_minus[p.label].is_zero():
                problems.append(f"eta_minus does not vanish at {p.label}")
        for lbl, r in self.corrections.items():
            for l, _ in r.den:
                if not l.m_coeff:
                    problems.append(f"correction at {lbl} has pure-Y factor {l}")
        return problems


def decompose(space: Space, basis: CanonicalBasis, eta: EquivClass) -> Decomposition:
    """Split ``eta`` into parts vanishing below and above the level 0.

    After expanding ``eta`` over ``alpha_minus``, the part supported below
    the level is corrected point by point, in increasing moment order over
    ``F_+``: its restriction at ``F_k`` is divided by ``e(nu^- F_k)`` and that
    multiple of ``alpha_minus(F_k)`` is transferred to the upper part.
    """
    report = validate_basis(space, basis)
    if not report.ok:
        v = report.violations[0]
        raise SpaceError(f"invalid canonical basis: {v['kind']} {v['family']}({v['F']}) at {v['G']}")
    minus, plus = split_fixed_points(space)
    _require_distinct_moments(plus)
    expansion = expand_in_basis(space, basis, eta)
    m = space.num_y_vars
    as_fr = FactoredRational.from_poly
    minus_coeffs = {p.label: as_fr(expansion[p.label]) for p in minus}
    plus_coeffs = {p.label: as_fr(expansion[p.label]) for p in plus}
    lower = {g: as_fr(Poly.zero(m)) for g in space.labels}
    for f, c in minus_coeffs.items():
        if not c.is_zero():
            for g in space.labels:
                a = basis.alpha_minus[f][g]
                if not a.is_zero():
                    lower[g] = lower[g] + c * a
    corrections = {}
    for f in plus:
        at_f = lower[f.label].normalize()
        r = at_f.divide_by(f.negative_weights).normalize()
        corrections[f.label] = r
        if r.is_zero():
            continue
        minus_coeffs[f.label] = -r
        plus_coeffs[f.label] = (plus_coeffs[f.label] + r).normalize()
        alpha = basis.alpha_minus[f.label]
        for g in space.labels:
            a = alpha[g]
            if not a.is_zero():
                lower[g] = lower[g] - r * a
        assert lower[f.label].normalize().is_zero()
    return Decomposition(
        expansion=expansion,
        corrections=corrections,
        minus_coeffs={k: v.normalize() for k, v in minus_coeffs.items()},
        plus_coeffs=plus_coeffs,
        eta_minus={g: v.normalize() for g, v in lower.items()},
        eta_plus=_restrict(space, basis, plus_coeffs),
        plus_order=[p.label for p in plus],
    )


def monomials(m: int, max_degree: int, min_degree: int = 0) -> list[Poly]:
    """All monic monomials in X, Y1..Ym with degree in ``[min_degree, max_degree]``."""
    out = []
    for d in range(min_degree, max_degree + 1):
        for combo in combinations_with_replacement(range(m + 1), d):
            e = [0] * (m + 1)
            for i in combo:
                e[i] += 1
            out.append(Poly.monomial(e))
    return out


def _cofactor(h: FactoredRational) -> Poly:
    """Product of the reduced denominator of ``h`` with one factor removed."""
    (l0, k0), rest = h.den[0], list(h.den[1:])
    if k0 > 1:
        rest.append((l0, k0 - 1))
    out = Poly.one(h.m)
    for l, k in rest:
        out = out * l.to_poly() ** k
    return out


def divisibility_witness(
    f: Poly, factors, max_monomial_degree: int | None = None
) -> tuple[Poly, FactoredRational] | None:
    """Exhibit ``p`` with ``Res_X^+(p*f/g) != 0`` when ``g = prod(factors)`` does not divide ``f``.

    Returns ``None`` if ``g`` divides ``f``.  The fraction is reduced first;
    ``p`` is the product of all remaining denominator factors but one,
    times a monomial drawn from a bounded family.
    """
    h = FactoredRational(f, factors).normalize()
    if not h.den:
        return None
    cofactor = _cofactor(h)
    bound = h.pole_multiplicity() if max_monomial_degree is None else max_monomial_degree
    for mono in monomials(h.m, bound):
        p = cofactor * mono
        value = res_plus(h * p)
        if not value.is_zero():
            return p, value
    raise AssertionError(f"no residue witness found for {h}")


@dataclass
class KernelVerdict:
    name: str
    in_kernel: bool
    decomposition: Decomposition
    xi_plus: EquivClass | None = None
    xi_minus: EquivClass | None = None
    witness_point: str | None = None
    witness_poly: Poly | None = None
    witness_class: EquivClass | None = None
    witness_value: FactoredRational | None = None
    witness_coefficient: FactoredRational | None = None


def kernel_test(space: Space, basis: CanonicalBasis, eta: EquivClass) -> KernelVerdict:
    """Decide whether ``eta`` lies in the kernel of the equivariant Kirwan map.

    In the kernel, ``eta = xi_plus + xi_minus`` with ``xi_plus`` vanishing on
    ``F_-`` and ``xi_minus`` vanishing on ``F_+``.  Otherwise a test class
    ``zeta = p * alpha_plus(F_k)`` is returned with nonzero pairing against ``eta``.
    """
    dec = decompose(space, basis, eta)
    m = space.num_y_vars
    poly_coeffs = {}
    for lbl in dec.plus_order:
        c = dec.plus_coeffs[lbl]
        q = divides_product(c.num, c.den)
        if q is not None:
            poly_coeffs[lbl] = q
            continue
        witness = _nonkernel_witness(space, basis, eta, lbl, c)
        witness.decomposition = dec
        return witness
    xi_plus = {}
    for g in space.labels:
        total = Poly.zero(m)
        for f, q in poly_coeffs.items():
            a = basis.alpha_minus[f][g]
            if not a.is_zero() and not q.is_zero():
                total = total + q * a
        xi_plus[g] = total
    xi_minus = {g: eta[g] - xi_plus[g] for g in space.labels}
    minus, plus = split_fixed_points(space)
    assert all(xi_plus[p.label].is_zero() for p in minus)
    assert all(xi_minus[p.label].is_zero() for p in plus)
    return KernelVerdict(
        name=eta.name,
        in_kernel=True,
        decomposition=dec,
        xi_plus=EquivClass(f"{eta.name}_plus", eta.degree, xi_plus),
        xi_minus=EquivClass(f"{eta.name}_minus", eta.degree, xi_minus),
    )


def _nonkernel_witness(space, basis, eta, label, coeff) -> KernelVerdict:
    h = coeff.normalize()
    cofactor = _cofactor(h)
    alpha = basis.alpha_plus[label]
    for mono in monomials(space.num_y_vars, h.pole_multiplicity()):
        p = cofactor * mono
        zeta = alpha.scaled(p, name=f"({p})*alpha_plus[{label}]")
        value = pairing(space, eta, zeta)
        if not value.is_zero():
            return KernelVerdict(
                name=eta.name,
                in_kernel=False,
                decomposition=None,
                witness_point=label,
                witness_poly=p,
                witness_class=zeta,
                witness_value=value,
                witness_coefficient=h,
            )
    raise AssertionError(
        f"coefficient {h} at {label} is not polynomial but no test class pairs "
        "nontrivially; the supplied basis is probably not a genuine one"
    )


@dataclass
class CriterionResult:
    ok: bool
    checked: int
    failing: str | None = None
    value: FactoredRational | None = None


def residue_criterion(space: Space, eta: EquivClass, zetas: Iterable[EquivClass]) -> CriterionResult:
    """Check that ``eta`` pairs to zero with every supplied class.

    A nonzero pairing proves ``eta`` is not in the kernel.  Acceptance is
    only as strong as the span of ``zetas``; use :func:`kernel_test` for a
    decision.
    """
    n = 0
    for zeta in zetas:
        n += 1
        value = pairing(space, eta, zeta)
        if not value.is_zero():
            return CriterionResult(False, n, zeta.name, value)
    return CriterionResult(True, n)


def probe_classes(basis: CanonicalBasis, m: int, max_degree: int, which=("alpha_minus", "alpha_plus")):
    """Basis classes times monomials of degree at most ``max_degree``."""
    out = []
    mons = monomials(m, max_degree)
    for fam in which:
        for lbl, cls in sorted(getattr(basis, fam).items()):
            for mono in mons:
                out.append(cls.scaled(mono, name=f"({mono})*{fam}[{lbl}]"))
    return out

