"""Fixed-point data, equivariant classes and localization sums.

A :class:`Space` is the complete fixed-point dataset of a Hamiltonian torus
action with isolated fixed points: for every fixed point its moment value
along the distinguished circle and its tangent weights.  Classes are stored
as their restrictions to the fixed points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import FactoredRational, LinForm, Poly
from .errors import NonRegularValue, SpaceError
from .residue import res_plus

__all__ = [
    "FixedPoint",
    "Space",
    "EquivClass",
    "ClassReport",
    "split_fixed_points",
    "euler_class",
    "euler_product",
    "abbv_sum",
    "is_polynomial",
    "pairing",
    "validate_class",
    "product_class",
    "constant_class",
]


@dataclass(frozen=True)
class FixedPoint:
    label: str
    moment: Fraction
    weights: tuple[LinForm, ...]

    def __post_init__(self):
        object.__setattr__(self, "moment", Fraction(self.moment))
        object.__setattr__(self, "weights", tuple(sorted(self.weights)))
        if not self.weights:
            raise SpaceError(f"fixed point {self.label!r} has no tangent weights")
        for w in self.weights:
            if not w.m_coeff:
                raise SpaceError(
                    f"weight {w} at {self.label!r} vanishes on the circle; "
                    "the fixed point is not isolated for the circle action"
                )

    @property
    def negative_weights(self) -> tuple[LinForm, ...]:
        return tuple(w for w in self.weights if w.m_coeff < 0)

    @property
    def positive_weights(self) -> tuple[LinForm, ...]:
        return tuple(w for w in self.weights if w.m_coeff > 0)


@dataclass(frozen=True)
class Space:
    """Fixed-point data (points, moments along the circle, tangent weights).

    ``shift`` is added to every moment at construction, since moment maps are
    only defined up to a constant.  ``allow_one_sided`` disables the check that
    both sides of the reduction level are populated.
    """

    num_y_vars: int
    dim_half: int
    points: tuple[FixedPoint, ...]
    shift: Fraction = Fraction(0)
    allow_one_sided: bool = False

    def __post_init__(self):
        shift = Fraction(self.shift)
        pts = tuple(self.points)
        if shift:
            pts = tuple(FixedPoint(p.label, p.moment + shift, p.weights) for p in pts)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "shift", Fraction(0))
        labels = [p.label for p in pts]
        if len(set(labels)) != len(labels):
            raise SpaceError("fixed point labels must be unique")
        if not pts:
            raise SpaceError("space has no fixed points")
        for p in pts:
            if len(p.weights) != self.dim_half:
                raise SpaceError(
                    f"{p.label!r} has {len(p.weights)} weights, expected {self.dim_half}"
                )
            if any(w.m != self.num_y_vars for w in p.weights):
                raise SpaceError(f"weights at {p.label!r} have the wrong variable count")
        zero = [p.label for p in pts if p.moment == 0]
        if zero:
            raise NonRegularValue(
                f"moment vanishes at {', '.join(zero)}: 0 is not a regular value"
            )
        if not self.allow_one_sided:
            if all(p.moment > 0 for p in pts) or all(p.moment < 0 for p in pts):
                raise SpaceError("all fixed points lie on one side of the level 0")

    @property
    def labels(self) -> list[str]:
        return [p.label for p in self.points]

    def point(self, label: str) -> FixedPoint:
        for p in self.points:
            if p.label == label:
                return p
        raise KeyError(label)

    def by_moment(self) -> list[FixedPoint]:
        return sorted(self.points, key=lambda p: (p.moment, p.label))

    def poly_one(self) -> Poly:
        return Poly.one(self.num_y_vars)


@dataclass(frozen=True)
class EquivClass:
    """An equivariant class, recorded as its restriction to every fixed point."""

    name: str
    degree: int
    restrictions: Mapping[str, Poly] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "restrictions", dict(self.restrictions))

    def __getitem__(self, label: str) -> Poly:
        return self.restrictions[label]

    def scaled(self, p: Poly, name: str | None = None) -> "EquivClass":
        """Multiply by an element of the coefficient ring H(pt)."""
        deg = self.degree + (p.degree() if p.is_homogeneous() and not p.is_zero() else 0)
        return EquivClass(
            name or f"({p})*{self.name}",
            deg,
            {k: v * p for k, v in self.restrictions.items()},
        )

    def __add__(self, other: "EquivClass") -> "EquivClass":
        return EquivClass(
            f"{self.name}+{other.name}",
            self.degree,
            {k: v + other.restrictions[k] for k, v in self.restrictions.items()},
        )

    def __sub__(self, other: "EquivClass") -> "EquivClass":
        return EquivClass(
            f"{self.name}-{other.name}",
            self.degree,
            {k: v - other.restrictions[k] for k, v in self.restrictions.items()},
        )


def constant_class(space: Space, value=1, name: str = "1") -> EquivClass:
    c = Poly.const(space.num_y_vars, value)
    return EquivClass(name, 0, {lbl: c for lbl in space.labels})


def product_class(eta: EquivClass, zeta: EquivClass, name: str | None = None) -> EquivClass:
    return EquivClass(
        name or f"{eta.name}*{zeta.name}",
        eta.degree + zeta.degree,
        {k: v * zeta.restrictions[k] for k, v in eta.restrictions.items()},
    )


def split_fixed_points(space: Space) -> tuple[list[FixedPoint], list[FixedPoint]]:
    """``(F_minus, F_plus)``, each sorted by increasing moment."""
    ordered = space.by_moment()
    zero = [p.label for p in ordered if p.moment == 0]
    if zero:
        raise NonRegularValue(f"moment vanishes at {', '.join(zero)}")
    return [p for p in ordered if p.moment < 0], [p for p in ordered if p.moment > 0]


def euler_class(point: FixedPoint) -> FactoredRational:
    """Reciprocal ``1/prod(weights)`` of the equivariant Euler class."""
    return FactoredRational(Poly.one(point.weights[0].m), point.weights)


def euler_product(point: FixedPoint) -> Poly:
    """The Euler class itself, as the product of the tangent weights."""
    out = Poly.one(point.weights[0].m)
    for w in point.weights:
        out = out * w.to_poly()
    return out


def _check_total(space: Space, eta: EquivClass):
    missing = [lbl for lbl in space.labels if lbl not in eta.restrictions]
    if missing:
        raise SpaceError(f"class {eta.name!r} has no restriction at {', '.join(missing)}")


def abbv_sum(space: Space, eta: EquivClass) -> FactoredRational:
    """Sum over all fixed points of ``eta|_F / e_F``, normalized."""
    _check_total(space, eta)
    total = FactoredRational.from_poly(Poly.zero(space.num_y_vars))
    for p in space.points:
        total = total + euler_class(p) * eta[p.label]
    return total.normalize()


def is_polynomial(h: FactoredRational) -> bool:
    return h.is_polynomial()


def _pairing_terms(space: Space, restrictions: Mapping[str, Poly]) -> FactoredRational:
    _, plus = split_fixed_points(space)
    total = FactoredRational.from_poly(Poly.zero(space.num_y_vars))
    for p in plus:
        r = restrictions[p.label]
        if not r.is_zero():
            total = total + res_plus(euler_class(p) * r)
    return total.normalize()


def pairing(space: Space, eta: EquivClass, zeta: EquivClass | None = None) -> FactoredRational:
    """Reduction pairing ``sum_{F in F_+} Res_X^+ (eta*zeta)|_F / e_F``.

    The overall constant of the residue formula is normalized to 1.  For
    genuine classes the value is a polynomial in the Y variables; check with
    ``result.is_polynomial()``.
    """
    _check_total(space, eta)
    if zeta is None:
        return _pairing_terms(space, eta.restrictions)
    _check_total(space, zeta)
    return _pairing_terms(
        space, {lbl: eta[lbl] * zeta[lbl] for lbl in space.labels}
    )


@dataclass
class ClassReport:
    ok: bool
    name: str
    problems: list[str] = field(default_factory=list)
    failing_witness: str | None = None

    def as_dict(self):
        return {
            "class": self.name,
            "ok": self.ok,
            "problems": list(self.problems),
            "failing_witness": self.failing_witness,
        }


def validate_class(
    space: Space, eta: EquivClass, witnesses: Iterable[EquivClass] = ()
) -> ClassReport:
    """Necessary conditions for ``eta`` to be a genuine equivariant class.

    Checks totality, homogeneity of every restriction in ``eta.degree`` and
    polynomiality of the localization sum of ``eta * w`` for the constant
    class and every supplied witness ``w``.
    """
    report = ClassReport(True, eta.name)
    missing = [lbl for lbl in space.labels if lbl not in eta.restrictions]
    if missing:
        report.ok = False
        report.problems.append(f"no restriction at {', '.join(missing)}")
        return report
    for lbl in space.labels:
        r = eta[lbl]
        if r.m != space.num_y_vars:
            report.ok = False
            report.problems.append(f"restriction at {lbl} has the wrong variable count")
            return report
        if not r.is_homogeneous(eta.degree):
            report.ok = False
            report.problems.append(f"restriction at {lbl} is not homogeneous of degree {eta.degree}")
    for w in [constant_class(space), *witnesses]:
        s = abbv_sum(space, product_class(eta, w))
        if s.den:
            report.ok = False
            report.failing_witness = w.name
            report.problems.append(f"localization sum against {w.name!r} is not polynomial: {s}")
            break
    return report
