"""Verified example spaces and generic circle selection.

Torus-level data uses integer character vectors; torus-level classes are
polynomials in the coordinate characters t_1..t_r (stored as ``Poly`` in
``r`` variables).  A :class:`CircleChoice` rewrites everything into the
coordinates (X, Y1..Y_{r-1}) where X restricts to the generator of the
circle and every Y vanishes on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .algebra import LinForm, Poly
from .errors import SearchExhausted, SpaceError
from .localization import EquivClass, FixedPoint, Space, constant_class
from .morse import CanonicalBasis, validate_basis

__all__ = [
    "TorusPoint",
    "TorusSpace",
    "CircleChoice",
    "ToricFixture",
    "cpn_space",
    "product_space",
    "space_from_recipe",
    "generic_circle",
    "default_shift",
    "unimodular_completion",
    "to_circle_space",
    "canonical_classes",
    "build_fixture",
]


@dataclass(frozen=True)
class TorusPoint:
    label: str
    moment: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "moment", tuple(Fraction(x) for x in self.moment))
        object.__setattr__(self, "weights", tuple(tuple(int(c) for c in w) for w in self.weights))


@dataclass(frozen=True)
class TorusSpace:
    """Fixed-point data of a torus action of rank ``rank``.

    ``recipe`` records how the space was built (``("cpn", n)`` or
    ``("product", recipe_a, recipe_b)``); canonical classes are derived from it.
    """

    rank: int
    points: tuple
    recipe: tuple

    def __post_init__(self):
        n = None
        for p in self.points:
            if len(p.moment) != self.rank:
                raise SpaceError(f"moment of {p.label} has wrong length")
            for w in p.weights:
                if len(w) != self.rank or not any(w):
                    raise SpaceError(f"bad weight {w} at {p.label}")
            if n is None:
                n = len(p.weights)
            elif n != len(p.weights):
                raise SpaceError("all fixed points need the same number of weights")


def _char(vec, r) -> Poly:
    """Linear polynomial sum(vec_i * t_i) in ``r`` variables."""
    terms = {}
    for i, c in enumerate(vec):
        if c:
            e = [0] * r
            e[i] = 1
            terms[tuple(e)] = c
    return Poly(r - 1, terms)


def cpn_space(n: int) -> TorusSpace:
    """CP^n with the standard rank-n torus (characters Lambda_0 = 0, Lambda_i = e_i)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    lam = [tuple(0 for _ in range(n))] + [
        tuple(1 if k == i else 0 for k in range(n)) for i in range(n)
    ]
    points = []
    for i in range(n + 1):
        weights = [tuple(a - b for a, b in zip(lam[j], lam[i])) for j in range(n + 1) if j != i]
        points.append(TorusPoint(f"p{i}", lam[i], weights))
    return TorusSpace(n, tuple(points), ("cpn", n))


def product_space(a: TorusSpace, b: TorusSpace) -> TorusSpace:
    """Product action of the product torus; labels are joined with a comma."""
    za = (0,) * a.rank
    zb = (0,) * b.rank
    points = []
    for p in a.points:
        for q in b.points:
            weights = [w + zb for w in p.weights] + [za + w for w in q.weights]
            points.append(TorusPoint(f"{p.label},{q.label}", p.moment + q.moment, weights))
    return TorusSpace(a.rank + b.rank, tuple(points), ("product", a.recipe, b.recipe))


def space_from_recipe(recipe) -> TorusSpace:
    kind = recipe[0]
    if kind == "cpn":
        return cpn_space(int(recipe[1]))
    if kind == "product":
        return product_space(space_from_recipe(recipe[1]), space_from_recipe(recipe[2]))
    raise ValueError(f"unknown recipe {recipe!r}")


@dataclass(frozen=True)
class CircleChoice:
    """Primitive ``xi`` and an integer unimodular matrix whose first row is ``xi``.

    Row 0 of ``completion`` gives the X-coefficient of a character, rows
    1.. its Y-coefficients.
    """

    xi: tuple
    completion: tuple

    def coordinates(self, vec) -> tuple:
        return tuple(sum(c * v for c, v in zip(row, vec)) for row in self.completion)

    def linform(self, vec) -> LinForm:
        return LinForm(self.coordinates(vec))

    def pairing(self, vec) -> Fraction:
        return sum((Fraction(x) * v for x, v in zip(self.xi, vec)), Fraction(0))

    def character_images(self) -> list[Poly]:
        """Images of t_1..t_r as linear polynomials in X, Y1..Y_{r-1}."""
        r = len(self.xi)
        return [_char([self.completion[k][i] for k in range(r)], r) for i in range(r)]


def unimodular_completion(xi) -> tuple:
    """Integer matrix with determinant +-1 and first row ``xi`` (``xi`` primitive)."""
    r = len(xi)
    if gcd(*xi) != 1:
        raise ValueError(f"{xi} is not primitive")
    v = list(xi)
    w = [[int(i == j) for j in range(r)] for i in range(r)]
    # invariant: xi == v * w; column operations on v are undone on the rows of w
    while sum(1 for x in v if x) > 1:
        i = min((k for k in range(r) if v[k]), key=lambda k: abs(v[k]))
        for j in range(r):
            if j != i and v[j]:
                q = v[j] // v[i]
                v[j] -= q * v[i]
                w[i] = [a + q * b for a, b in zip(w[i], w[j])]
    i = next(k for k in range(r) if v[k])
    if v[i] < 0:
        v[i] = -v[i]
        w[i] = [-a for a in w[i]]
    if i:
        v[0], v[i] = v[i], v[0]
        w[0], w[i] = w[i], w[0]
    assert v[0] == 1 and tuple(w[0]) == tuple(xi)
    return tuple(tuple(row) for row in w)


def _candidates(r: int, k: int):
    for vec in itertools.product(range(-k, k + 1), repeat=r):
        if max(abs(x) for x in vec) != k:
            continue
        if next(x for x in vec if x) < 0:
            continue
        if gcd(*vec) != 1:
            continue
        yield vec


def _is_generic(space: TorusSpace, xi) -> bool:
    for p in space.points:
        for w in p.weights:
            if sum(a * b for a, b in zip(w, xi)) == 0:
                return False
    values = [sum((x * m for x, m in zip(xi, p.moment)), Fraction(0)) for p in space.points]
    return len(set(values)) == len(values)


def generic_circle(space: TorusSpace, search_bound: int = 8) -> CircleChoice:
    """First generic circle in a fixed enumeration order.

    Candidates are primitive integer vectors ordered by sup-norm, then
    lexicographically, with the first nonzero entry positive (one orientation
    per circle).  Generic means every weight pairs nonzero with ``xi`` and
    the moment values along ``xi`` are pairwise distinct.
    """
    for k in range(1, search_bound + 1):
        for xi in _candidates(space.rank, k):
            if _is_generic(space, xi):
                return CircleChoice(tuple(xi), unimodular_completion(xi))
    raise SearchExhausted(f"no generic circle with entries bounded by {search_bound}")


def default_shift(values) -> Fraction:
    """Shift placing 0 midway between the two critical values straddling the median."""
    vals = sorted({Fraction(v) for v in values})
    if len(vals) < 2:
        raise SpaceError("need at least two distinct critical values to split")
    i = len(vals) // 2
    return -(vals[i - 1] + vals[i]) / 2


def to_circle_space(space: TorusSpace, choice: CircleChoice, shift) -> Space:
    points = []
    for p in space.points:
        weights = [choice.linform(w) for w in p.weights]
        points.append(FixedPoint(p.label, choice.pairing(p.moment), weights))
    return Space(space.rank - 1, len(space.points[0].weights), tuple(points), shift=Fraction(shift))


def _cpn_classes(space: TorusSpace, xi):
    r = space.rank
    value = {p.label: sum(x * m for x, m in zip(xi, p.moment)) for p in space.points}
    lam = {p.label: _char(p.moment, r) for p in space.points}
    minus, plus = {}, {}
    for f in space.points:
        below = [g.label for g in space.points if value[g.label] < value[f.label]]
        above = [g.label for g in space.points if value[g.label] > value[f.label]]
        for target, others in ((minus, below), (plus, above)):
            res = {}
            for k in space.points:
                prod = Poly.one(r - 1)
                for j in others:
                    prod = prod * (lam[j] - lam[k.label])
                res[k.label] = prod
            target[f.label] = (len(others), res)
    generators = {"h": (1, dict(lam))}
    return minus, plus, generators


def _embed(p: Poly, offset: int, r: int) -> Poly:
    images = [Poly.var(r - 1, offset + i) for i in range(p.nvars)]
    return p.linear_substitute(images)


def canonical_classes(space: TorusSpace, xi):
    """Torus-level canonical classes for the ordering induced by ``xi``.

    Returns ``(alpha_minus, alpha_plus, generators)``; each maps a name to
    ``(degree, {label: Poly in t_1..t_r})``.
    """
    recipe = space.recipe
    if recipe[0] == "cpn":
        return _cpn_classes(space, xi)
    a, b = space_from_recipe(recipe[1]), space_from_recipe(recipe[2])
    ra, r = a.rank, space.rank
    ma, pa, ga = canonical_classes(a, xi[:ra])
    mb, pb, gb = canonical_classes(b, xi[ra:])

    def combine(fa, fb):
        out = {}
        for la, (da, ca) in fa.items():
            for lb, (db, cb) in fb.items():
                res = {}
                for p in a.points:
                    ea = _embed(ca[p.label], 0, r)
                    for q in b.points:
                        res[f"{p.label},{q.label}"] = ea * _embed(cb[q.label], ra, r)
                out[f"{la},{lb}"] = (da + db, res)
        return out

    generators = {}
    for prefix, gens, factor, offset in (("L", ga, a, 0), ("R", gb, b, ra)):
        for name, (d, vals) in gens.items():
            res = {}
            for p in a.points:
                for q in b.points:
                    src = p.label if prefix == "L" else q.label
                    res[f"{p.label},{q.label}"] = _embed(vals[src], offset, r)
            generators[f"{prefix}.{name}"] = (d, res)
    return combine(ma, mb), combine(pa, pb), generators


@dataclass
class ToricFixture:
    torus: TorusSpace
    choice: CircleChoice
    shift: Fraction
    space: Space
    basis: CanonicalBasis
    classes: dict = field(default_factory=dict)


def build_fixture(torus: TorusSpace, search_bound: int = 8, shift=None) -> ToricFixture:
    """Circle space plus verified canonical basis for ``torus``.

    Raises ``SpaceError`` if the constructed basis fails validation.
    """
    choice = generic_circle(torus, search_bound)
    if shift is None:
        shift = default_shift(choice.pairing(p.moment) for p in torus.points)
    space = to_circle_space(torus, choice, shift)
    images = choice.character_images()
    minus, plus, gens = canonical_classes(torus, choice.xi)

    def convert(name, degree, vals):
        return EquivClass(name, degree, {k: v.linear_substitute(images) for k, v in vals.items()})

    basis = CanonicalBasis(
        {lbl: convert(f"alpha_minus[{lbl}]", d, v) for lbl, (d, v) in minus.items()},
        {lbl: convert(f"alpha_plus[{lbl}]", d, v) for lbl, (d, v) in plus.items()},
    )
    report = validate_basis(space, basis)
    if not report.ok:
        raise SpaceError(f"constructed basis failed validation: {report.violations[:3]}")
    classes = {"one": constant_class(space, name="one")}
    for name, (d, vals) in gens.items():
        classes[name] = convert(name, d, vals)
    return ToricFixture(torus, choice, Fraction(shift), space, basis, classes)
