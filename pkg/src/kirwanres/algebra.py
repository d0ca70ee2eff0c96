"""Exact polynomials in X, Y1..Ym and rational functions over products of linear forms.

Variable 0 is always X (the circle variable); variables 1..m are Y1..Ym.
All objects are immutable values with rational (``Fraction``) coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

from .errors import VariableMismatch

__all__ = [
    "Poly",
    "LinForm",
    "FactoredRational",
    "poly_add",
    "poly_mul",
    "poly_scale",
    "exact_divide_linear",
    "divides_product",
    "substitute_x",
    "derivative_x",
    "fr_add",
    "fr_mul",
    "fr_normalize",
]


def _frac(c) -> Fraction:
    return c if type(c) is Fraction else Fraction(c)


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Sparse multivariate polynomial with ``Fraction`` coefficients.

    ``terms`` maps exponent tuples ``(e_X, e_Y1, ..., e_Ym)`` to nonzero
    coefficients.  Do not mutate ``terms``.
    """

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: Mapping[tuple, object] | None = None):
        self.m = m
        clean = {}
        if terms:
            n = m + 1
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise VariableMismatch(
                        f"exponent vector {exps} has length {len(exps)}, expected {n}"
                    )
                c = _frac(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, m, terms):
        # terms already canonical: tuple keys of length m+1, nonzero Fractions
        p = object.__new__(cls)
        p.m = m
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> "Poly":
        return cls._raw(m, {})

    @classmethod
    def const(cls, m: int, c) -> "Poly":
        c = _frac(c)
        return cls._raw(m, {(0,) * (m + 1): c} if c else {})

    @classmethod
    def one(cls, m: int) -> "Poly":
        return cls.const(m, 1)

    @classmethod
    def var(cls, m: int, i: int) -> "Poly":
        """Variable ``i``: 0 is X, ``i >= 1`` is Y_i."""
        if not 0 <= i <= m:
            raise VariableMismatch(f"variable index {i} out of range for m={m}")
        e = [0] * (m + 1)
        e[i] = 1
        return cls._raw(m, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps, c=1) -> "Poly":
        exps = tuple(exps)
        return cls(len(exps) - 1, {exps: c})

    # -- basic queries ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.m + 1

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * (self.m + 1), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def x_degree(self) -> int:
        return max((e[0] for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return d is None or degs == {d}

    def involves_x(self) -> bool:
        return any(e[0] for e in self.terms)

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def _check(self, other: "Poly"):
        if self.m != other.m:
            raise VariableMismatch(
                f"polynomials in different rings (m={self.m} vs m={other.m})"
            )

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.m, other)
        self._check(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.m, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.m, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.m, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = _frac(c)
        if not c:
            return Poly.zero(self.m)
        return Poly._raw(self.m, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw(self.m, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.one(self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.m == other.m and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.m, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        from .parser import print_poly

        return print_poly(self)

    def __repr__(self):
        return f"Poly({self.m}, {str(self)!r})"

    # -- structural operations ---------------------------------------------

    def collect(self, var: int = 0) -> dict[int, "Poly"]:
        """Split into ``{k: coefficient of var^k}`` with coefficients free of ``var``."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[var]
            rest = e[:var] + (0,) + e[var + 1:]
            out.setdefault(k, {})[rest] = c
        return {k: Poly._raw(self.m, t) for k, t in out.items()}

    def derivative_x(self) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[0]:
                out[(e[0] - 1,) + e[1:]] = c * e[0]
        return Poly._raw(self.m, out)

    def substitute_x(self, target: "LinForm | None") -> "Poly":
        """Replace X by the pure-Y linear form ``target`` (``None`` means X = 0)."""
        if target is None:
            return self.set_zero(range(1, self.nvars))
        if target.m != self.m:
            raise VariableMismatch("substitution target has wrong variable count")
        if target.m_coeff:
            raise ValueError("substitution target must not involve X")
        parts = self.collect(0)
        if not parts:
            return self
        c = target.to_poly()
        result = Poly.zero(self.m)
        for k in range(max(parts), -1, -1):
            result = result * c
            if k in parts:
                result = result + parts[k]
        return result

    def linear_substitute(self, images: list["Poly"]) -> "Poly":
        """Substitute variable i by ``images[i]``; images may live in another ring."""
        if len(images) != self.nvars:
            raise VariableMismatch("need one image per variable")
        if not images:
            return self
        target_m = images[0].m
        powers: list[dict[int, Poly]] = [{0: Poly.one(target_m)} for _ in images]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * images[i]
            return cache[k]

        result = Poly.zero(target_m)
        for e, c in self.terms.items():
            t = Poly.const(target_m, c)
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k)
            result = result + t
        return result

    def set_zero(self, keep: Iterable[int]) -> "Poly":
        """Set every variable not in ``keep`` to zero."""
        keep = set(keep)
        drop = [i for i in range(self.nvars) if i not in keep]
        return Poly._raw(
            self.m, {e: c for e, c in self.terms.items() if not any(e[i] for i in drop)}
        )


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_scale(a: Poly, c) -> Poly:
    return a.scale(c)


def substitute_x(p: Poly, target: "LinForm") -> Poly:
    return p.substitute_x(target)


def derivative_x(p: Poly) -> Poly:
    return p.derivative_x()


class LinForm:
    """Homogeneous linear form ``m_coeff*X + sum(beta_i*Y_i)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(_frac(c) for c in coeffs)
        if not coeffs:
            raise ValueError("a linear form needs at least the X coefficient")
        if not any(coeffs):
            raise ValueError("linear form is identically zero")
        self.coeffs = coeffs

    @classmethod
    def from_poly(cls, p: Poly) -> "LinForm":
        if not p.is_homogeneous(1) or p.is_zero():
            raise ValueError(f"{p} is not a nonzero homogeneous linear form")
        coeffs = [Fraction(0)] * p.nvars
        for e, c in p.terms.items():
            coeffs[e.index(1)] = c
        return cls(coeffs)

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def m_coeff(self) -> Fraction:
        return self.coeffs[0]

    @property
    def beta(self) -> tuple:
        return self.coeffs[1:]

    def to_poly(self) -> Poly:
        n = len(self.coeffs)
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return Poly._raw(n - 1, terms)

    def canonical(self) -> tuple[Fraction, "LinForm"]:
        """Return ``(s, l0)`` with ``self == s*l0`` and ``l0`` primitive integral.

        ``l0`` has coprime integer coefficients and its first nonzero
        coefficient (X first, then Y1, ...) is positive.
        """
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [c.numerator * (den // c.denominator) for c in self.coeffs]
        g = gcd(*ints)
        lead = next(c for c in ints if c)
        if lead < 0:
            g = -g
        l0 = LinForm._raw(tuple(Fraction(c // g) for c in ints))
        return Fraction(g, den), l0

    @classmethod
    def _raw(cls, coeffs):
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        return obj

    def pole(self) -> "LinForm | None":
        """The pure-Y form c(Y) with ``self`` vanishing at X = c(Y).

        Returns ``None`` when the pole is at X = 0 (c identically zero).
        """
        if not self.m_coeff:
            raise ValueError("form has no X term")
        beta = [-b / self.m_coeff for b in self.beta]
        if not any(beta):
            return None
        return LinForm((0, *beta))

    def substitute_x(self, target: "LinForm | None") -> "LinForm | None":
        """``self`` with X replaced by ``target`` (``None`` means 0)."""
        coeffs = [Fraction(0)] + list(self.beta)
        if target is not None:
            for i, b in enumerate(target.beta, start=1):
                coeffs[i] += self.m_coeff * b
        if not any(coeffs):
            return None
        return LinForm(coeffs)

    def __neg__(self):
        return LinForm._raw(tuple(-c for c in self.coeffs))

    def __mul__(self, c):
        return LinForm(tuple(x * c for x in self.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LinForm) and self.coeffs == other.coeffs

    def __lt__(self, other):
        return self.coeffs < other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        return str(self.to_poly())

    def __repr__(self):
        return f"LinForm({str(self)!r})"


def _evaluate_on(poly: Poly, target: LinForm | None) -> Poly:
    return poly.substitute_x(target)


def exact_divide_linear(p: Poly, l: LinForm) -> Poly | None:
    """Quotient ``q`` with ``q*l == p``, or ``None`` if ``l`` does not divide ``p``."""
    if l.m != p.m:
        raise VariableMismatch("linear form and polynomial in different rings")
    v = next(i for i, c in enumerate(l.coeffs) if c)
    a = l.coeffs[v]
    rest = Poly._raw(
        p.m,
        {e: c for e, c in l.to_poly().terms.items() if not e[v]},
    )
    parts = p.collect(v)
    if not parts:
        return Poly.zero(p.m)
    d = max(parts)
    if d == 0:
        return None
    inv_a = 1 / a
    # p = (a*x_v + rest) * sum(Q_k x_v^k)  =>  P_k = a*Q_{k-1} + rest*Q_k
    quotient: dict[int, Poly] = {}
    q_next = Poly.zero(p.m)
    for k in range(d, 0, -1):
        pk = parts.get(k, Poly.zero(p.m))
        q = (pk - rest * q_next).scale(inv_a)
        quotient[k - 1] = q
        q_next = q
    if parts.get(0, Poly.zero(p.m)) != rest * q_next:
        return None
    terms = {}
    for k, q in quotient.items():
        for e, c in q.terms.items():
            terms[e[:v] + (k,) + e[v + 1:]] = c
    return Poly._raw(p.m, terms)


def divides_product(p: Poly, factors) -> Poly | None:
    """Divide ``p`` by the product of ``factors`` (LinForms or ``(LinForm, mult)``).

    Returns the exact quotient or ``None`` at the first failed division.
    """
    q = p
    for item in factors:
        l, mult = item if isinstance(item, tuple) else (item, 1)
        for _ in range(mult):
            q = exact_divide_linear(q, l)
            if q is None:
                return None
    return q


def _product(factors, m: int) -> Poly:
    out = Poly.one(m)
    for l, k in factors:
        out = out * l.to_poly() ** k
    return out


class FactoredRational:
    """``numerator / prod(factor**mult)`` with canonical (primitive) factors.

    Scalars from canonicalizing factors are absorbed into the numerator, so
    the factor tuple is always sorted, duplicate-free and primitive.  The
    numerator and factors may still share common linear factors until
    :meth:`normalize` is called.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, factors=()):
        scale = Fraction(1)
        merged: dict[LinForm, int] = {}
        for item in factors:
            l, k = item if isinstance(item, tuple) else (item, 1)
            if l.m != num.m:
                raise VariableMismatch("factor and numerator in different rings")
            if k < 1:
                raise ValueError("multiplicity must be positive")
            s, l0 = l.canonical()
            scale *= s**k
            merged[l0] = merged.get(l0, 0) + k
        if num.is_zero():
            merged = {}
        elif scale != 1:
            num = num.scale(1 / scale)
        self.num = num
        self.den = tuple(sorted(merged.items()))

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den if num.terms else ()
        return obj

    @classmethod
    def from_poly(cls, p: Poly) -> "FactoredRational":
        return cls._raw(p, ())

    @property
    def m(self) -> int:
        return self.num.m

    def denominator_poly(self) -> Poly:
        return _product(self.den, self.m)

    def pole_multiplicity(self) -> int:
        return sum(k for _, k in self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.normalize().den

    def as_poly(self) -> Poly:
        r = self.normalize()
        if r.den:
            raise ValueError(f"{r} is not a polynomial")
        return r.num

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _as_fr(other, self.m)
        if other.num.m != self.num.m:
            raise VariableMismatch("rational functions in different rings")
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        da, db = dict(self.den), dict(other.den)
        common = {l: max(da.get(l, 0), db.get(l, 0)) for l in da.keys() | db.keys()}
        na = self.num * _product(
            [(l, k - da.get(l, 0)) for l, k in common.items() if k > da.get(l, 0)], self.m
        )
        nb = other.num * _product(
            [(l, k - db.get(l, 0)) for l, k in common.items() if k > db.get(l, 0)], self.m
        )
        return FactoredRational._raw(na + nb, tuple(sorted(common.items())))

    __radd__ = __add__

    def __neg__(self):
        return FactoredRational._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_fr(other, self.m))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FactoredRational._raw(self.num.scale(other), self.den)
        other = _as_fr(other, self.m)
        d = dict(self.den)
        for l, k in other.den:
            d[l] = d.get(l, 0) + k
        return FactoredRational._raw(self.num * other.num, tuple(sorted(d.items())))

    __rmul__ = __mul__

    def divide_by(self, factors) -> "FactoredRational":
        """Divide by a product of linear forms (``LinForm`` or ``(LinForm, mult)``)."""
        return self * FactoredRational(Poly.one(self.m), factors)

    def normalize(self) -> "FactoredRational":
        """Cancel every denominator factor that divides the numerator."""
        num = self.num
        if num.is_zero():
            return FactoredRational._raw(num, ())
        den = []
        for l, k in self.den:
            while k:
                q = exact_divide_linear(num, l)
                if q is None:
                    break
                num = q
                k -= 1
            if k:
                den.append((l, k))
        return FactoredRational._raw(num, tuple(den))

    def derivative_x(self) -> "FactoredRational":
        """Formal X-derivative, kept over the factored denominator."""
        # d/dX N/prod(l^a) = N'/D - N * sum(a*m_l / l) / D
        out = FactoredRational._raw(self.num.derivative_x(), self.den)
        for l, k in self.den:
            if l.m_coeff:
                out = out + FactoredRational._raw(
                    self.num.scale(-k * l.m_coeff), self.den
                ).divide_by([l])
        return out

    def substitute_x(self, target: LinForm | None) -> "FactoredRational":
        """Evaluate at X = ``target`` (``None`` meaning X = 0)."""
        num = _evaluate_on(self.num, target)
        factors = []
        for l, k in self.den:
            v = l.substitute_x(target)
            if v is None:
                raise ZeroDivisionError(f"factor {l} vanishes at the evaluation point")
            factors.append((v, k))
        return FactoredRational(num, factors)

    def __eq__(self, other):
        if isinstance(other, (Poly, int, Fraction)):
            other = _as_fr(other, self.m)
        if not isinstance(other, FactoredRational):
            return NotImplemented
        a, b = self.normalize(), other.normalize()
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        r = self.normalize()
        return hash((r.num, r.den))

    def __str__(self):
        from .parser import print_fraction

        return print_fraction(self)

    def __repr__(self):
        return f"FactoredRational({str(self)!r})"


def _as_fr(x, m) -> FactoredRational:
    if isinstance(x, FactoredRational):
        return x
    if isinstance(x, Poly):
        return FactoredRational._raw(x, ())
    if isinstance(x, (int, Fraction)):
        return FactoredRational._raw(Poly.const(m, x), ())
    raise TypeError(f"cannot coerce {type(x).__name__} to FactoredRational")


def fr_add(a: FactoredRational, b: FactoredRational) -> FactoredRational:
    return a + b


def fr_mul(a: FactoredRational, b: FactoredRational) -> FactoredRational:
    return a * b


def fr_normalize(a: FactoredRational) -> FactoredRational:
    return a.normalize()
