"""Reduction in stages: one-variable residue tests along a chain of circle reductions.

Each stage is the fixed-point data of a circle acting on the previous
reduced space.  Euler classes are monomials ``c * X_j^d``; residues are
coefficients of ``X_j^-1`` in Laurent polynomials, so everything here is
univariate bookkeeping over exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Mapping

from .algebra import Poly
from .errors import BrokenTransferChain, SpaceError
from .localization import Space
from .toric import (
    CircleChoice,
    TorusSpace,
    build_fixture,
    cpn_space,
    default_shift,
    product_space,
)

__all__ = [
    "StagePoint",
    "StageSpace",
    "StageChain",
    "StageTest",
    "StagesVerdict",
    "pi_project",
    "ker_res_test",
    "kernel_via_stages",
    "stage_consistency_check",
    "stage_from_space",
    "two_stage_chain",
    "cp1xcp1_chain",
]


def pi_project(p: Poly) -> Poly:
    """Keep only the circle variable: set every Y to zero, return a univariate Poly."""
    out = {}
    for e, c in p.terms.items():
        if not any(e[1:]):
            out[(e[0],)] = c
    return Poly(0, out)


@dataclass(frozen=True)
class StagePoint:
    label: str
    moment: Fraction
    euler_exponent: int
    euler_coeff: Fraction
    restrictions: Mapping[str, Poly]

    def __post_init__(self):
        object.__setattr__(self, "moment", Fraction(self.moment))
        object.__setattr__(self, "euler_coeff", Fraction(self.euler_coeff))
        object.__setattr__(self, "restrictions", dict(self.restrictions))
        if not self.euler_coeff:
            raise SpaceError(f"stage point {self.label!r} has zero Euler coefficient")
        if not self.moment:
            raise SpaceError(f"stage point {self.label!r} has moment 0")
        if self.euler_exponent < 0:
            raise SpaceError(f"stage point {self.label!r} has negative Euler exponent")


@dataclass(frozen=True)
class StageSpace:
    """Fixed points of the j-th circle on the (j-1)-th reduced space.

    ``transfer`` maps class names of stage ``j-1`` to class names here.
    Restrictions may involve the residual Y variables (``num_y_vars``); they
    are projected onto the circle variable before any residue is taken.
    """

    j: int
    points: tuple
    transfer: Mapping[str, str] = field(default_factory=dict)
    num_y_vars: int = 0

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "transfer", dict(self.transfer))
        names = None
        for p in self.points:
            if names is None:
                names = set(p.restrictions)
            elif set(p.restrictions) != names:
                raise SpaceError(f"stage {self.j}: class tables differ between points")

    @property
    def class_names(self) -> list[str]:
        return sorted(self.points[0].restrictions) if self.points else []

    @property
    def positive(self) -> list[StagePoint]:
        return sorted((p for p in self.points if p.moment > 0), key=lambda p: p.moment)

    @property
    def max_exponent(self) -> int:
        return max(p.euler_exponent for p in self.points)

    def projected(self, name: str) -> dict[str, Poly]:
        if name not in self.points[0].restrictions:
            raise KeyError(f"stage {self.j} has no class {name!r}")
        return {p.label: pi_project(p.restrictions[name]) for p in self.points}


@dataclass(frozen=True)
class StageChain:
    stages: tuple

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        for k, s in enumerate(self.stages, start=1):
            if s.j != k:
                raise SpaceError(f"stage {k} is labelled j={s.j}")
        for prev, cur in zip(self.stages, self.stages[1:]):
            bad = [a for a in cur.transfer if a not in prev.class_names]
            bad += [b for b in cur.transfer.values() if b not in cur.class_names]
            if bad:
                raise SpaceError(f"stage {cur.j}: transfer mentions unknown classes {bad}")


def _coeff(p: Poly, k: int) -> Fraction:
    return p.terms.get((k,), Fraction(0)) if k >= 0 else Fraction(0)


def _residue(points, values: Mapping[str, Poly], shift: int = 0) -> Fraction:
    """Coefficient of X^-1 in sum_F X^shift * values[F] / (c_F X^d_F)."""
    total = Fraction(0)
    for p in points:
        total += _coeff(values[p.label], p.euler_exponent - 1 - shift) / p.euler_coeff
    return total


@dataclass
class StageTest:
    j: int
    name: str
    passed: bool
    witness: tuple | None = None  # (zeta name, power t, nonzero coefficient)

    def as_dict(self):
        d = {"stage": self.j, "class": self.name, "passed": self.passed}
        if self.witness:
            d["witness"] = {"zeta": self.witness[0], "power": self.witness[1], "value": str(self.witness[2])}
        return d


def ker_res_test(stage: StageSpace, eta_name: str, extra_powers: int = 0) -> StageTest:
    """Does ``eta`` pair to zero with every stage class times X_j^t, t <= D?

    ``D`` is the largest Euler exponent; larger t cannot reach the X_j^-1
    coefficient.  ``extra_powers`` widens the sweep for cross-checks.
    """
    eta = stage.projected(eta_name)
    plus = stage.positive
    bound = stage.max_exponent + extra_powers
    for zname in stage.class_names:
        zeta = stage.projected(zname)
        prod = {p.label: eta[p.label] * zeta[p.label] for p in plus}
        for t in range(bound + 1):
            value = _residue(plus, prod, t)
            if value:
                return StageTest(stage.j, eta_name, False, (zname, t, value))
    return StageTest(stage.j, eta_name, True)


@dataclass
class StagesVerdict:
    name: str
    detected_stage: int | None
    tests: list = field(default_factory=list)

    @property
    def in_kernel(self) -> bool:
        return self.detected_stage is not None

    def as_dict(self):
        return {
            "class": self.name,
            "verdict": "detected" if self.in_kernel else "not_detected",
            "detected_stage": self.detected_stage,
            "stages": [t.as_dict() for t in self.tests],
        }


def kernel_via_stages(chain: StageChain, alpha_name: str) -> StagesVerdict:
    """Walk the chain; the first stage whose residue test passes detects the kernel."""
    verdict = StagesVerdict(alpha_name, None)
    name = alpha_name
    for k, stage in enumerate(chain.stages):
        if k:
            if name not in stage.transfer:
                raise BrokenTransferChain(
                    f"class {name!r} has no image at stage {stage.j}"
                )
            name = stage.transfer[name]
        if name not in stage.class_names:
            raise BrokenTransferChain(f"stage {stage.j} has no class {name!r}")
        test = ker_res_test(stage, name)
        verdict.tests.append(test)
        if test.passed:
            verdict.detected_stage = stage.j
            return verdict
    return verdict


def _laurent_sum(points, values):
    """Sum_F values[F] / (c_F X^d_F) as {exponent: coefficient}."""
    out: dict[int, Fraction] = {}
    for p in points:
        for (k,), c in values[p.label].terms.items():
            e = k - p.euler_exponent
            out[e] = out.get(e, Fraction(0)) + c / p.euler_coeff
    return {e: c for e, c in out.items() if c}


def stage_consistency_check(chain: StageChain, name: str | None = None) -> dict:
    """Cross-check user-supplied stage data.

    Per stage: the full localization sum of every product of two classes must
    be a polynomial in X_j.  Between stages: the residue pairing at stage
    ``j-1`` must equal the integral over the same reduced space computed from
    stage ``j`` data (constant term of its localization sum), up to a single
    nonzero constant per transition.  Restrict to pairs involving ``name`` if given.
    """
    problems = []
    constants = {}
    for stage in chain.stages:
        names = stage.class_names
        proj = {n: stage.projected(n) for n in names}
        for a, b in combinations_with_replacement(names, 2):
            if name is not None and name not in (a, b):
                continue
            prod = {p.label: proj[a][p.label] * proj[b][p.label] for p in stage.points}
            neg = {e: c for e, c in _laurent_sum(stage.points, prod).items() if e < 0}
            if neg:
                problems.append({
                    "stage": stage.j, "kind": "not_polynomial", "classes": [a, b],
                    "detail": f"negative powers {sorted(neg)} in the localization sum",
                })
    for prev, cur in zip(chain.stages, chain.stages[1:]):
        pairs = []
        names = [n for n in prev.class_names if n in cur.transfer]
        pproj = {n: prev.projected(n) for n in names}
        cproj = {n: cur.projected(cur.transfer[n]) for n in names}
        for a, b in combinations_with_replacement(names, 2):
            if name is not None and name not in (a, b):
                continue
            lhs = _residue(
                prev.positive,
                {p.label: pproj[a][p.label] * pproj[b][p.label] for p in prev.positive},
            )
            rhs = _laurent_sum(
                cur.points,
                {p.label: cproj[a][p.label] * cproj[b][p.label] for p in cur.points},
            ).get(0, Fraction(0))
            pairs.append((a, b, lhs, rhs))
        ratio = next((l / r for _, _, l, r in pairs if l and r), None)
        constants[cur.j] = ratio
        for a, b, lhs, rhs in pairs:
            ok = (not lhs and not rhs) or (ratio is not None and lhs == ratio * rhs)
            if not ok:
                problems.append({
                    "stage": cur.j, "kind": "pairing_mismatch", "classes": [a, b],
                    "detail": f"stage {prev.j} residue {lhs} vs stage {cur.j} integral {rhs}"
                              + (f" (expected ratio {ratio})" if ratio is not None else ""),
                })
    return {
        "ok": not problems,
        "problems": problems,
        "constants": {str(k): (None if v is None else str(v)) for k, v in constants.items()},
    }


def stage_from_space(space: Space, classes, j: int = 1, transfer=None) -> StageSpace:
    """Stage data of a circle space: Euler class c*X^n with c the product of X-coefficients."""
    points = []
    for p in space.points:
        c = Fraction(1)
        for w in p.weights:
            c *= w.m_coeff
        points.append(StagePoint(
            p.label, p.moment, len(p.weights), c,
            {cls.name: cls[p.label] for cls in classes},
        ))
    return StageSpace(j, tuple(points), transfer or {}, space.num_y_vars)


def _edge_points(torus: TorusSpace, choice: CircleChoice, shift: Fraction):
    """Fixed points of the residual torus on the first reduced space.

    They are the one-dimensional orbits (GKM edges P -> P + u) crossed by the
    level set.  Returns ``(P, Q, u, t)`` with the level point at ``P + t*u``.
    """
    by_moment = {p.moment: p for p in torus.points}
    out = []
    for p in torus.points:
        for u in p.weights:
            q = by_moment.get(tuple(a + b for a, b in zip(p.moment, u)))
            if q is None:
                continue
            vp = choice.pairing(p.moment) + shift
            vq = choice.pairing(q.moment) + shift
            if vp < 0 < vq:
                out.append((p, q, u, -vp / (vq - vp)))
    return out


def two_stage_chain(torus: TorusSpace, class_names=None, search_bound: int = 8) -> StageChain:
    """Build the two-stage chain of a rank-2 toric fixture whose edges join moment vertices.

    Stage 1 is the generic circle on the whole space.  Stage 2 is the residual
    circle on the first reduction: its fixed points are the edges crossing the
    level, its tangent weights the other weights at the edge's lower vertex
    minus the multiple of the edge weight that vanishes on the first circle,
    and class restrictions are evaluated where the edge weight vanishes.
    """
    if torus.rank != 2:
        raise ValueError("two_stage_chain needs a rank-2 torus")
    fix = build_fixture(torus, search_bound)
    choice, shift = fix.choice, fix.shift
    classes = dict(fix.classes)
    classes.update({c.name: c for c in fix.basis.alpha_minus.values()})
    classes.update({c.name: c for c in fix.basis.alpha_plus.values()})
    if class_names is not None:
        classes = {n: classes[n] for n in class_names}
    stage1 = stage_from_space(fix.space, list(classes.values()), 1)

    edges = _edge_points(torus, choice, shift)
    residual = [
        sum(r * m for r, m in zip(choice.completion[1], [
            a + t * b for a, b in zip(p.moment, u)
        ]))
        for p, _, u, t in edges
    ]
    shift2 = default_shift(residual)
    points = []
    for (p, q, u, t), mu in zip(edges, residual):
        edge = choice.linform(u)
        coeff = Fraction(1)
        for w in p.weights:
            if w == u:
                continue
            ratio = choice.pairing(w) / choice.pairing(u)
            proj = choice.coordinates(tuple(a - ratio * b for a, b in zip(w, u)))
            assert proj[0] == 0
            coeff *= proj[1]
        label = f"{p.label}|{q.label}"
        restr = {}
        for name, cls in classes.items():
            value = cls[p.label].substitute_x(edge.pole())
            restr[name] = Poly(0, {(e[1],): c for e, c in value.terms.items()})
        points.append(StagePoint(label, mu + shift2, len(p.weights) - 1, coeff, restr))
    stage2 = StageSpace(2, tuple(points), {n: n for n in classes}, 0)
    return StageChain((stage1, stage2))


def cp1xcp1_chain() -> StageChain:
    """CP^1 x CP^1 reduced by the standard rank-2 torus in two circle stages.

    Classes: ``one``; the hyperplane pullbacks ``L.h`` and ``R.h``; and the
    canonical basis classes.  The final quotient is a point, so every class of
    positive degree is detected by stage 2 at the latest.
    """
    return two_stage_chain(product_space(cpn_space(1), cpn_space(1)))
