"""JSON readers and writers for spaces, bases, stage chains and verdicts.

Rationals are written as strings (``"3/2"``, ``"-1"``); polynomials use the
canonical text grammar of :mod:`kirwanres.parser`.  Writers sort every map
so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .algebra import FactoredRational, LinForm, Poly
from .errors import KirwanError, SchemaError
from .localization import EquivClass, FixedPoint, Space
from .morse import CanonicalBasis, Decomposition, KernelVerdict
from .parser import parse_poly, parse_rational, print_poly
from .stages import StageChain, StagePoint, StageSpace
from .toric import ToricFixture, TorusSpace, space_from_recipe


def frac_str(x) -> str:
    return str(Fraction(x))


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(str(path), f"cannot read file: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"malformed JSON: {exc}") from None


def _get(d, key, path, kind=None):
    if not isinstance(d, dict):
        raise SchemaError(path, "expected an object")
    if key not in d:
        raise SchemaError(path, f"missing key {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{path}.{key}", f"expected {kind.__name__}")
    return v


def _rational(v, path):
    try:
        return parse_rational(v)
    except KirwanError as exc:
        raise SchemaError(path, str(exc)) from None


def _poly(text, m, path):
    if not isinstance(text, str):
        raise SchemaError(path, "expected a polynomial string")
    try:
        return parse_poly(text, m)
    except KirwanError as exc:
        raise SchemaError(path, str(exc)) from None


def class_from_dict(name, d, m, path) -> EquivClass:
    degree = _get(d, "degree", path, int)
    restr = _get(d, "restrictions", path, dict)
    return EquivClass(
        name,
        degree,
        {lbl: _poly(s, m, f"{path}.restrictions.{lbl}") for lbl, s in restr.items()},
    )


def class_to_dict(cls: EquivClass) -> dict:
    return {
        "degree": cls.degree,
        "restrictions": {k: print_poly(v) for k, v in sorted(cls.restrictions.items())},
    }


def space_from_dict(d, path="space") -> tuple[Space, dict[str, EquivClass]]:
    m = _get(d, "num_y_vars", path, int)
    n = _get(d, "dim_half", path, int)
    pts = _get(d, "points", path, list)
    points = []
    for i, pd in enumerate(pts):
        ppath = f"{path}.points[{i}]"
        label = _get(pd, "label", ppath, str)
        moment = _rational(_get(pd, "moment", ppath), f"{ppath}.moment")
        weights = []
        for k, w in enumerate(_get(pd, "weights", ppath, list)):
            wpath = f"{ppath}.weights[{k}]"
            if not isinstance(w, list) or len(w) != m + 1:
                raise SchemaError(wpath, f"expected a list of {m + 1} rationals")
            try:
                weights.append(LinForm([_rational(c, wpath) for c in w]))
            except ValueError as exc:
                raise SchemaError(wpath, str(exc)) from None
        points.append(FixedPoint(label, moment, tuple(weights)))
    shift = _rational(d.get("shift", 0), f"{path}.shift")
    space = Space(m, n, tuple(points), shift=shift,
                  allow_one_sided=bool(d.get("allow_one_sided", False)))
    classes = {
        name: class_from_dict(name, cd, m, f"{path}.classes.{name}")
        for name, cd in d.get("classes", {}).items()
    }
    return space, classes


def space_to_dict(space: Space, classes=None, basis: CanonicalBasis | None = None) -> dict:
    out = {
        "num_y_vars": space.num_y_vars,
        "dim_half": space.dim_half,
        "points": [
            {
                "label": p.label,
                "moment": frac_str(p.moment),
                "weights": [[frac_str(c) for c in w.coeffs] for w in p.weights],
            }
            for p in space.points
        ],
        "classes": {c.name: class_to_dict(c) for c in (classes or {}).values()},
    }
    if space.allow_one_sided:
        out["allow_one_sided"] = True
    if basis is not None:
        out.update(basis_to_dict(basis))
    return out


def basis_from_dict(d, m, path="basis") -> CanonicalBasis:
    fams = {}
    for fam in ("alpha_minus", "alpha_plus"):
        raw = _get(d, fam, path, dict)
        fams[fam] = {
            lbl: class_from_dict(f"{fam}[{lbl}]", cd, m, f"{path}.{fam}.{lbl}")
            for lbl, cd in raw.items()
        }
    return CanonicalBasis(fams["alpha_minus"], fams["alpha_plus"])


def basis_to_dict(basis: CanonicalBasis) -> dict:
    return {
        "alpha_minus": {k: class_to_dict(v) for k, v in sorted(basis.alpha_minus.items())},
        "alpha_plus": {k: class_to_dict(v) for k, v in sorted(basis.alpha_plus.items())},
    }


def chain_from_list(data, path="chain") -> StageChain:
    if not isinstance(data, list):
        raise SchemaError(path, "expected an array of stage objects")
    stages = []
    for i, sd in enumerate(data):
        spath = f"{path}[{i}]"
        j = _get(sd, "j", spath, int)
        m = sd.get("num_y_vars", 0)
        points = []
        for k, pd in enumerate(_get(sd, "points", spath, list)):
            ppath = f"{spath}.points[{k}]"
            restr = _get(pd, "restrictions", ppath, dict)
            points.append(StagePoint(
                _get(pd, "label", ppath, str),
                _rational(_get(pd, "moment", ppath), f"{ppath}.moment"),
                _get(pd, "euler_exponent", ppath, int),
                _rational(_get(pd, "euler_coeff", ppath), f"{ppath}.euler_coeff"),
                {n: _poly(s, m, f"{ppath}.restrictions.{n}") for n, s in restr.items()},
            ))
        stages.append(StageSpace(j, tuple(points), sd.get("transfer", {}), m))
    return StageChain(tuple(stages))


def chain_to_list(chain: StageChain) -> list:
    return [
        {
            "j": s.j,
            "num_y_vars": s.num_y_vars,
            "points": [
                {
                    "label": p.label,
                    "moment": frac_str(p.moment),
                    "euler_exponent": p.euler_exponent,
                    "euler_coeff": frac_str(p.euler_coeff),
                    "restrictions": {n: print_poly(v) for n, v in sorted(p.restrictions.items())},
                }
                for p in s.points
            ],
            "transfer": dict(sorted(s.transfer.items())),
        }
        for s in chain.stages
    ]


def decomposition_to_dict(dec: Decomposition) -> dict:
    s = lambda mp: {k: str(v) for k, v in sorted(mp.items())}  # noqa: E731
    return {
        "expansion": s(dec.expansion),
        "corrections": s(dec.corrections),
        "minus_coeffs": s(dec.minus_coeffs),
        "plus_coeffs": s(dec.plus_coeffs),
        "eta_minus": s(dec.eta_minus),
        "eta_plus": s(dec.eta_plus),
    }


def verdict_to_dict(v: KernelVerdict) -> dict:
    out = {"class": v.name, "in_kernel": v.in_kernel}
    if v.in_kernel:
        out["xi_plus"] = class_to_dict(v.xi_plus)
        out["xi_minus"] = class_to_dict(v.xi_minus)
    else:
        out["witness"] = {
            "point": v.witness_point,
            "polynomial": print_poly(v.witness_poly),
            "zeta": class_to_dict(v.witness_class),
            "pairing": str(v.witness_value),
            "coefficient": str(v.witness_coefficient),
        }
    if v.decomposition is not None:
        out["decomposition"] = decomposition_to_dict(v.decomposition)
    return out


def _tuplify(x):
    return tuple(_tuplify(v) for v in x) if isinstance(x, list) else x


def torus_to_dict(torus: TorusSpace) -> dict:
    return {
        "rank": torus.rank,
        "recipe": torus.recipe,
        "points": [
            {
                "label": p.label,
                "moment": [frac_str(c) for c in p.moment],
                "weights": [list(w) for w in p.weights],
            }
            for p in torus.points
        ],
    }


def torus_from_dict(d, path="torus") -> TorusSpace:
    """Rebuild a torus space from its recipe; the stored points are only a record."""
    recipe = _get(d, "recipe", path, list)
    try:
        return space_from_recipe(_tuplify(recipe))
    except (ValueError, IndexError, TypeError) as exc:
        raise SchemaError(f"{path}.recipe", str(exc)) from None


def fixture_to_dict(fix: ToricFixture) -> dict:
    out = space_to_dict(fix.space, fix.classes, fix.basis)
    out["torus"] = torus_to_dict(fix.torus)
    out["circle"] = {
        "xi": list(fix.choice.xi),
        "completion": [list(row) for row in fix.choice.completion],
        "shift": frac_str(fix.shift),
    }
    return out


def value_str(h: FactoredRational | Poly) -> str:
    if isinstance(h, FactoredRational) and h.is_polynomial():
        return print_poly(h.as_poly())
    return str(h)


def fixture_path(name: str):
    """Path-like handle to a shipped fixture (``cp1``, ``cp2``, ``cp1xcp1_stages``)."""
    from importlib.resources import files

    return files("kirwanres").joinpath("fixtures", f"{name}.json")


def load_fixture(name: str):
    """``(space, classes, basis)`` for a space fixture, or a ``StageChain``."""
    data = json.loads(fixture_path(name).read_text())
    if isinstance(data, list):
        return chain_from_list(data, name)
    space, classes = space_from_dict(data, name)
    basis = basis_from_dict(data, space.num_y_vars, name) if "alpha_minus" in data else None
    return space, classes, basis
