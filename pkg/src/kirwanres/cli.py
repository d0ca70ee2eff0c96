"""Command-line interface.

Every command prints a JSON report ``{"command": [...], "payload": {...}}``
with sorted keys, or a plain-text rendering with ``--human``.  Exit codes:
0 success, 1 mathematical rejection, 2 input or validation error.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from pathlib import Path

from . import io
from .errors import BrokenTransferChain, KirwanError, SchemaError
from .localization import EquivClass, abbv_sum, pairing, product_class, validate_class
from .morse import kernel_test, probe_classes, residue_criterion, validate_basis
from .parser import parse_fraction, parse_poly, parse_rational, print_poly
from .residue import res_gk, res_plus
from .stages import kernel_via_stages, stage_consistency_check, two_stage_chain
from .toric import build_fixture, cpn_space, product_space

EXIT_OK, EXIT_REJECT, EXIT_INPUT = 0, 1, 2


# -- helpers ---------------------------------------------------------------


def _load_space(path):
    data = io.load_json(path)
    space, classes = io.space_from_dict(data, str(path))
    return data, space, classes


def _class_table(classes, basis=None):
    table = dict(classes)
    if basis is not None:
        for fam in ("alpha_minus", "alpha_plus"):
            for lbl, cls in getattr(basis, fam).items():
                table[f"{fam}[{lbl}]"] = cls
    return table


def _lookup(table, name, space, times=None) -> EquivClass:
    if name not in table:
        raise SchemaError("class", f"unknown class {name!r}; known: {', '.join(sorted(table))}")
    cls = table[name]
    if times:
        p = parse_poly(times, space.num_y_vars)
        cls = cls.scaled(p, name=f"({print_poly(p)})*{name}")
    return cls


def _infer_vars(text: str) -> int:
    return max((int(k) for k in re.findall(r"Y(\d+)", text)), default=0)


# -- commands --------------------------------------------------------------


def cmd_validate(args):
    data, space, classes = _load_space(args.space)
    basis = None
    if args.basis:
        basis = io.basis_from_dict(io.load_json(args.basis), space.num_y_vars, str(args.basis))
    elif "alpha_minus" in data:
        basis = io.basis_from_dict(data, space.num_y_vars, str(args.space))
    table = _class_table(classes, basis)
    reports = [
        validate_class(space, cls, [w for w in table.values() if w is not cls]).as_dict()
        for _, cls in sorted(table.items())
    ]
    payload = {
        "space": {"points": len(space.points), "num_y_vars": space.num_y_vars, "ok": True},
        "classes": reports,
    }
    ok = all(r["ok"] for r in reports)
    if basis is not None:
        rep = validate_basis(space, basis)
        payload["basis"] = rep.as_dict()
        ok = ok and rep.ok
    payload["ok"] = ok
    return payload, EXIT_OK if ok else EXIT_INPUT


def cmd_residue(args):
    text = args.expr
    if Path(text).is_file():
        text = Path(text).read_text().strip()
    m = args.vars if args.vars is not None else _infer_vars(text)
    h = parse_fraction(text, m)
    a, b = res_plus(h), res_gk(h)
    payload = {
        "input": str(h),
        "res_plus": io.value_str(a),
        "res_gk": io.value_str(b),
        "agree": a == b,
    }
    return payload, EXIT_OK if a == b else EXIT_REJECT


def cmd_pairing(args):
    data, space, classes = _load_space(args.space)
    basis = io.basis_from_dict(data, space.num_y_vars) if "alpha_minus" in data else None
    table = _class_table(classes, basis)
    eta = _lookup(table, args.eta, space, args.times)
    zeta = _lookup(table, args.zeta, space) if args.zeta else None
    value = pairing(space, eta, zeta).normalize()
    # the residue sum is a polynomial for any input; genuineness shows up in
    # the full localization sum of the product instead
    product = eta if zeta is None else product_class(eta, zeta)
    local = abbv_sum(space, product)
    payload = {
        "eta": eta.name,
        "zeta": zeta.name if zeta else None,
        "value": io.value_str(value),
        "polynomial": not value.den and not local.den,
    }
    if not payload["polynomial"]:
        payload["warning"] = (
            f"localization sum {local} is not a polynomial; the input classes are not genuine"
        )
        return payload, EXIT_INPUT
    return payload, EXIT_OK


def cmd_kernel(args):
    data, space, classes = _load_space(args.space)
    basis = io.basis_from_dict(io.load_json(args.basis), space.num_y_vars, str(args.basis))
    rep = validate_basis(space, basis)
    if not rep.ok:
        return {"basis": rep.as_dict(), "ok": False}, EXIT_INPUT
    table = _class_table(classes, basis)
    eta = _lookup(table, args.eta, space, args.times)
    verdict = kernel_test(space, basis, eta)
    payload = io.verdict_to_dict(verdict)
    if args.degree is not None:
        probes = probe_classes(basis, space.num_y_vars, args.degree)
        crit = residue_criterion(space, eta, probes)
        payload["residue_sweep"] = {
            "degree": args.degree,
            "checked": crit.checked,
            "all_zero": crit.ok,
            "failing": crit.failing,
            "value": None if crit.value is None else io.value_str(crit.value),
            "agrees": crit.ok == verdict.in_kernel,
        }
    if args.expect_kernel and not verdict.in_kernel:
        return payload, EXIT_REJECT
    return payload, EXIT_OK


def cmd_stages_check(args):
    chain = io.chain_from_list(io.load_json(args.chain), str(args.chain))
    verdict = kernel_via_stages(chain, args.name)
    payload = verdict.as_dict()
    payload["consistency"] = stage_consistency_check(chain, args.name)
    if not payload["consistency"]["ok"]:
        return payload, EXIT_INPUT
    if args.expect_kernel and not verdict.in_kernel:
        return payload, EXIT_REJECT
    return payload, EXIT_OK


def _shift(args):
    return None if args.shift is None else parse_rational(args.shift)


def _emit_fixture(fix, args):
    payload = io.fixture_to_dict(fix)
    if args.output:
        Path(args.output).write_text(io.dumps(payload))
    return payload, EXIT_OK


def cmd_toric_cpn(args):
    if args.n < 1:
        raise SchemaError("n", "CP^n needs n >= 1")
    fix = build_fixture(cpn_space(args.n), args.bound, _shift(args))
    return _emit_fixture(fix, args)


def cmd_toric_product(args):
    tori = []
    for path in (args.file_a, args.file_b):
        data = io.load_json(path)
        tori.append(io.torus_from_dict(io._get(data, "torus", str(path)), f"{path}.torus"))
    fix = build_fixture(product_space(*tori), args.bound, _shift(args))
    return _emit_fixture(fix, args)


def cmd_toric_chain(args):
    data = io.load_json(args.file)
    torus = io.torus_from_dict(io._get(data, "torus", str(args.file)), f"{args.file}.torus")
    try:
        chain = two_stage_chain(torus, search_bound=args.bound)
    except ValueError as exc:
        raise SchemaError(str(args.file), str(exc)) from None
    payload = io.chain_to_list(chain)
    if args.output:
        Path(args.output).write_text(io.dumps(payload))
    return payload, EXIT_OK


# -- rendering -------------------------------------------------------------


def _render(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="plain-text report instead of JSON")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")

    ap = argparse.ArgumentParser(
        prog="kirwanres",
        description="Exact residue and localization computations for circle reductions.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a space file and its classes")
    p.add_argument("space")
    p.add_argument("basis", nargs="?")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("residue", parents=[common], help="Res_X^+ and the X^-1 coefficient at infinity")
    p.add_argument("expr", help="rational function text or a file containing it")
    p.add_argument("--vars", type=int, help="number of Y variables (default: highest index used)")
    p.set_defaults(func=cmd_residue)

    p = sub.add_parser("pairing", parents=[common], help="pairing of two classes on the reduction")
    p.add_argument("space")
    p.add_argument("eta")
    p.add_argument("zeta", nargs="?")
    p.add_argument("--times", metavar="POLY", help="multiply eta by a polynomial first")
    p.set_defaults(func=cmd_pairing)

    p = sub.add_parser("kernel", parents=[common], help="decide kernel membership")
    p.add_argument("space")
    p.add_argument("basis", help="basis file (may be the space file itself)")
    p.add_argument("eta")
    p.add_argument("--times", metavar="POLY", help="multiply eta by a polynomial first")
    p.add_argument("--degree", type=int, help="also sweep basis x monomials up to this degree")
    p.add_argument("--expect-kernel", action="store_true", help="exit 1 unless eta is in the kernel")
    p.set_defaults(func=cmd_kernel)

    st = sub.add_parser("stages", help="reduction in stages")
    st_sub = st.add_subparsers(dest="stages_command", required=True)
    p = st_sub.add_parser("check", parents=[common], help="staged kernel test for one class")
    p.add_argument("chain")
    p.add_argument("name")
    p.add_argument("--expect-kernel", action="store_true")
    p.set_defaults(func=cmd_stages_check)

    tor = sub.add_parser("toric", help="build verified toric fixtures")
    tor_sub = tor.add_subparsers(dest="toric_command", required=True)
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--bound", type=int, default=8, help="circle search bound")
    shared.add_argument("--shift", help="rational added to every moment (default: median split)")
    shared.add_argument("-o", "--output", help="also write the JSON file here")
    p = tor_sub.add_parser("cpn", parents=[common, shared])
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_toric_cpn)
    p = tor_sub.add_parser("product", parents=[common, shared])
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_toric_product)
    p = tor_sub.add_parser("chain", parents=[common], help="two-stage chain of a rank-2 fixture")
    p.add_argument("file")
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_toric_chain)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    echo = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    try:
        payload, code = args.func(args)
    except (KirwanError, BrokenTransferChain, OSError) as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        code = EXIT_INPUT
    report = {"command": echo, "exit_code": code, "payload": payload}
    if args.timings:
        report["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    if args.human:
        sys.stdout.write("\n".join(_render(report)) + "\n")
    else:
        sys.stdout.write(io.dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
