"""Acceptance gate: one check per criterion, each printing a single PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from kirwanres import (
    FactoredRational,
    LinForm,
    Poly,
    abbv_sum,
    decompose,
    divides_product,
    divisibility_witness,
    kernel_test,
    kernel_via_stages,
    load_fixture,
    parse_poly,
    print_poly,
    product_class,
    res_gk,
    res_plus,
    residue_criterion,
)
from kirwanres.localization import euler_class
from kirwanres.morse import probe_classes
from kirwanres.toric import _is_generic, build_fixture, cpn_space

SEED = 20240611


def _rat(rng, lo=-6, hi=6, den=5):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def _nonzero_rat(rng):
    while True:
        r = _rat(rng)
        if r:
            return r


def _circle_form(rng, m):
    return LinForm([_nonzero_rat(rng)] + [_rat(rng) for _ in range(m)])


def _poly(rng, m, max_degree, max_terms):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        d = rng.randint(0, max_degree)
        e = [0] * (m + 1)
        for _ in range(d):
            e[rng.randrange(m + 1)] += 1
        terms[tuple(e)] = _rat(rng)
    return Poly(m, terms)


def _product(forms, m):
    g = Poly.one(m)
    for l in forms:
        g = g * l.to_poly()
    return g


# -- criteria ----------------------------------------------------------------


def criterion_1():
    rng = random.Random(SEED + 1)
    bad = []
    for _ in range(100):
        m = rng.randint(0, 4)
        l = LinForm([1] + [_rat(rng) for _ in range(m)])
        value = res_plus(FactoredRational(Poly.one(m), [l]))
        if value != FactoredRational.from_poly(Poly.one(m)):
            bad.append(str(l))
    return not bad, f"100 forms, mismatches: {bad[:3]}", 1.0


def criterion_2():
    rng = random.Random(SEED + 2)
    n, bad = 0, []
    while n < 500:
        m = rng.randint(0, 3)
        factors = [(_circle_form(rng, m), rng.randint(1, 2)) for _ in range(rng.randint(1, 4))]
        h = FactoredRational(_poly(rng, m, 6, 6), factors)
        n += 1
        if res_plus(h) != res_gk(h):
            bad.append(str(h))
    return not bad, f"{n} rational functions, mismatches: {bad[:3]}", 30.0


def criterion_3():
    problems, count = [], 0
    for n in (1, 2, 3):
        fix = build_fixture(cpn_space(n))
        classes = list(fix.basis.alpha_minus.values()) + list(fix.basis.alpha_plus.values())
        for c in classes:
            count += 1
            if abbv_sum(fix.space, c).den:
                problems.append((n, c.name))
        for a, b in combinations_with_replacement(classes, 2):
            count += 1
            if abbv_sum(fix.space, product_class(a, b)).den:
                problems.append((n, a.name, b.name))
    return not problems, f"{count} sums over CP^1..CP^3, non-polynomial: {problems[:3]}", 10.0


def criterion_4():
    space, classes, basis = load_fixture("cp1")
    clauses = {}
    a = basis.alpha_minus["p+"]
    clauses["alpha_minus(p+) * X^k in kernel, k <= 8"] = all(
        kernel_test(space, basis, a.scaled(Poly.monomial((k,)))).in_kernel for k in range(9)
    )
    for name, label in (("one", "1"), ("X", "X*1")):
        v = kernel_test(space, basis, classes[name])
        clauses[f"{label} not in kernel, witness +-1"] = (
            not v.in_kernel and abs(v.witness_value.as_poly().constant_term()) == 1
        )
    failed = [k for k, ok in clauses.items() if not ok]
    detail = "all clauses hold" if not failed else f"failing clauses: {failed}"
    return not failed, detail, 1.0


def _cp2_sweep():
    fix = build_fixture(cpn_space(2))
    assert _is_generic(fix.torus, fix.choice.xi)
    space, basis = fix.space, fix.basis
    pole_order = max(euler_class(p).pole_multiplicity() for p in space.points)
    probes = {}
    rows = []
    for eta in probe_classes(basis, space.num_y_vars, 4):
        d = pole_order + eta.degree + 2
        if d not in probes:
            probes[d] = probe_classes(basis, space.num_y_vars, d)
        rows.append((eta, kernel_test(space, basis, eta), residue_criterion(space, eta, probes[d])))
    return space, basis, rows


_SWEEP = {}


def _sweep():
    if not _SWEEP:
        start = time.perf_counter()
        _SWEEP["data"] = _cp2_sweep()
        _SWEEP["seconds"] = time.perf_counter() - start
    return _SWEEP["data"]


def criterion_5():
    _, _, rows = _sweep()
    bad = [eta.name for eta, v, c in rows if v.in_kernel != c.ok]
    inside = sum(v.in_kernel for _, v, _ in rows)
    return not bad, f"{len(rows)} classes ({inside} in kernel), disagreements: {bad[:3]}", 300.0


def criterion_6():
    space, basis, rows = _sweep()
    bad = []
    for eta, _, _ in rows:
        dec = decompose(space, basis, eta)
        problems = dec.check(space, eta)
        for lbl, q in dec.plus_coeffs.items():
            if any(not l.m_coeff for l, _ in q.den):
                problems.append(f"q at {lbl} has a pure-Y factor")
        if problems:
            bad.append((eta.name, problems[0]))
    return not bad, f"{len(rows)} decompositions, violations: {bad[:3]}", 300.0


def criterion_7():
    rng = random.Random(SEED + 7)
    bad = []
    for _ in range(200):
        m = rng.randint(0, 3)
        forms = [_circle_form(rng, m) for _ in range(rng.randint(1, 3))]
        g = _product(forms, m)
        q = _poly(rng, m, 3, 5)
        f = q * g
        back = divides_product(f, forms)
        if back is None or back * g != f:
            bad.append(("divisible", str(f)))
            continue
        c = rng.choice([x for x in range(-5, 6) if x])
        f2 = f + c
        if divides_product(f2, forms) is not None:
            bad.append(("perturbed divides", str(f2)))
            continue
        w = divisibility_witness(f2, forms)
        if w is None or res_plus(FactoredRational(w[0] * f2, forms)).is_zero():
            bad.append(("no witness", str(f2)))
    return not bad, f"200 pairs, failures: {bad[:3]}", 30.0


def criterion_8():
    chain = load_fixture("cp1xcp1_stages")
    late = kernel_via_stages(chain, "L.h")
    early = kernel_via_stages(chain, "R.h")
    never = kernel_via_stages(chain, "one")
    checks = {
        "L.h detected at j=2 only": late.detected_stage == 2 and not late.tests[0].passed,
        "R.h detected at j=1": early.detected_stage == 1,
        "one not detected, witnesses at every stage": never.detected_stage is None
        and len(never.tests) == len(chain.stages)
        and all(t.witness is not None and t.witness[2] != 0 for t in never.tests),
    }
    failed = [k for k, ok in checks.items() if not ok]
    return not failed, f"failing: {failed}" if failed else "all clauses hold", 5.0


def criterion_9():
    rng = random.Random(SEED + 9)
    bad = []
    for _ in range(1000):
        m = rng.randint(0, 4)
        p = _poly(rng, m, 6, 8)
        if parse_poly(print_poly(p), m) != p:
            bad.append(print_poly(p))
    return not bad, f"1000 polynomials, mismatches: {bad[:3]}", 5.0


CRITERIA = {
    1: ("simple pole residue equals 1", criterion_1),
    2: ("Res_X^+ equals the X^-1 coefficient at infinity", criterion_2),
    3: ("localization sums on CP^n are polynomial", criterion_3),
    4: ("kernel decisions on CP^1", criterion_4),
    5: ("kernel_test agrees with the residue sweep on CP^2", criterion_5),
    6: ("decomposition contract on the CP^2 sweep", criterion_6),
    7: ("divisibility and residue witnesses", criterion_7),
    8: ("staged detection on CP^1 x CP^1", criterion_8),
    9: ("parser round trip", criterion_9),
}


def run_criterion(number):
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    ok, detail, limit = fn()
    elapsed = time.perf_counter() - start
    if number == 6:
        # the sweep is shared with criterion 5; its runtime budget covers both
        elapsed += _SWEEP.get("seconds", 0.0)
    in_time = elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s, limit {limit:.0f}s) - {detail}"
    return ok and in_time, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = run_criterion(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    import sys

    results = [run_criterion(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
