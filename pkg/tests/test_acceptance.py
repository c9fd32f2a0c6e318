"""Acceptance checks, one test per criterion; each prints a single PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""
import csv
import io
import json
import math
import os
import random
import time
from fractions import Fraction

import pytest

from algebase import cli
from algebase.classb import make_class_b, split_factors, trinomial
from algebase.dominance import BudgetExhausted, dominance_index, pierce_number, power_charpoly
from algebase.parry import (
    GOLDEN,
    conjugation_trace,
    gap_inequality_check,
    lehmer_base,
    parry_digits,
    pisot_csv,
    pisot_poly,
    pisot_sequence,
    section_series,
)
from algebase.periodic import AlgebraicBase, renyi_stream, schmidt_suite
from algebase.poly import IntPoly, divides, exact_div, gcd_primitive, parse_poly, reciprocal, resultant
from algebase.roots import UnitCircleError, classify_modulus, mahler_graeffe, mahler_roots
from algebase.table import reproduce_table
from algebase.trail import rewriting_trail, theorem_alphabet

TAU = parse_poly("x^2 - x - 1")
PLASTIC = parse_poly("x^3 - x - 1")


def verdict(num, title, failures, detail=""):
    ok = not failures
    line = f"{'PASS' if ok else 'FAIL'} [{num:2d}] {title}"
    if detail:
        line += f" :: {detail}"
    if failures:
        line += f" :: {'; '.join(failures[:3])}"
    print(line)
    assert ok, "; ".join(failures)


def lucas(n):
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def random_monic(rng, max_deg, max_h):
    d = rng.randint(1, max_deg)
    return IntPoly([rng.randint(-max_h, max_h) for _ in range(d)] + [1])


def test_01_golden_ratio_alphabet(capsys):
    t0 = time.perf_counter()
    code = cli.main(["alphabet", "x^2 - x - 1"])
    dt = time.perf_counter() - t0
    d = json.loads(capsys.readouterr().out)
    fails = []
    if code != 0:
        fails.append(f"exit {code}")
    if d.get("m") != "3":
        fails.append(f"m = {d.get('m')}")
    if d.get("N") != 2:
        fails.append(f"N = {d.get('N')}")
    if "index 3" not in d.get("note", ""):
        fails.append("missing discrepancy note")
    if dt >= 1:
        fails.append(f"runtime {dt:.2f}s")
    with capsys.disabled():
        verdict(1, "golden-ratio maximal alphabet", fails, f"m=3 N=2 in {dt:.3f}s")


def test_02_reference_table(capsys):
    t0 = time.perf_counter()
    rows = reproduce_table(jobs=min(4, os.cpu_count() or 1), backend="numeric")
    dt = time.perf_counter() - t0
    fails = [f"row {r.label}: rel dev {r.relative_deviation:.2e}" for r in rows if not r.relative_deviation <= 1e-6]
    if len(rows) != 10:
        fails.append(f"{len(rows)} rows")
    if dt > 3600:
        fails.append(f"runtime {dt:.0f}s")
    worst = max(r.relative_deviation for r in rows)
    with capsys.disabled():
        verdict(2, "ten-row alphabet table", fails, f"max rel dev {worst:.2e}, {dt:.1f}s")


def test_03_pierce_consistency(capsys):
    rng = random.Random(3)
    fails = []
    for _ in range(200):
        p = random_monic(rng, 8, 10)
        N = rng.randint(1, 50)
        a = abs(resultant(p, IntPoly.monomial(N) - 1))
        b = abs(power_charpoly(p, N, "exact")(1))
        if a != b:
            fails.append(f"{p}, N={N}: {a} != {b}")
        if pierce_number(p, 1) != abs(p(1)):
            fails.append(f"Delta_1 for {p}")
    for N in range(1, 31):
        if pierce_number(TAU, N) != abs(1 + (-1) ** N - lucas(N)):
            fails.append(f"Lucas N={N}")
    with capsys.disabled():
        verdict(3, "Pierce numbers: resultant vs charpoly", fails, "200 random + Lucas N<=30")


def test_04_dominance_bounds(capsys):
    rng = random.Random(4)
    fails = []
    done = 0
    while done < 100:
        p = random_monic(rng, 6, 8)
        if p[0] == 0:
            continue
        t = rng.choice([Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)])
        try:
            rep = dominance_index(p, t, "auto", N_max=5000)
        except (UnitCircleError, BudgetExhausted):
            continue
        done += 1
        delta = rep.pierce_N
        if not abs(rep.dominant) * (1 + t) > t * delta:
            fails.append(f"{p} t={t}: |g_j0| = {abs(rep.dominant)}, Delta = {delta}")
        need = -(-(Fraction(delta, 2) - 1) // 2)  # ceil((Delta/2 - 1)/2)
        if not rep.m >= need:
            fails.append(f"{p}: m = {rep.m} < {need}")
    with capsys.disabled():
        verdict(4, "dominance and alphabet lower bounds", fails, f"{done} reports")


def test_05_rewriting_trail(capsys):
    rng = random.Random(5)
    fails = []
    for _ in range(1000):
        s = rng.randint(1, 30)
        s_star = IntPoly([1] + [rng.choice([-1, 0, 1]) for _ in range(s - 1)] + [rng.choice([-1, 1])])
        d = rng.randint(1, 8)
        H = rng.randint(1, 20)
        P = IntPoly([1] + [rng.randint(-H, H) for _ in range(d - 1)] + [rng.choice([-1, 1]) * rng.randint(1, H)])
        d, H = P.degree, P.height
        cert = rewriting_trail(s_star, P)
        h = cert.remainder
        if cert.rewriting_polys[-1] * s_star + P != h.shift(d + 1):
            fails.append(f"identity for {s_star}, {P}")
        if not (h.is_zero() or h.degree <= s_star.degree - 1):
            fails.append(f"deg h for {s_star}, {P}")
        if h.height > (2**d - 1) * H + 2**d:
            fails.append(f"height h for {s_star}, {P}")
        if cert.m_theorem != -(-2 * ((2**d - 1) * H + 2**d) // 3) or cert.m_theorem != theorem_alphabet(d, H):
            fails.append(f"m_theorem for {P}")
    S3 = parse_poly("1 - x - x^3")
    for p, h in (("1 + x", [2, 1, 2]), ("1 - x", [0, 1]), ("1 + 2*x + x^2", [5, 3, 4])):
        if rewriting_trail(S3, parse_poly(p)).remainder != IntPoly(h):
            fails.append(f"hand example {p}")
    with capsys.disabled():
        verdict(5, "rewriting-trail certificates", fails, "1000 random + 3 hand examples")


def test_06_schmidt(capsys):
    fails = []
    info = []
    for name, S in (("tau", TAU), ("plastic", PLASTIC)):
        summary = schmidt_suite(AlgebraicBase.largest_real_root(S), 50, budget=10**5)
        info.append(f"{name} {summary.periodic}/{summary.total}")
        if summary.periodic != summary.total:
            fails.append(f"{name}: {summary.periodic}/{summary.total}")
    with capsys.disabled():
        verdict(6, "greedy expansions of p/q, q<=50, eventually periodic", fails, ", ".join(info))


def test_07_expansion_of_one(capsys):
    fails = []
    tau = "".join(map(str, renyi_stream(AlgebraicBase.largest_real_root(TAU), 1)))
    plastic = "".join(map(str, renyi_stream(AlgebraicBase.largest_real_root(PLASTIC), 1)))
    if tau != "11":
        fails.append(f"d_tau(1) = {tau}")
    if plastic != "10001":
        fails.append(f"d_plastic(1) = {plastic}")
    with capsys.disabled():
        verdict(7, "expansions of 1", fails, f"tau: {tau}, plastic: {plastic}")


def test_08_selmer(capsys):
    fails = []
    sel = parse_poly("x^2 - x + 1")
    for n in range(2, 102):
        f = trinomial(n)
        div = divides(sel, f)
        if div != (n % 6 == 5):
            fails.append(f"n={n}")
        if div and exact_div(f, sel).degree != n - 2:
            fails.append(f"quotient degree n={n}")
    with capsys.disabled():
        verdict(8, "trinomial cyclotomic factor iff n = 5 mod 6", fails, "n = 2..101")


def test_09_class_b_split(capsys):
    rng = random.Random(9)
    fails = []
    for _ in range(500):
        n = rng.randint(2, 10)
        exps, prev = [], n
        for _ in range(rng.randint(0, 6)):
            m = prev + n - 1 + rng.randint(0, 8)
            if m > 80:
                break
            exps.append(m)
            prev = m
        f = make_class_b(n, exps).poly
        s = split_factors(f)
        C = s.nonreciprocal_part
        if s.cyclotomic_part * s.reciprocal_noncyclotomic_part * C != f:
            fails.append(f"product for {f}")
        if gcd_primitive(C, reciprocal(C)).degree != 0:
            fails.append(f"C not coprime for {f}")
        try:
            if classify_modulus(C).undecided:
                fails.append(f"root of C near the circle for {f}")
        except UnitCircleError:
            fails.append(f"root of C on the circle for {f}")
    with capsys.disabled():
        verdict(9, "class-B split A*B*C", fails, "500 polynomials")


def test_10_mahler(capsys):
    rng = random.Random(10)
    fails = []
    worst = 0.0
    for _ in range(100):
        d = rng.randint(1, 20)
        p = IntPoly([rng.choice([-1, 1]) * rng.randint(1, 20)] + [rng.randint(-20, 20) for _ in range(d - 1)] + [rng.randint(1, 20)])
        g, r = float(mahler_graeffe(p)), float(mahler_roots(p))
        rel = abs(g - r) / r
        worst = max(worst, rel)
        if rel > 1e-9:
            fails.append(f"{p}: {g} vs {r}")
    for n in (12, 77):
        m = float(mahler_roots(trinomial(n)))
        if abs(m - 1.38) > 0.01:
            fails.append(f"M(-1+x+x^{n}) = {m}")
    m = float(mahler_graeffe(TAU))
    if abs(m - 1.6180339887) > 1e-9:
        fails.append(f"M(tau) = {m}")
    with capsys.disabled():
        verdict(10, "Mahler measures", fails, f"max Graeffe/roots rel dev {worst:.1e}")


def test_11_pisot_family(capsys, tmp_path):
    fails = []
    if pisot_poly(1) != parse_poly("x^3 - x - 1"):
        fails.append(f"P_2 = {pisot_poly(1)}")
    recs = pisot_sequence(10)
    betas = [r.beta for r in recs]
    if not all(a < b for a, b in zip(betas, betas[1:])):
        fails.append("beta_k not increasing")
    if not all(b < GOLDEN for b in betas):
        fails.append("beta_k above the golden ratio")
    out = tmp_path / "pisot.csv"
    out.write_text(pisot_csv(recs))
    rows = list(csv.reader(io.StringIO(out.read_text())))
    if rows[0] != ["k", "beta_k", "m_k_mantissa", "m_k_exponent"] or len(rows) != 11:
        fails.append("CSV shape")
    with capsys.disabled():
        verdict(11, "Pisot family P_2k", fails, f"beta_10 = {betas[-1]:.10f}")


def test_12_lehmer_sections(capsys):
    t0 = time.perf_counter()
    beta = lehmer_base()
    series = section_series(beta, 12)
    fails = []
    for cb in series.sections:
        try:
            make_class_b(cb.n, cb.exponents)
        except ValueError as exc:
            fails.append(f"gap: {exc}")
    etas = [float(e) for e in series.etas]
    if not (etas[-1] < etas[0] and all(b < a for a, b in zip(etas, etas[1:]))):
        fails.append("eta_s not decreasing")
    gap = gap_inequality_check(parry_digits(beta, 30), beta=beta)
    if not gap.all_hold:
        fails.append("gap inequality")
    r = 0.02
    tr = conjugation_trace(series, complex(0.8431, 0.3647), r, truncation_degree=200)
    omega = complex(tr.omega.center)
    if not abs(omega) + r < 1:
        fails.append("disk leaves the unit disk")
    final = tr.pbeta_values[-1]
    if final is None or not final < 1e-3:
        fails.append(f"|P_beta(r_s)| at the final section = {final:.4g} (needs < 1e-3)")
    dt = time.perf_counter() - t0
    if dt > 1800:
        fails.append(f"runtime {dt:.0f}s")
    detail = (
        f"deg {series.sections[-1].poly.degree}, eta {etas[0]:.2e} -> {etas[-1]:.2e}, "
        f"Omega = {omega.real:.6f}{omega.imag:+.6f}i, {gap.checked} gap pairs"
    )
    with capsys.disabled():
        verdict(12, "Lehmer sections and conjugate tracking", fails, detail)
