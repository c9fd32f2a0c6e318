"""Quick built-in checks, one list per module, run by ``algebase <cmd> --selftest``."""
from __future__ import annotations

import math
from fractions import Fraction

from .poly import IntPoly, arithmetic, cyclotomic, gcd_primitive, parse_poly, reciprocal, resultant


def _raises(fn, exc) -> bool:
    try:
        fn()
    except exc:
        return True
    return False


def poly_checks():
    x = parse_poly
    return [
        ("parse zero", lambda: x("0").is_zero()),
        ("parse cancellation", lambda: x("3*x^2 - 3*x^2").is_zero()),
        ("difference of squares", lambda: arithmetic("mul", x("1 + x"), x("1 - x")) == x("1 - x^2")),
        ("additive identity", lambda: arithmetic("add", x("x^3 - 2"), IntPoly([])) == x("x^3 - 2")),
        ("reciprocal of 1", lambda: reciprocal(IntPoly([1])) == IntPoly([1])),
        ("Phi_1", lambda: cyclotomic(1) == x("x - 1")),
        ("resultant with constant 1", lambda: resultant(x("x^3 - 5*x + 1"), IntPoly([1])) == 1),
        ("gcd(x^2 - 1, x - 1)", lambda: gcd_primitive(x("x^2 - 1"), x("x - 1")) == x("x - 1")),
        ("gcd idempotent", lambda: gcd_primitive(x("6*x^2 + 4"), x("6*x^2 + 4")) == x("3*x^2 + 2")),
    ]


def roots_checks():
    from .roots import UnitCircleError, classify_modulus, find_roots, mahler_measure, real_root_in_interval

    x = parse_poly

    def single():
        (e,) = find_roots(x("x - 2"))
        return e.radius == 0 and e.center == 2

    def double():
        (e,) = find_roots(x("x^2 - 2*x + 1"))
        return e.multiplicity == 2 and abs(complex(e.center) - 1) < 1e-30

    def half():
        e = real_root_in_interval(x("2*x - 1"), 0, 1)
        return e.real_interval == (Fraction(1, 2), Fraction(1, 2))

    return [
        ("x - 2", single),
        ("(x - 1)^2", double),
        ("Phi_6 on the circle", lambda: _raises(lambda: classify_modulus(x("x^2 - x + 1")), UnitCircleError)),
        ("root 1/2 in (0, 1)", half),
        ("M(x^2 - x - 1)", lambda: abs(float(mahler_measure(x("x^2 - x - 1"))) - (1 + math.sqrt(5)) / 2) < 1e-12),
        ("M(x - 1)", lambda: abs(float(mahler_measure(x("x - 1"))) - 1) < 1e-12),
        ("M(Phi_3 Phi_5)", lambda: abs(float(mahler_measure(cyclotomic(3) * cyclotomic(5))) - 1) < 1e-9),
    ]


def dominance_checks():
    from .dominance import bound_checks, companion_matrix, dominance_index, pierce_number, power_charpoly

    p = parse_poly("x - 2")

    def bounds():
        rep = dominance_index(p, 1)
        return rep.N == 1 and bound_checks(rep).pierce_bound

    return [
        ("companion of x - 2", lambda: companion_matrix(p) == [[2]]),
        ("charpoly of A^4", lambda: power_charpoly(p, 4) == parse_poly("x - 16")),
        ("Delta_10(x - 2)", lambda: pierce_number(p, 10) == 1023),
        ("dominance index of x - 2", lambda: dominance_index(p, 1).N == 1),
        ("bound at N = 1", bounds),
        ("Delta_5(x^2 - x - 1)", lambda: pierce_number(parse_poly("x^2 - x - 1"), 5) == 11),
    ]


def trail_checks():
    from dataclasses import replace

    from .trail import rewriting_trail, verify_trail

    cert = rewriting_trail(parse_poly("1 - x - x^2"), parse_poly("1 + x + x^2"))

    def tampered_h():
        h = list(cert.remainder.coeffs)
        h[0] += 1
        bad = replace(cert, remainder=IntPoly(h))
        return not verify_trail(bad)["identity"]

    def tampered_trace():
        bad = replace(cert, height_trace=(10**6,) + cert.height_trace[1:])
        v = verify_trail(bad)
        return not v["height_trace"] and v["identity"]

    return [
        ("valid certificate", lambda: all(verify_trail(cert).values())),
        ("tampered remainder", tampered_h),
        ("tampered height trace", tampered_trace),
    ]


def periodic_checks():
    from .dominance import Alphabet
    from .periodic import AlgebraicBase, expansion_engine, renyi_digits, renyi_stream, schmidt_suite, verify_representation

    tau = AlgebraicBase.largest_real_root(parse_poly("x^2 - x - 1"))

    def zero():
        rep = renyi_digits(tau, 0)
        return rep.is_finite and rep.w is None and all(verify_representation(rep, 0).values())

    def neg_half():
        rep = expansion_engine(tau, Fraction(-1, 2), Alphabet(3))
        return all(verify_representation(rep, Fraction(-1, 2)).values())

    def altered():
        rep = expansion_engine(tau, Fraction(1, 2), Alphabet(1))
        per = list(rep.period_digits)
        k = next(i for i, a in enumerate(per) if a)
        per[k] = 0
        bad = type(rep)(rep.base, rep.alphabet, rep.preperiod_digits, tuple(per), rep.L, rep.r, rep.w)
        return not verify_representation(bad, Fraction(1, 2))["ring_identity"]

    two = AlgebraicBase.largest_real_root(parse_poly("x - 2"))
    return [
        ("zero representation", zero),
        ("expansion of 1 in base tau", lambda: list(renyi_stream(tau, 1)) == [1, 1]),
        ("engine on -1/2", neg_half),
        ("altered period digit", altered),
        ("binary Q = 20", lambda: schmidt_suite(two, 20).fraction_periodic == 1),
    ]


def classb_checks():
    from .classb import GapViolation, gamma_from_section, make_class_b, theta

    return [
        ("gap violation (3, [4])", lambda: _raises(lambda: make_class_b(3, [4]), GapViolation)),
        ("base of -1 + x + x^2", lambda: abs(float(gamma_from_section(make_class_b(2))) - (1 + math.sqrt(5)) / 2) < 1e-12),
        ("theta_2", lambda: abs(float(theta(2)) - (math.sqrt(5) - 1) / 2) < 1e-12),
    ]


def parry_checks():
    from .classb import make_class_b
    from .parry import gap_inequality_check, measure, parry_digits, section_series
    from .periodic import AlgebraicBase

    tau = AlgebraicBase.largest_real_root(parse_poly("x^2 - x - 1"))

    def degenerate():
        series = section_series(tau, 5)
        return len(series.sections) == 1 and series.sections[0].poly == parse_poly("x^2 + x - 1")

    def reciprocal_measure():
        f = make_class_b(5, [9]).poly
        return abs(float(measure(f)) - float(measure(-reciprocal(f)))) < 1e-12

    return [
        ("digits of 1 in base tau", lambda: parry_digits(tau, 5) == (1, 2)),
        ("degenerate series", degenerate),
        ("two-exponent gap check", lambda: gap_inequality_check((5, 9)).checked == 1),
        ("measure is reciprocal-invariant", reciprocal_measure),
    ]


SUITES = {
    "poly": poly_checks,
    "roots": roots_checks,
    "dominance": dominance_checks,
    "trail": trail_checks,
    "periodic": periodic_checks,
    "classb": classb_checks,
    "parry": parry_checks,
}


def run_suite(name: str) -> list[tuple[str, bool]]:
    out = []
    for label, check in SUITES[name]():
        try:
            ok = bool(check())
        except Exception as exc:  # a crash is a failed check
            ok = False
            label = f"{label} ({type(exc).__name__}: {exc})"
        out.append((label, ok))
    return out
