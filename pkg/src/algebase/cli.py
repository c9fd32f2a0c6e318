"""Command-line front end: ``algebase <command> [options]``.

Exit status 0 on success, 1 on usage errors, 2 on computational failures
(budget, precision, root isolation).  Errors are printed as JSON objects.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import serialize
from .classb import GapViolation, IncompleteCyclotomicScan
from .poly import IntPoly, PolyParseError, RationalVector, parse_poly
from .trail import TrailInputError

COMMANDS = ("alphabet", "pierce", "trail", "represent", "classb", "mahler", "parry", "pisot", "trace", "reproduce")
CSV_COMMANDS = {"parry", "pisot", "trace", "reproduce"}
SELFTEST_SUITES = {
    "alphabet": ("dominance",),
    "pierce": ("poly", "dominance"),
    "trail": ("trail",),
    "represent": ("periodic",),
    "classb": ("classb",),
    "mahler": ("poly", "roots"),
    "parry": ("parry",),
    "pisot": ("parry",),
    "trace": ("parry",),
    "reproduce": ("dominance",),
}
# reference dominance indices that differ from the computed minimal one
INDEX_NOTES = {"x^2 - x - 1": 3}


class UsageError(ValueError):
    pass


def _computational_errors() -> tuple[type[BaseException], ...]:
    from .dominance import BudgetExhausted, ConsistencyError
    from .periodic import BudgetExceeded, WindowEscape
    from .roots import GraeffeNonConvergence, PrecisionExceeded, RootIntervalError, UnitCircleError

    return (
        BudgetExhausted,
        BudgetExceeded,
        ConsistencyError,
        GraeffeNonConvergence,
        IncompleteCyclotomicScan,
        PrecisionExceeded,
        RootIntervalError,
        UnitCircleError,
        WindowEscape,
        ArithmeticError,
        ValueError,
    )


USAGE_ERRORS = (UsageError, PolyParseError, GapViolation, TrailInputError)


@dataclass
class JobConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    precision_bits: int | None = None
    budget: int | None = None
    backend: str = "auto"
    t: Fraction = Fraction(1)
    alphabet_m: int | None = None
    fmt: str = "json"
    out: str | None = None
    jobs: int = 1
    selftest: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.budget is not None and self.budget <= 0:
            raise UsageError("--budget must be a positive integer")
        if self.precision_bits is not None and self.precision_bits <= 0:
            raise UsageError("--precision-bits must be a positive integer")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.t <= 0:
            raise UsageError("--t must be a positive rational")
        if self.alphabet_m is not None and self.alphabet_m < 1:
            raise UsageError("--alphabet-m must be at least 1")
        if self.fmt not in ("json", "csv"):
            raise UsageError("--format must be json or csv")
        if self.fmt == "csv" and self.command not in CSV_COMMANDS:
            raise UsageError(f"{self.command} has no CSV output; CSV is available for {', '.join(sorted(CSV_COMMANDS))}")

    @property
    def precision(self) -> int:
        return self.precision_bits or 128


# --- argument parsing ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _number_or_vector(text: str):
    parts = [s for s in text.replace(" ", "").split(",") if s]
    if len(parts) == 1:
        return _rational(parts[0])
    return RationalVector.from_fractions([_rational(s) for s in parts])


def _complex(text: str) -> complex:
    parts = text.replace(" ", "").split(",")
    try:
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"expected 're,im' or a complex literal, got {text!r}") from None


def _poly(text: str | None, what: str = "polynomial") -> IntPoly:
    if text is None:
        raise UsageError(f"missing {what}")
    return parse_poly(text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=None, help="working precision for root enclosures")
    common.add_argument("--budget", type=int, default=None, help="iteration budget (N_max, engine steps, ...)")
    common.add_argument("--backend", choices=("exact", "numeric", "auto"), default="auto")
    common.add_argument("--t", type=_rational, default=Fraction(1), help="dominance ratio parameter")
    common.add_argument("--alphabet-m", type=int, default=None, help="alphabet {-m, ..., m}")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch work")
    common.add_argument("--selftest", action="store_true", help="run built-in checks and exit")

    parser = _Parser(prog="algebase", description="Alphabets and representations for algebraic bases.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("alphabet", parents=[common], help="minimal dominance index and maximal alphabet")
    p.add_argument("polys", nargs="*", metavar="POLY", help="monic integer polynomial(s)")

    p = sub.add_parser("pierce", parents=[common], help="Pierce number |prod(1 - a_i^N)|")
    p.add_argument("poly", nargs="?", metavar="POLY")
    p.add_argument("--N", type=int, default=None)

    p = sub.add_parser("trail", parents=[common], help="rewriting-trail certificate")
    p.add_argument("s_star", nargs="?", metavar="S_STAR", help="1 + sum of -1/0/+1 multiples of x^i")
    p.add_argument("p", nargs="?", metavar="P", help="polynomial with constant term 1")
    p.add_argument("--extra-steps", type=int, default=0)

    p = sub.add_parser("represent", parents=[common], help="eventually periodic representation of x")
    p.add_argument("base", nargs="?", metavar="BASE", help="defining polynomial of the base")
    p.add_argument("x", nargs="?", metavar="X", help="rational, or comma-separated power-basis coordinates")
    p.add_argument("--root", default=None, metavar="LO,HI", help="rational bracket of the base (default: largest real root)")

    p = sub.add_parser("classb", parents=[common], help="almost Newman polynomial analysis")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--exponents", type=_int_list, default=[])

    p = sub.add_parser("mahler", parents=[common], help="Mahler measure")
    p.add_argument("polys", nargs="*", metavar="POLY")
    p.add_argument("--method", choices=("auto", "graeffe", "roots"), default="auto")

    p = sub.add_parser("parry", parents=[common], help="sections of the Parry upper function")
    p.add_argument("--beta", default=None, help="defining polynomial of the base (default: Lehmer)")
    p.add_argument("--sections", type=int, default=12)

    p = sub.add_parser("pisot", parents=[common], help="the Pisot family P_2k")
    p.add_argument("--k-max", type=int, default=5)

    p = sub.add_parser("trace", parents=[common], help="track a zero of the sections near Omega")
    p.add_argument("--beta", default=None)
    p.add_argument("--sections", type=int, default=12)
    p.add_argument("--omega", type=_complex, default=complex(0.8431, 0.3647), help="seed for Omega as 're,im'")
    p.add_argument("--radius", type=float, default=0.02)
    p.add_argument("--truncation-degree", type=int, default=200)

    p = sub.add_parser("reproduce", parents=[common], help="recompute the reference table of alphabets")
    p.add_argument("target", nargs="?", default="table", choices=("table",))
    return parser


_GLOBALS = ("precision_bits", "budget", "backend", "t", "alphabet_m", "fmt", "out", "jobs", "selftest", "command")


def config_from_args(argv=None) -> JobConfig:
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError(f"missing command; choose from {', '.join(COMMANDS)}")
    d = vars(ns)
    inputs = {k: v for k, v in d.items() if k not in _GLOBALS}
    cfg = JobConfig(
        command=ns.command,
        inputs=inputs,
        precision_bits=ns.precision_bits,
        budget=ns.budget,
        backend=ns.backend,
        t=ns.t,
        alphabet_m=ns.alphabet_m,
        fmt=ns.fmt,
        out=ns.out,
        jobs=ns.jobs,
        selftest=ns.selftest,
    )
    cfg.validate()
    return cfg


# --- commands ------------------------------------------------------------------------------


def _index_note(rep) -> str | None:
    ref = INDEX_NOTES.get(str(rep.base_poly))
    if ref is None or ref == rep.N:
        return None
    g = rep.gN
    rest = sum(abs(c) for i, c in enumerate(g) if i != rep.j0)
    return (
        f"reference dominance index {ref} differs from the computed minimal index {rep.N}: "
        f"at N = {rep.N}, |g_{rep.j0}| = {abs(g[rep.j0])} > {rest} = sum of the other |g_i|"
    )


def _alphabet_one(args):
    from .dominance import DEFAULT_N_MAX, bound_checks, dominance_index, verify_minimality

    text, t, backend, budget, precision = args
    p = parse_poly(text)
    rep = dominance_index(p, t, backend, budget or DEFAULT_N_MAX, precision)
    checks = bound_checks(rep)
    out = rep.to_json()
    out["alphabet"] = {"m": str(rep.m), "size": str(2 * rep.m + 1)}
    out["bounds"] = {"pierce_bound": checks.pierce_bound, "alphabet_bound": checks.alphabet_bound}
    if rep.N * p.degree <= 20_000:
        out["minimality_rechecked"] = verify_minimality(rep)
    note = _index_note(rep)
    if note:
        out["note"] = note
    return out


def _batch(fn, work, jobs):
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(fn, work))
    return [fn(w) for w in work]


def cmd_alphabet(cfg: JobConfig):
    polys = cfg.inputs["polys"]
    if not polys:
        raise UsageError("alphabet needs at least one POLY")
    for text in polys:
        parse_poly(text)  # usage errors before any work
    results = _batch(_alphabet_one, [(s, cfg.t, cfg.backend, cfg.budget, cfg.precision) for s in polys], cfg.jobs)
    return results[0] if len(results) == 1 else {"results": results}


def cmd_pierce(cfg: JobConfig):
    from .dominance import pierce_number

    p = _poly(cfg.inputs["poly"])
    N = cfg.inputs["N"]
    if N is None or N < 1:
        raise UsageError("pierce needs --N >= 1")
    backend = "numeric" if cfg.backend == "numeric" else "exact"
    return {"poly": str(p), "N": N, "pierce": str(pierce_number(p, N, backend)), "backend": backend}


def cmd_trail(cfg: JobConfig):
    from .trail import rewriting_trail, verify_trail

    s_star = _poly(cfg.inputs["s_star"], "S_STAR")
    p = _poly(cfg.inputs["p"], "P")
    if cfg.inputs["extra_steps"] < 0:
        raise UsageError("--extra-steps must be >= 0")
    cert = rewriting_trail(s_star, p, cfg.inputs["extra_steps"])
    return {"certificate": json.loads(cert.to_json()), "verification": verify_trail(cert)}


def cmd_represent(cfg: JobConfig):
    from .dominance import Alphabet
    from .periodic import DEFAULT_BUDGET, AlgebraicBase, expansion_engine, renyi_digits, verify_representation

    S = _poly(cfg.inputs["base"], "BASE")
    if cfg.inputs["x"] is None:
        raise UsageError("missing X")
    x = _number_or_vector(cfg.inputs["x"])
    if isinstance(x, RationalVector) and len(x) != S.degree:
        raise UsageError(f"X has {len(x)} coordinates but the base has degree {S.degree}")
    if cfg.inputs["root"]:
        parts = cfg.inputs["root"].split(",")
        if len(parts) != 2:
            raise UsageError("--root expects LO,HI")
        base = AlgebraicBase.from_interval(S, _rational(parts[0]), _rational(parts[1]), cfg.precision)
    else:
        base = AlgebraicBase.largest_real_root(S, cfg.precision)
    budget = cfg.budget or DEFAULT_BUDGET
    if cfg.alphabet_m is None:
        rep = renyi_digits(base, x, budget)
        mode = "greedy"
    else:
        rep = expansion_engine(base, x, Alphabet(cfg.alphabet_m), budget)
        mode = "balanced"
    return {
        "mode": mode,
        "base_value": float(base),
        "x": str(x) if isinstance(x, Fraction) else [str(q) for q in x.to_fractions()],
        "representation": rep.to_json(),
        "verification": verify_representation(rep, x),
    }


def cmd_classb(cfg: JobConfig):
    from .classb import gamma_from_section, make_class_b, minimal_polynomial_candidate, nonreciprocal_coprime, selmer_classify, split_factors, theta
    from .roots import classify_modulus

    n = cfg.inputs["n"]
    if n is None or n < 2:
        raise UsageError("classb needs --n >= 2")
    cb = make_class_b(n, cfg.inputs["exponents"])
    split = split_factors(cb.poly)
    base = gamma_from_section(cb, cfg.precision)
    C = split.nonreciprocal_part
    out = {
        "class_b": cb.to_json(),
        "split": split.to_json(),
        "C_coprime_with_reciprocal": nonreciprocal_coprime(split),
        "C_roots_off_circle": C.degree < 1 or classify_modulus(C, cfg.precision).undecided == 0,
        "minimal_polynomial": str(minimal_polynomial_candidate(cb, split, cfg.precision)),
        "base_value": float(base),
        "theta_bracket": [float(theta(n - 1)), float(theta(n))],
    }
    if not cb.exponents:
        sel = selmer_classify(n)
        out["trinomial_irreducible"] = sel.irreducible
        if sel.quotient is not None:
            out["trinomial_quotient"] = str(sel.quotient)
    return out


def _mahler_one(args):
    from .roots import mahler_graeffe, mahler_measure, mahler_roots

    text, method, precision = args
    p = parse_poly(text)
    fn = {"auto": mahler_measure, "graeffe": lambda q, _: mahler_graeffe(q), "roots": mahler_roots}[method]
    return {"poly": str(p), "method": method, "mahler": float(fn(p, precision))}


def cmd_mahler(cfg: JobConfig):
    polys = cfg.inputs["polys"]
    if not polys:
        raise UsageError("mahler needs at least one POLY")
    for text in polys:
        parse_poly(text)
    work = [(s, cfg.inputs["method"], cfg.precision) for s in polys]
    results = _batch(_mahler_one, work, cfg.jobs)
    return results[0] if len(results) == 1 else {"results": results}


def _beta(cfg: JobConfig):
    from .parry import lehmer_base
    from .periodic import AlgebraicBase

    if cfg.inputs["beta"] is None:
        return lehmer_base()
    return AlgebraicBase.largest_real_root(parse_poly(cfg.inputs["beta"]), cfg.precision)


def _series(cfg: JobConfig):
    from .parry import section_series

    s = cfg.inputs["sections"]
    if s < 1:
        raise UsageError("--sections must be >= 1")
    return section_series(_beta(cfg), s, max(cfg.precision, 256), cfg.jobs)


def cmd_parry(cfg: JobConfig):
    from .parry import gap_inequality_check, mahler_csv, mahler_series

    series = _series(cfg)
    rows = mahler_series(series, cfg.jobs)
    if cfg.fmt == "csv":
        return mahler_csv(rows)
    gap = gap_inequality_check(series.digit_exponents, series.n, series.beta)
    return {
        "beta": series.beta.describe(),
        "beta_value": float(series.beta),
        "n": series.n,
        "digit_exponents": list(series.digit_exponents),
        "sections": [
            {"s": s, "exponents": list(cb.exponents), "degree": cb.poly.degree, "eta": float(eta), "mahler": m}
            for s, (cb, eta, (_, _, m)) in enumerate(zip(series.sections, series.etas, rows))
        ],
        "eta_decreasing": all(b < a for a, b in zip(series.etas, series.etas[1:])),
        "gap_inequality": {"checked": gap.checked, "all_hold": gap.all_hold, "max_ratio": gap.max_ratio, "limsup_bound": gap.limsup_bound},
    }


def cmd_pisot(cfg: JobConfig):
    from .parry import pisot_csv, pisot_sequence

    k = cfg.inputs["k_max"]
    if k < 1:
        raise UsageError("--k-max must be >= 1")
    records = pisot_sequence(k, cfg.backend)
    if cfg.fmt == "csv":
        return pisot_csv(records)
    return {
        "records": [
            {"k": r.k, "poly": str(r.poly), "beta": r.beta, "N": r.N, "m": str(r.m)}
            for r in records
        ]
    }


def cmd_trace(cfg: JobConfig):
    from .parry import conjugation_trace

    series = _series(cfg)
    tr = conjugation_trace(series, cfg.inputs["omega"], cfg.inputs["radius"], cfg.inputs["truncation_degree"])
    if cfg.fmt == "csv":
        return tr.to_csv()
    return {
        "omega": [float(tr.omega.center.real), float(tr.omega.center.imag)],
        "radius": tr.disk_radius,
        "rows": [
            {"s": s, "re_r_s": re, "im_r_s": im, "eta_s": e, "pbeta_abs": v}
            for s, re, im, e, v in tr.rows()
        ],
    }


def cmd_reproduce(cfg: JobConfig):
    from .table import reproduce_table

    backend = "numeric" if cfg.backend == "auto" else cfg.backend
    rows = reproduce_table(cfg.jobs, backend)
    if cfg.fmt == "csv":
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = ["label", "N", "j0", "m_mantissa", "m_exponent", "published_mantissa", "published_exponent", "relative_deviation"]
        w.writerow(keys)
        for r in rows:
            d = r.to_json()
            w.writerow([d[k] for k in keys])
        return buf.getvalue()
    worst = max(r.relative_deviation for r in rows)
    return {"rows": [r.to_json() for r in rows], "max_relative_deviation": f"{worst:.3e}", "within_1e-6": worst < 1e-6}


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def _selftest(cfg: JobConfig):
    from .selftest import run_suite

    checks = [{"suite": s, "check": label, "ok": ok} for s in SELFTEST_SUITES[cfg.command] for label, ok in run_suite(s)]
    return {"selftest": cfg.command, "checks": checks, "passed": all(c["ok"] for c in checks)}


# --- driver ---------------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _error(kind: str, exc: BaseException, code: int) -> str:
    return serialize.dumps({"error": {"type": kind, "exception": type(exc).__name__, "message": str(exc), "exit_code": code}})


def run(cfg: JobConfig) -> int:
    try:
        if cfg.selftest:
            result = _selftest(cfg)
            _emit(serialize.dumps(result), cfg.out)
            return 0 if result["passed"] else 2
        result = HANDLERS[cfg.command](cfg)
    except USAGE_ERRORS as exc:
        _emit(_error("usage", exc, 1), cfg.out)
        return 1
    except _computational_errors() as exc:
        _emit(_error("computation", exc, 2), cfg.out)
        return 2
    _emit(result if isinstance(result, str) else serialize.dumps(result), cfg.out)
    return 0


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except USAGE_ERRORS as exc:
        sys.stdout.write(_error("usage", exc, 1))
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
