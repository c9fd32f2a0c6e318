"""Parry upper function sections, conjugate tracking and the Pisot family P_2k.

For a base b with greedy expansion of 1 made of 0/1 digits at positions
1, n, m_1, m_2, ..., the power series f_b(x) = -1 + x + x^n + sum x^(m_q)
vanishes at 1/b.  Its truncations ("sections") are almost Newman
polynomials; each one carries its own base g_s > 1.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpc, mpfr

from .classb import ClassBPoly, check_gaps, gamma_from_section, make_class_b, theta
from .dominance import Alphabet, maximal_alphabet, scientific
from .periodic import AlgebraicBase, BudgetExceeded, WindowEscape, expansion_engine, renyi_stream
from .poly import IntPoly, RationalVector, exact_div, parse_poly
from .roots import GraeffeNonConvergence, RootEnclosure, context, find_roots, mahler_graeffe, mahler_roots
from .serialize import fmt_float

LEHMER = parse_poly("x^10 + x^9 - x^7 - x^6 - x^5 - x^4 - x^3 + x + 1")
GOLDEN = (1 + math.sqrt(5)) / 2


def lehmer_base() -> AlgebraicBase:
    return AlgebraicBase.largest_real_root(LEHMER)


# --- digits of 1 ------------------------------------------------------------------


def parry_digits(beta: AlgebraicBase, count: int, max_steps: int = 10**6) -> tuple[int, ...]:
    """Positions of the 1-digits in the greedy expansion of 1 (at most `count`)."""
    out = []
    for k, a in enumerate(itertools.islice(renyi_stream(beta, 1), max_steps), 1):
        if a not in (0, 1):
            raise ValueError(f"digit {a} at position {k}: base is not below 2")
        if a:
            out.append(k)
            if len(out) >= count:
                break
    else:
        if len(out) < count and k >= max_steps:
            raise BudgetExceeded(f"only {len(out)} nonzero digits in {max_steps} steps")
    exps = tuple(out)
    if len(exps) < 2 or exps[0] != 1:
        raise ValueError(f"expansion of 1 does not start 1, n, ...: {exps[:5]}")
    check_gaps(exps[1], exps[2:])
    return exps


# --- sections -----------------------------------------------------------------------


def _eval_abs(P: IntPoly, x, bits: int = 256) -> mpfr:
    with context(bits):
        acc = mpc(0) if isinstance(x, mpc) else mpfr(0)
        for c in reversed(P.coeffs):
            acc = acc * x + c
        return abs(acc)


def _section_data(args):
    cb, P, precision = args
    g = gamma_from_section(cb, precision)
    with context(precision + 32):
        eta = _eval_abs(P, g.value(precision), precision + 32)
    return g, eta


@dataclass
class ParrySectionSeries:
    beta: AlgebraicBase
    n: int
    digit_exponents: tuple[int, ...]
    sections: list[ClassBPoly]
    gammas: list[AlgebraicBase] = field(repr=False)
    etas: list[mpfr]

    @property
    def P_beta(self) -> IntPoly:
        return self.beta.ring_poly

    def eta_decreasing_tail(self, count: int = 5) -> bool:
        tail = self.etas[-count:]
        return all(b < a for a, b in zip(tail, tail[1:]))


def section_series(beta: AlgebraicBase, s_max: int, precision: int = 256, jobs: int = 1) -> ParrySectionSeries:
    """Sections s = 0, ..., s_max - 1; section s keeps the first s exponents after n.

    A finite expansion of 1 yields fewer sections (the polynomial itself last).
    """
    exps = parry_digits(beta, s_max + 1)
    n = exps[1]
    g = float(beta)
    if not (1 / float(theta(n)) < g < 1 / float(theta(n - 1))):
        raise ValueError(f"base {g} not between 1/theta_{n} and 1/theta_{n - 1}")
    sections = [make_class_b(n, exps[2 : 2 + s]) for s in range(min(s_max, len(exps) - 1))]
    P = beta.ring_poly
    work = [(cb, P, precision) for cb in sections]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_section_data, work))
    else:
        results = [_section_data(w) for w in work]
    return ParrySectionSeries(
        beta=beta,
        n=n,
        digit_exponents=exps,
        sections=sections,
        gammas=[r[0] for r in results],
        etas=[r[1] for r in results],
    )


# --- conjugate tracking -------------------------------------------------------------


@dataclass
class ConjugationTrace:
    omega: RootEnclosure
    disk_radius: float
    tracked_roots: list[RootEnclosure | None]
    pbeta_values: list[float | None]
    valid: list[bool]
    etas: list[float]

    def rows(self):
        for s, (r, v, e) in enumerate(zip(self.tracked_roots, self.pbeta_values, self.etas)):
            if r is None:
                yield s, None, None, e, None
            else:
                yield s, float(r.center.real), float(r.center.imag), e, v

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "re_r_s", "im_r_s", "eta_s", "pbeta_abs"])
        for s, re, im, e, v in self.rows():
            w.writerow([s, _fmt(re), _fmt(im), _fmt(e), _fmt(v)])
        return buf.getvalue()


_fmt = fmt_float


def truncation(exps: tuple[int, ...], degree: int) -> IntPoly:
    p = IntPoly([-1])
    for e in exps:
        if e <= degree:
            p = p + IntPoly.monomial(e)
    return p


def _zeros_in_disk(p: IntPoly, center: complex, r: float, precision: int = 64):
    inside, straddle = [], 0
    for e in find_roots(p, precision):
        dist = abs(complex(e.center) - center)
        rad = float(e.radius)
        if dist + rad < r:
            inside.extend([e] * e.multiplicity)
        elif dist - rad <= r:
            straddle += 1
    return inside, straddle


def locate_omega(series: ParrySectionSeries, seed: complex, radius: float, truncation_degree: int = 200) -> RootEnclosure:
    """Zero of a high-degree truncation of f_b nearest to `seed`, isolated in its disk."""
    count = len(series.digit_exponents)
    exps = parry_digits(series.beta, count)
    while exps[-1] <= truncation_degree:
        count *= 2
        exps = parry_digits(series.beta, count)
    T = truncation(exps, truncation_degree)
    roots = find_roots(T, 64)
    best = min(roots, key=lambda e: abs(complex(e.center) - seed))
    c = complex(best.center)
    if abs(c) + radius >= 1:
        raise ValueError(f"disk around {c:.6g} of radius {radius} leaves the unit disk")
    inv = 1 / float(series.beta)
    if abs(c - inv) < radius:
        raise ValueError("the tracked zero must differ from 1/beta")
    inside, straddle = _zeros_in_disk(T, c, radius)
    if len(inside) != 1 or straddle:
        raise ValueError(f"truncation has {len(inside)} zeros (+{straddle} on the boundary) in the disk")
    return best


def conjugation_trace(series: ParrySectionSeries, omega_seed: complex, radius: float = 0.02, truncation_degree: int = 200) -> ConjugationTrace:
    omega = locate_omega(series, omega_seed, radius, truncation_degree)
    c = complex(omega.center)
    P = series.P_beta
    tracked, values, valid = [], [], []
    for cb in series.sections:
        inside, straddle = _zeros_in_disk(cb.poly, c, radius)
        if len(inside) == 1 and not straddle:
            z = inside[0]
            tracked.append(z)
            values.append(float(_eval_abs(P, z.center)))
            valid.append(True)
        else:
            tracked.append(None)
            values.append(None)
            valid.append(False)
    return ConjugationTrace(omega, radius, tracked, values, valid, [float(e) for e in series.etas])


# --- gap inequality -------------------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    n: int
    checked: int
    all_hold: bool
    max_ratio: float
    limsup_bound: float  # log M(b) / log b, reported only


def gap_inequality_check(exponents, n: int | None = None, beta: AlgebraicBase | None = None) -> GapReport:
    """1 + (n - 1)/m_j <= m_(j+1)/m_j over consecutive exponents n, m_1, m_2, ..."""
    exps = list(exponents)
    if exps and exps[0] == 1:
        exps = exps[1:]
    if n is None:
        n = exps[0]
    holds = True
    ratios = []
    for a, b in zip(exps, exps[1:]):
        holds &= Fraction(b, a) >= 1 + Fraction(n - 1, a)
        ratios.append(b / a)
    bound = math.nan
    if beta is not None:
        M = float(mahler_roots(beta.ring_poly))
        bound = math.log(M) / math.log(float(beta))
    return GapReport(n, len(ratios), bool(holds), max(ratios) if ratios else math.nan, bound)


# --- Pisot family -----------------------------------------------------------------------


@dataclass(frozen=True)
class PisotRecord:
    k: int
    poly: IntPoly
    beta: float
    m: int
    N: int

    def csv_row(self):
        mant, ex = scientific(self.m)
        return [self.k, fmt_float(self.beta), mant, ex]


def pisot_raw(k: int) -> IntPoly:
    """(1 - z^(2k) (1 + z - z^2)) / (1 - z), exactly."""
    num = IntPoly([1]) - IntPoly([1, 1, -1]).shift(2 * k)
    return exact_div(num, IntPoly([1, -1]))


def pisot_poly(k: int) -> IntPoly:
    p = pisot_raw(k)
    return -p if p.lead < 0 else p


def pisot_sequence(k_max: int, backend: str = "auto") -> list[PisotRecord]:
    out = []
    prev = 1.0
    for k in range(1, k_max + 1):
        P = pisot_poly(k)
        base = AlgebraicBase.largest_real_root(P)
        b = float(base)
        if not (prev < b < GOLDEN):
            raise AssertionError(f"beta_{k} = {b} breaks 1 < beta_1 < beta_2 < ... < golden ratio")
        alphabet, rep = maximal_alphabet(P, backend)
        out.append(PisotRecord(k, P, b, alphabet.m, rep.N))
        prev = b
    return out


def pisot_csv(records: list[PisotRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "beta_k", "m_k_mantissa", "m_k_exponent"])
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


# --- Mahler growth ------------------------------------------------------------------------


def measure(p: IntPoly) -> mpfr:
    try:
        return mahler_graeffe(p)
    except GraeffeNonConvergence:
        return mahler_roots(p)


def mahler_series(series: ParrySectionSeries | list[ClassBPoly], jobs: int = 1) -> list[tuple[int, int, float]]:
    sections = series.sections if isinstance(series, ParrySectionSeries) else list(series)
    polys = [cb.poly for cb in sections]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            values = list(pool.map(measure, polys))
    else:
        values = [measure(p) for p in polys]
    return [(j, p.degree, float(v)) for j, (p, v) in enumerate(zip(polys, values))]


def mahler_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "deg", "M_j"])
    for j, d, m in rows:
        w.writerow([j, d, fmt_float(m)])
    return buf.getvalue()


# --- first-digit trend -------------------------------------------------------------------


def inverse_vector(S: IntPoly) -> tuple[int, ...]:
    """Coordinates of 1/g in Z[g] for monic S with S(0) = +-1."""
    c0 = S[0]
    if c0 not in (1, -1):
        raise ValueError("1/g is not an algebraic integer combination")
    # S(g) = 0  =>  g * (sum_{i>=1} s_i g^(i-1)) = -s_0
    return tuple(-c0 * c for c in S.coeffs[1:])


def _ring_mul(a: tuple[int, ...], b: tuple[int, ...], S: IntPoly) -> tuple[int, ...]:
    prod = IntPoly(a) * IntPoly(b)
    r = prod % S if prod.degree >= S.degree else prod
    out = list(r.coeffs) + [0] * (S.degree - len(r.coeffs))
    return tuple(out)


def pbeta_at_inverse(P: IntPoly, base: AlgebraicBase) -> RationalVector:
    """P(1/g) as a coordinate vector in Z[g]."""
    S = base.ring_poly
    n = S.degree
    inv = inverse_vector(S)
    acc = tuple([0] * n)
    for c in reversed(P.coeffs):
        acc = _ring_mul(acc, inv, S)
        acc = (acc[0] + c,) + acc[1:]
    return RationalVector(acc, 1)


@dataclass(frozen=True)
class TrendPoint:
    s: int
    eta: float
    w: int | None  # from a verified periodic representation
    status: str
    w_prefix: int | None = None  # first nonzero digit of the stream, verified or not


def first_digit_trend(series: ParrySectionSeries, m: int, budget: int = 20_000) -> list[TrendPoint]:
    """First nonzero digit index of a periodic expansion of P_b(1/g_s) in base g_s."""
    P = series.P_beta
    out = []
    for s, (g, eta) in enumerate(zip(series.gammas, series.etas)):
        x = pbeta_at_inverse(P, g)
        try:
            rep = expansion_engine(g, x, Alphabet(m), budget)
            out.append(TrendPoint(s, float(eta), rep.w, "ok", rep.w))
        except BudgetExceeded as exc:
            first = next((k for k, a in enumerate(exc.digits, 1) if a), None)
            out.append(TrendPoint(s, float(eta), None, "budget", first))
        except WindowEscape:
            out.append(TrendPoint(s, float(eta), None, "window"))
    return out


def w_nondecreasing(points: list[TrendPoint]) -> bool:
    ws = [p.w for p in points if p.w is not None]
    return all(b >= a for a, b in zip(ws, ws[1:]))
