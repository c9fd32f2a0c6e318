"""Dominant-coefficient powers of an algebraic integer and the derived alphabets.

For a monic P with roots a_1..a_d let P_N(X) = prod (X - a_i^N) =
X^d + g_1(N) X^(d-1) + ... + g_d(N).  With j0 roots outside the unit disk,
the coefficient g_j0(N) eventually dominates the sum of the others; the first
N where it beats t times that sum is the dominance index, and the digit
radius m = ceil((|g_j0| - 1)/2) + sum_{j != j0} |g_j| follows from it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Context, Decimal
from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .poly import IntPoly, resultant
from .serialize import fmt_float
from .roots import (
    PrecisionExceeded,
    RootEnclosure,
    classify_modulus,
    context,
    find_roots,
    mahler_measure,
    max_precision,
)

DEFAULT_N_MAX = 10**5
EXACT_DEGREE_LIMIT = 20
EXACT_N_LIMIT = 200


class BudgetExhausted(RuntimeError):
    pass


class ConsistencyError(AssertionError):
    """Two independent computations disagree; indicates a bug."""


def _require_monic(p: IntPoly):
    if p.degree < 1 or not p.is_monic():
        raise ValueError(f"expected a monic polynomial of degree >= 1, got {p}")


# --- companion matrix and the exact backend ------------------------------------


def companion_matrix(p: IntPoly) -> list[list[int]]:
    """Ones on the subdiagonal, last column -g_d, ..., -g_1 (top to bottom)."""
    _require_monic(p)
    d = p.degree
    H = [[0] * d for _ in range(d)]
    for i in range(1, d):
        H[i][i - 1] = 1
    for i in range(d):
        H[i][d - 1] = -p.coeffs[i]
    return H


def _matmul(A, B):
    n = len(A)
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def _matpow(A, n: int):
    d = len(A)
    R = [[int(i == j) for j in range(d)] for i in range(d)]
    while n:
        if n & 1:
            R = _matmul(R, A)
        n >>= 1
        if n:
            A = _matmul(A, A)
    return R


def _newton_to_coeffs(s: list[int]) -> list[int]:
    """Power sums s_1..s_d -> (g_0, ..., g_d), g_j = (-1)^j e_j."""
    d = len(s)
    e = [1]
    for k in range(1, d + 1):
        acc = 0
        for i in range(1, k + 1):
            term = e[k - i] * s[i - 1]
            acc += term if i % 2 else -term
        q, r = divmod(acc, k)
        if r:
            raise ConsistencyError("Newton identities produced a non-integer")
        e.append(q)
    return [c if j % 2 == 0 else -c for j, c in enumerate(e)]


def _coeffs_to_poly(g: list[int]) -> IntPoly:
    return IntPoly(list(reversed(g)))


def _power_charpoly_exact(p: IntPoly, N: int) -> IntPoly:
    H = companion_matrix(p)
    A = _matpow(H, N)
    B = A
    s = []
    for k in range(1, p.degree + 1):
        if k > 1:
            B = _matmul(B, A)
        s.append(sum(B[i][i] for i in range(len(B))))
    return _coeffs_to_poly(_newton_to_coeffs(s))


def power_sums(p: IntPoly, n_max: int) -> list[int]:
    """s_0..s_n_max of the roots of monic p via the Newton recurrence."""
    _require_monic(p)
    d = p.degree
    g = [p.coeffs[d - j] for j in range(d + 1)]  # g[0] = 1
    s = [d]
    for n in range(1, n_max + 1):
        acc = -n * g[n] if n <= d else 0
        for i in range(1, min(n - 1, d) + 1):
            acc -= g[i] * s[n - i]
        s.append(acc)
    return s


# --- certified numeric backend -----------------------------------------------------


def _ball_pow(e: RootEnclosure, N: int, bits: int) -> tuple[mpc, mpfr]:
    with context(bits):
        c, r = e.center, e.radius
        a = abs(c)
        w = c**N
        grow = N * r * (a + r) ** (N - 1) if r else mpfr(0)
        rnd = 4 * (N + 2) * mpfr(2) ** (-bits) * (a + r) ** N
        return w, grow + rnd


def _ball_product(balls: list[tuple[mpc, mpfr]], bits: int) -> tuple[list[mpc], list[mpfr]]:
    """Coefficient balls (low degree first) of prod (X - w)."""
    u = mpfr(2) ** (-bits + 2)
    with context(bits):
        cen = [mpc(1)]
        rad = [mpfr(0)]
        for w, rw in balls:
            aw = abs(w)
            n = len(cen)
            nc = [mpc(0)] * (n + 1)
            nr = [mpfr(0)] * (n + 1)
            for k in range(n + 1):
                hi = cen[k - 1] if k >= 1 else mpc(0)
                rhi = rad[k - 1] if k >= 1 else mpfr(0)
                lo = cen[k] if k < n else mpc(0)
                rlo = rad[k] if k < n else mpfr(0)
                prod = w * lo
                nc[k] = hi - prod
                nr[k] = rhi + (aw + rw) * rlo + rw * abs(lo) + u * (abs(hi) + abs(prod) + aw * abs(lo))
            cen, rad = nc, nr
    return cen, rad


class _RootCache:
    def __init__(self, p: IntPoly):
        self.p = p
        self.bits = 0
        self.encl: list[RootEnclosure] = []

    def get(self, bits: int) -> list[RootEnclosure]:
        if bits > self.bits:
            self.encl = find_roots(self.p, bits)
            self.bits = bits
        return self.encl


def _certified_coeffs(p: IntPoly, N: int, cache: _RootCache | None = None) -> list[int]:
    """g_0..g_d of P_N as exact integers, or raise PrecisionExceeded."""
    d = p.degree
    cap = max_precision()
    cache = cache or _RootCache(p)
    lm = float(mahler_measure(p))
    bits = int(N * math.log2(max(lm, 1.0))) + 2 * d + 64
    while True:
        target = bits + int(math.log2(N + 1)) + 16
        if target > cap:
            raise PrecisionExceeded(f"need {target} bits for N={N}")
        balls = []
        for e in cache.get(target):
            b = _ball_pow(e, N, target + 32)
            balls.extend([b] * e.multiplicity)
        cen, rad = _ball_product(balls, target + 32)
        if all(r < 0.5 and abs(c.imag) + r < 0.5 for c, r in zip(cen, rad)):
            with context(target + 32):
                low = [int(gmpy2.rint(c.real)) for c in cen]
            return list(reversed(low))
        bits *= 2


def power_charpoly(p: IntPoly, N: int, backend: str = "exact") -> IntPoly:
    """Monic polynomial whose roots are the N-th powers of the roots of p."""
    _require_monic(p)
    if N < 1:
        raise ValueError("N must be positive")
    if backend == "exact":
        return _power_charpoly_exact(p, N)
    if backend == "numeric":
        return _coeffs_to_poly(_certified_coeffs(p, N))
    raise ValueError(f"unknown backend {backend!r}")


def pierce_number(p: IntPoly, N: int, backend: str = "exact") -> int:
    """|prod (1 - a_i^N)|, via P_N(1) and via Res(p, X^N - 1), cross-checked."""
    _require_monic(p)
    via_charpoly = abs(power_charpoly(p, N, backend)(1))
    via_res = abs(resultant(p, IntPoly.monomial(N) - 1))
    if via_charpoly != via_res:
        raise ConsistencyError(f"Pierce backends disagree for N={N}: {via_charpoly} vs {via_res}")
    return via_res


# --- dominance scan ------------------------------------------------------------------


def _alphabet_radius(g: list[int], j0: int) -> int:
    dom = abs(g[j0])
    rest = sum(abs(c) for j, c in enumerate(g) if j != j0)
    return -((1 - dom) // 2) + rest


def _dominates(g: list[int], j0: int, t: Fraction) -> bool:
    rest = sum(abs(c) for j, c in enumerate(g) if j != j0)
    return abs(g[j0]) * t.denominator > t.numerator * rest


class _FloatScreen:
    """Scale-free float evaluation of the dominance ratio with an error bound.

    With z = a^-N for outside roots and w = a^N for inside ones,
    P_N = S * prod(1 - z X) * prod(X - w) where |S| = M(p)^N, so the
    condition only involves the normalised coefficients c.
    """

    def __init__(self, p: IntPoly, encl: list[RootEnclosure]):
        self.d = p.degree
        out, inn = [], []
        with context(192):
            for e in encl:
                c = e.center
                if c == 0:
                    item = (None, None)
                else:
                    item = (gmpy2.log(abs(c)), gmpy2.atan2(c.imag, c.real))
                target = out if abs(c) > 1 else inn
                target.extend([item] * e.multiplicity)
        self.out, self.inn = out, inn
        self.j0 = len(out)
        self.two_pi = 2 * gmpy2.const_pi(192)
        self.kappa = 2 * (2 * self.d + 8) * np.finfo(float).eps

    def _powers(self, items, N: int, sign: int) -> np.ndarray:
        vals = np.empty(len(items), dtype=complex)
        with context(192):
            for i, (lm, arg) in enumerate(items):
                if lm is None:
                    vals[i] = 0.0
                    continue
                mod = float(gmpy2.exp(sign * N * lm))
                ang = float(gmpy2.fmod(sign * N * arg, self.two_pi))
                vals[i] = mod * complex(math.cos(ang), math.sin(ang))
        return vals

    def coefficients(self, N: int) -> tuple[np.ndarray, np.ndarray]:
        z = self._powers(self.out, N, -1)
        w = self._powers(self.inn, N, 1)
        a = np.atleast_1d(np.poly(z))  # high->low of prod(X - z) == low->high of prod(1 - zX)
        b = np.atleast_1d(np.poly(w))[::-1]
        c = np.convolve(a, b).real
        ma = np.atleast_1d(np.poly(-np.abs(z))).real
        mb = np.atleast_1d(np.poly(-np.abs(w))).real[::-1]
        err = self.kappa * np.convolve(ma, mb) + 1e-300
        return c, err

    def decide(self, N: int, t: float) -> int | None:
        """1 dominant, 0 not, None ambiguous."""
        c, err = self.coefficients(N)
        k = self.d - self.j0
        dom = abs(c[k])
        rest = np.sum(np.abs(c)) - dom
        e_dom = err[k]
        e_rest = np.sum(err) - e_dom
        if dom - e_dom > t * (rest + e_rest) * (1 + 1e-12):
            return 1
        if dom + e_dom < t * (rest - e_rest) * (1 - 1e-12):
            return 0
        return None


@dataclass(frozen=True)
class Alphabet:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("alphabet radius must be >= 1")

    @property
    def size(self) -> int:
        return 2 * self.m + 1

    def __contains__(self, a: int) -> bool:
        return -self.m <= a <= self.m

    def digits(self) -> range:
        return range(-self.m, self.m + 1)


def scientific(n: int, digits: int = 10) -> tuple[str, int]:
    """Decimal mantissa with `digits` significant digits and its exponent."""
    if n == 0:
        return "0", 0
    ctx = Context(prec=digits)
    d = ctx.plus(Decimal(abs(n)))
    sign, ds, exp = d.as_tuple()
    ds = ds + (0,) * (digits - len(ds))
    exponent = exp + len(d.as_tuple().digits) - 1
    mant = f"{ds[0]}.{''.join(map(str, ds[1:digits]))}" if digits > 1 else str(ds[0])
    return ("-" if n < 0 else "") + mant, exponent


@dataclass(frozen=True)
class DominanceReport:
    base_poly: IntPoly
    t: Fraction
    N: int
    gN: tuple[int, ...]
    j0: int
    m: int
    pierce_N: int
    mahler_estimate: mpfr = field(compare=False)
    backend: str = "exact"

    @property
    def dominant(self) -> int:
        return self.gN[self.j0]

    def m_scientific(self, digits: int = 10) -> tuple[str, int]:
        return scientific(self.m, digits)

    def to_json(self) -> dict:
        mant, ex = self.m_scientific()
        return {
            "base_poly": str(self.base_poly),
            "t": str(self.t),
            "N": self.N,
            "j0": self.j0,
            "gN": [str(c) for c in self.gN],
            "m": str(self.m),
            "m_mantissa": mant,
            "m_exponent": ex,
            "pierce_N": str(self.pierce_N),
            "mahler_estimate": fmt_float(self.mahler_estimate),
            "backend": self.backend,
        }


class _LazyPowerSums:
    def __init__(self, p: IntPoly):
        self.p = p
        self.s = [p.degree]

    def coeffs(self, N: int) -> list[int]:
        d = self.p.degree
        need = d * N
        if need >= len(self.s):
            self.s = power_sums(self.p, max(need, 2 * len(self.s)))
        return _newton_to_coeffs([self.s[N * k] for k in range(1, d + 1)])


# ambiguous screen results below this d*N are settled with exact power sums
EXACT_SUM_LIMIT = 20_000


def _scan_exact(p: IntPoly, j0: int, t: Fraction, n_from: int, n_to: int):
    sums = _LazyPowerSums(p)
    for N in range(n_from, n_to + 1):
        g = sums.coeffs(N)
        if _dominates(g, j0, t):
            return N, g
    return None


def _scan_numeric(p: IntPoly, encl, t: Fraction, n_from: int, n_to: int):
    screen = _FloatScreen(p, encl)
    tf = float(t)
    sums = _LazyPowerSums(p)
    cache = _RootCache(p)
    for N in range(n_from, n_to + 1):
        verdict = screen.decide(N, tf)
        if verdict == 0:
            continue
        if N * p.degree <= EXACT_SUM_LIMIT:
            g = sums.coeffs(N)
        else:
            g = _certified_coeffs(p, N, cache)
        if _dominates(g, screen.j0, t):
            return N, g
    return None


def choose_backend(p: IntPoly, backend: str) -> str:
    if backend in ("exact", "numeric"):
        return backend
    if backend != "auto":
        raise ValueError(f"unknown backend {backend!r}")
    return "exact" if p.degree <= EXACT_DEGREE_LIMIT else "numeric"


def dominance_index(p: IntPoly, t=1, backend: str = "auto", N_max: int = DEFAULT_N_MAX, precision: int = 128) -> DominanceReport:
    """Smallest N <= N_max at which g_j0(N) dominates t times the other coefficients."""
    _require_monic(p)
    t = Fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    cls = classify_modulus(p, precision)
    j0 = cls.j0
    chosen = choose_backend(p, backend)
    found = None
    if chosen == "exact":
        limit = N_max if backend == "exact" else min(N_max, EXACT_N_LIMIT)
        found = _scan_exact(p, j0, t, 1, limit)
        if found is None and limit < N_max:
            chosen = "numeric"
            found = _scan_numeric(p, find_roots(p, precision), t, limit + 1, N_max)
    else:
        found = _scan_numeric(p, find_roots(p, precision), t, 1, N_max)
    if found is None:
        raise BudgetExhausted(f"no dominance index <= {N_max} for {p} at t={t}")
    N, g = found
    pierce = abs(sum(g))
    return DominanceReport(
        base_poly=p,
        t=t,
        N=N,
        gN=tuple(g),
        j0=j0,
        m=_alphabet_radius(g, j0),
        pierce_N=pierce,
        mahler_estimate=mahler_measure(p),
        backend=chosen,
    )


def maximal_alphabet(p: IntPoly, backend: str = "auto", N_max: int = DEFAULT_N_MAX) -> tuple[Alphabet, DominanceReport]:
    rep = dominance_index(p, 1, backend, N_max)
    return Alphabet(rep.m), rep


def verify_minimality(rep: DominanceReport) -> bool:
    """Re-check exhaustively (exact power sums) that no smaller N dominates."""
    p = rep.base_poly
    sums = _LazyPowerSums(p)
    for N in range(1, rep.N + 1):
        g = sums.coeffs(N)
        ok = _dominates(g, rep.j0, rep.t)
        if N < rep.N and ok:
            return False
        if N == rep.N and (not ok or tuple(g) != rep.gN):
            return False
    return True


@dataclass(frozen=True)
class BoundChecks:
    pierce_bound: bool  # |g_j0| > t/(1+t) * Delta_N
    alphabet_bound: bool  # m >= ceil((Delta_N/2 - 1)/2)
    rough_estimate: mpfr  # M^(N-1) |P(1)| / 2, informational only
    dominant_abs: int


def bound_checks(rep: DominanceReport) -> BoundChecks:
    t = rep.t
    dom = abs(rep.dominant)
    delta = rep.pierce_N
    pierce_ok = dom * (1 + t) > t * delta
    # ceil((delta/2 - 1)/2) = ceil((delta - 2)/4)
    alpha_ok = rep.m >= -((2 - delta) // 4)
    if not pierce_ok:
        raise ConsistencyError(f"|g_j0| = {dom} violates the Pierce lower bound with Delta = {delta}")
    if not alpha_ok:
        raise ConsistencyError(f"m = {rep.m} below the Pierce alphabet bound")
    with context(128):
        est = rep.mahler_estimate ** (rep.N - 1) * abs(rep.base_poly(1)) / 2
    return BoundChecks(pierce_ok, alpha_ok, est, dom)
