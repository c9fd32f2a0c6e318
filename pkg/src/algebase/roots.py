"""Certified complex roots, unit-circle classification and Mahler measures.

Roots come from Aberth-Ehrlich simultaneous iteration (a double-precision pass
followed by MPFR refinement) and are certified a posteriori with the
Weierstrass inclusion disks: for a squarefree p of degree d and approximations
z_i, every connected union of k disks D(z_i, d*|W_i|) holds exactly k roots,
where W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j)).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr, mpq

from .poly import IntPoly, convolve, gcd_primitive, reciprocal, squarefree_decomposition

DEFAULT_PRECISION = 128
_HARD_CAP = 10**5


def max_precision() -> int:
    """Escalation cap in bits; ALGEBASE_MAX_PRECISION overrides the default."""
    env = os.environ.get("ALGEBASE_MAX_PRECISION")
    return int(env) if env else _HARD_CAP


class PrecisionExceeded(RuntimeError):
    pass


class UnitCircleError(RuntimeError):
    """A root could not be separated from the unit circle."""


class RootIntervalError(ValueError):
    pass


class GraeffeNonConvergence(RuntimeError):
    pass


def context(bits: int):
    return gmpy2.context(gmpy2.get_context(), precision=bits, emax=2**40, emin=-(2**40))


@dataclass(frozen=True)
class RootEnclosure:
    center: mpc
    radius: mpfr
    multiplicity: int = 1
    # exact bracket when the root is known to be real
    real_interval: tuple[Fraction, Fraction] | None = field(default=None, compare=False)

    @property
    def is_real(self) -> bool:
        return self.real_interval is not None

    def modulus_bounds(self) -> tuple[mpfr, mpfr]:
        with context(max(self.center.real.precision, 64) + 8):
            a = abs(self.center)
            return a - self.radius, a + self.radius

    def contains(self, z) -> bool:
        return abs(mpc(z) - self.center) <= self.radius

    def __float__(self) -> float:
        return float(self.center.real)

    def __complex__(self) -> complex:
        return complex(self.center)


@dataclass(frozen=True)
class ModulusClassification:
    inside: int
    outside: int
    undecided: int

    @property
    def j0(self) -> int:
        return self.outside


# --- Aberth iteration --------------------------------------------------------


def _initial_points(d: int, radius: float) -> np.ndarray:
    k = np.arange(d)
    return radius * np.exp(1j * (2 * np.pi * k / d + 0.7))


def _root_bound(coeffs: tuple[int, ...]) -> float:
    # Fujiwara bound, in logs to survive huge coefficients
    d = len(coeffs) - 1
    la = math.log(abs(coeffs[-1]))
    best = -math.inf
    for k in range(1, d + 1):
        c = coeffs[d - k]
        if c:
            v = (math.log(abs(c)) - la) / k
            if k == d:
                v -= math.log(2) / k
            best = max(best, v)
    return 2.0 * math.exp(best)


def _aberth_double(coeffs: tuple[int, ...], maxiter: int = 500) -> np.ndarray | None:
    d = len(coeffs) - 1
    try:
        c = np.array([float(x) for x in reversed(coeffs)])
    except OverflowError:
        return None
    if not np.all(np.isfinite(c)):
        return None
    c = c / np.max(np.abs(c))
    dc = np.polyder(c)
    z = _initial_points(d, min(_root_bound(coeffs), 1e100))
    eye = np.eye(d, dtype=bool)
    for _ in range(maxiter):
        with np.errstate(all="ignore"):
            pz = np.polyval(c, z)
            dpz = np.polyval(dc, z)
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            diff[eye] = 1.0
            inv = 1.0 / diff
            inv[eye] = 0.0
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w[~np.isfinite(w)] = 0.0
        z = z - w
        if not np.all(np.isfinite(z)):
            return None
        if np.max(np.abs(w) / np.maximum(1.0, np.abs(z))) < 1e-14:
            break
    return z


def _horner_with_derivative(c: list[mpc], z: mpc) -> tuple[mpc, mpc]:
    p = c[-1]
    dp = mpc(0)
    for k in range(len(c) - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
    return p, dp


def _aberth_mp(poly: IntPoly, z: list[mpc], bits: int, maxiter: int) -> list[mpc]:
    d = len(z)
    with context(bits):
        c = [mpc(x) for x in poly.coeffs]
        z = [mpc(x) for x in z]
        tol = mpfr(2) ** (-bits + 8)
        for _ in range(maxiter):
            biggest = mpfr(0)
            for i in range(d):
                zi = z[i]
                p, dp = _horner_with_derivative(c, zi)
                if p == 0:
                    continue
                if dp == 0:
                    dp = mpc(tol)
                ratio = p / dp
                s = mpc(0)
                for j in range(d):
                    if j != i:
                        s += 1 / (zi - z[j])
                w = ratio / (1 - ratio * s)
                z[i] = zi - w
                rel = abs(w) / max(abs(z[i]), mpfr(1))
                if rel > biggest:
                    biggest = rel
            if biggest < tol:
                break
    return z


def _inclusion_radii(poly: IntPoly, z: list[mpc], bits: int) -> list[mpfr] | None:
    d = len(z)
    with context(bits + 16):
        c = [mpc(x) for x in poly.coeffs]
        absc = [abs(mpfr(x)) for x in poly.coeffs]
        u = mpfr(2) ** (-bits)
        lc = abs(mpfr(poly.lead))
        radii = []
        for i in range(d):
            zi = z[i]
            p, _ = _horner_with_derivative(c, zi)
            az = abs(zi)
            bound = mpfr(0)
            for a in reversed(absc):
                bound = bound * az + a
            err = abs(p) + 4 * (d + 2) * u * bound
            denom = lc
            for j in range(d):
                if j != i:
                    denom *= abs(zi - z[j])
            if denom == 0:
                return None
            radii.append(d * err / denom * (1 + 16 * u))
    return radii


def _disjoint(centers: list[mpc], radii: list[mpfr]) -> bool:
    n = len(centers)
    order = sorted(range(n), key=lambda i: centers[i].real - radii[i])
    active: list[int] = []
    for i in order:
        lo = centers[i].real - radii[i]
        active = [j for j in active if centers[j].real + radii[j] >= lo]
        for j in active:
            if abs(centers[i] - centers[j]) <= radii[i] + radii[j]:
                return False
        active.append(i)
    return True


def _isolate_squarefree(f: IntPoly, target: int, cap: int) -> list[RootEnclosure]:
    d = f.degree
    if d == 1:
        root = mpq(-f.coeffs[0], f.coeffs[1])
        with context(target + 8):
            x = mpfr(root)
            rad = mpfr(0) if mpq(x) == root else abs(x) * mpfr(2) ** (-target - 7)
            return [RootEnclosure(mpc(x), rad, 1, (Fraction(root.numerator, root.denominator),) * 2 if rad == 0 else None)]
    approx = _aberth_double(f.coeffs)
    bits = max(DEFAULT_PRECISION, target + 32)
    if approx is not None:
        z = [mpc(complex(x)) for x in approx]
        maxiter = 60
    else:
        with context(bits):
            r = mpfr(_root_bound(f.coeffs))
            z = [mpc(complex(x)) * r for x in _initial_points(d, 1.0)]
        maxiter = 2000
    while True:
        z = _aberth_mp(f, z, bits, maxiter)
        radii = _inclusion_radii(f, z, bits)
        if radii is not None and _disjoint(z, radii):
            with context(bits):
                ok = all(r <= mpfr(2) ** (-target) * max(mpfr(1), abs(c)) for c, r in zip(z, radii))
            if ok:
                return [RootEnclosure(c, r, 1) for c, r in zip(z, radii)]
        if bits >= cap:
            raise PrecisionExceeded(f"could not certify roots of degree-{d} factor within {cap} bits")
        bits = min(cap, 2 * bits)
        maxiter = 60


def find_roots(p: IntPoly, target_precision: int = DEFAULT_PRECISION) -> list[RootEnclosure]:
    """Certified enclosures for all complex roots of p, multiplicities merged.

    Radii satisfy ``radius <= 2^-target_precision * max(1, |center|)`` and the
    disks are pairwise disjoint.
    """
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    cap = max_precision()
    if target_precision > cap:
        raise PrecisionExceeded(f"target precision {target_precision} exceeds cap {cap}")
    out: list[RootEnclosure] = []
    k = 0
    while k < len(p.coeffs) and p.coeffs[k] == 0:
        k += 1
    if k:
        zero = (Fraction(0), Fraction(0))
        out.append(RootEnclosure(mpc(0), mpfr(0), k, zero))
    rest = p.shift(-k)
    if rest.degree < 1:
        return out
    target = target_precision
    while True:
        found: list[RootEnclosure] = []
        for factor, mult in squarefree_decomposition(rest):
            for e in _isolate_squarefree(factor, target, cap):
                found.append(RootEnclosure(e.center, e.radius, mult, e.real_interval))
        if _disjoint([e.center for e in found], [e.radius for e in found]):
            break
        if target >= cap:
            raise PrecisionExceeded("roots of distinct squarefree factors overlap")
        target = min(cap, 2 * target)
    found.sort(key=lambda e: (float(abs(e.center)), float(e.center.real), float(e.center.imag)))
    return out + found


def classify_modulus(p: IntPoly, precision: int = DEFAULT_PRECISION) -> ModulusClassification:
    """Count roots strictly inside / outside the unit circle (with multiplicity).

    Raises UnitCircleError if some root cannot be separated from |z| = 1.
    """
    cap = max_precision()
    # roots on the circle come in pairs z, 1/conj(z): they divide gcd(p, p*)
    k = 0
    while p.coeffs[k] == 0:
        k += 1
    core = p.shift(-k)
    suspect = core.degree > 0 and gcd_primitive(core, reciprocal(core)).degree > 0
    limit = min(cap, 2048) if suspect else cap
    bits = precision
    while True:
        encl = find_roots(p, bits)
        inside = outside = undecided = 0
        for e in encl:
            lo, hi = e.modulus_bounds()
            if hi < 1:
                inside += e.multiplicity
            elif lo > 1:
                outside += e.multiplicity
            else:
                undecided += e.multiplicity
        if undecided == 0:
            return ModulusClassification(inside, outside, 0)
        if bits >= limit:
            raise UnitCircleError(f"possible root on unit circle for {p} ({undecided} undecided)")
        bits = min(limit, 2 * bits)


# --- real roots --------------------------------------------------------------


def _moebius_transform(p: IntPoly, lo: Fraction, hi: Fraction) -> IntPoly:
    """Polynomial in t whose positive roots map to roots of p in (lo, hi)."""
    D = lo.denominator * hi.denominator
    a = int(lo * D)
    b = int(hi * D)
    U = IntPoly([a, b])
    V = IntPoly([D, D])
    d = p.degree
    acc = IntPoly([p.coeffs[d]])
    vpow = IntPoly([1])
    for i in range(d - 1, -1, -1):
        vpow = vpow * V
        acc = acc * U + vpow * p.coeffs[i]
    return acc


def _sign_variations(p: IntPoly) -> int:
    v, last = 0, 0
    for c in p.coeffs:
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                v += 1
            last = s
    return v


def isolate_real_roots(p: IntPoly, lo: Fraction, hi: Fraction, max_depth: int = 200) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for the distinct real roots of p in (lo, hi).

    Exact roots come back as degenerate intervals (r, r).
    """
    sqf = IntPoly([1])
    for f, _ in squarefree_decomposition(p):
        sqf = sqf * f
    out: list[tuple[Fraction, Fraction]] = []

    def rec(a: Fraction, b: Fraction, depth: int):
        v = _sign_variations(_moebius_transform(sqf, a, b))
        if v == 0:
            return
        if v == 1:
            out.append((a, b))
            return
        if depth > max_depth:
            raise RootIntervalError("real root isolation did not terminate")
        m = (a + b) / 2
        rec(a, m, depth + 1)
        if sqf.eval_fraction(m) == 0:
            out.append((m, m))
        rec(m, b, depth + 1)

    if sqf.degree >= 1:
        rec(Fraction(lo), Fraction(hi), 0)
    return out


def _dyadic_sign(p: IntPoly, num: int, k: int) -> int:
    # sign of p(num / 2^k), via the integer 2^(k*d) p(num/2^k)
    acc = 0
    shift = 0
    for c in reversed(p.coeffs):
        acc = acc * num + (c << shift)
        shift += k
    return (acc > 0) - (acc < 0)


def _refine_bracket(p: IntPoly, a: Fraction, b: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Shrink a sign-change bracket of a simple root to relative width 2^-bits."""
    sa = p.sign_at(a)
    if sa == 0:
        return a, a
    scale = max(1, abs(float(a)), abs(float(b)))
    goal = Fraction(2) ** (-bits) * Fraction(scale)
    # Newton in MPFR, then certify with two exact sign tests
    if b - a > goal:
        with context(bits + 40):
            x = mpfr(mpq(a + b) / 2)
            cp = [mpfr(c) for c in p.coeffs]
            dc = [mpfr(i * c) for i, c in enumerate(p.coeffs)][1:]
            for _ in range(2 * int(math.log2(bits + 2)) + 20):
                fx = mpfr(0)
                for c in reversed(cp):
                    fx = fx * x + c
                fd = mpfr(0)
                for c in reversed(dc):
                    fd = fd * x + c
                if fd == 0:
                    break
                step = fx / fd
                x = x - step
                if abs(step) < mpfr(2) ** (-bits - 20) * max(mpfr(1), abs(x)):
                    break
            k = bits + 8 + int(math.log2(scale) + 2)
            num = int(gmpy2.rint(x * mpfr(2) ** k))
            mid = Fraction(num, 2**k)
            if a < mid < b and p.sign_at(mid) == 0:
                return mid, mid
            half = Fraction(1, 2 ** (bits + 2))
            lo_c = Fraction(num, 2**k) - half * Fraction(scale)
            hi_c = Fraction(num, 2**k) + half * Fraction(scale)
            if a < lo_c < hi_c < b:
                s_lo, s_hi = p.sign_at(lo_c), p.sign_at(hi_c)
                if s_lo == 0:
                    return lo_c, lo_c
                if s_hi == 0:
                    return hi_c, hi_c
                if s_lo != s_hi:
                    return lo_c, hi_c
    # fallback: plain bisection
    while b - a > goal:
        m = (a + b) / 2
        sm = p.sign_at(m)
        if sm == 0:
            return m, m
        if sm == sa:
            a = m
        else:
            b = m
    return a, b


def real_root_in_interval(p: IntPoly, lo, hi, precision: int = DEFAULT_PRECISION) -> RootEnclosure:
    """Certified enclosure of the unique real root of p in the open interval (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise RootIntervalError("empty interval")
    if lo >= 0 and _sign_variations(p) == 1:
        # Descartes: exactly one positive root, and it is simple
        slo, shi = p.sign_at(lo), p.sign_at(hi)
        if slo * shi < 0:
            a, b = _refine_bracket(p, lo, hi, precision)
            return _real_enclosure(a, b, 1, precision)
        if slo == 0 or shi == 0 or p.sign_at(hi) == p.sign_at(lo):
            raise RootIntervalError(f"no root of {p} in ({lo}, {hi})")
    intervals = isolate_real_roots(p, lo, hi)
    if not intervals:
        raise RootIntervalError(f"no root of {p} in ({lo}, {hi})")
    if len(intervals) > 1:
        raise RootIntervalError(f"{len(intervals)} distinct roots of {p} in ({lo}, {hi})")
    a, b = intervals[0]
    mult = 1
    factor = None
    for f, m in squarefree_decomposition(p):
        if a == b:
            if f.eval_fraction(a) == 0:
                mult, factor = m, f
                break
        elif f.sign_at(a) * f.sign_at(b) < 0 or _has_root_in(f, a, b):
            mult, factor = m, f
            break
    if a != b:
        a, b = _refine_bracket(factor, a, b, precision)
    return _real_enclosure(a, b, mult, precision)


def _real_enclosure(a: Fraction, b: Fraction, mult: int, precision: int) -> RootEnclosure:
    with context(precision + 16):
        mid = mpq(a + b) / 2
        center = mpfr(mid)
        radius = mpfr(mpq(b - a) / 2)
        radius = radius + abs(center - mid)
    return RootEnclosure(mpc(center), radius, mult, (a, b))


def _has_root_in(f: IntPoly, a: Fraction, b: Fraction) -> bool:
    return bool(isolate_real_roots(f, a, b))


# --- Mahler measure ----------------------------------------------------------


def _signed_shift(c: int, s: int) -> int:
    return c >> s if c >= 0 else -((-c) >> s)


def mahler_graeffe(p: IntPoly, max_iterations: int = 64, tol: float = 1e-12, mantissa_bits: int = 256) -> mpfr:
    """Mahler measure by Graeffe root squaring.

    After k squarings the largest coefficient is M(p)^(2^k) up to a factor at
    most binom(d, d/2), so its 2^k-th root converges to M(p).  Coefficients are
    kept as a block-floating-point integer vector to avoid exponent blow-up.
    """
    if p.is_zero():
        raise ValueError("Mahler measure of the zero polynomial")
    k0 = 0
    while p.coeffs[k0] == 0:
        k0 += 1
    c = list(p.coeffs[k0:])
    if len(c) == 1:
        with context(128):
            return mpfr(abs(c[0]))
    exp2 = 0  # true coefficients are c * 2^exp2
    prev = None
    estimate = None
    for it in range(1, max_iterations + 1):
        even = c[0::2]
        odd = c[1::2]
        e2 = convolve(even, even)
        o2 = convolve(odd, odd)
        n = len(c)
        new = [0] * n
        for i, v in enumerate(e2):
            new[i] += v
        for i, v in enumerate(o2):
            new[i + 1] -= v
        while new and new[-1] == 0:
            new.pop()
        exp2 = 2 * exp2
        top = max(abs(v) for v in new)
        s = max(0, top.bit_length() - mantissa_bits)
        if s:
            new = [_signed_shift(v, s) for v in new]
            exp2 += s
        c = new
        top = max(abs(v) for v in c)
        # log2 M estimate = (log2 top + exp2) / 2^it
        lt = top.bit_length()
        frac = math.log2(top >> max(0, lt - 60)) + max(0, lt - 60)
        estimate = (frac + exp2) / (2.0**it)
        if prev is not None and abs(estimate - prev) <= tol * max(1.0, abs(estimate)) * math.log(2) and it >= 6:
            with context(128):
                return gmpy2.exp2(mpfr(estimate))
        prev = estimate
    raise GraeffeNonConvergence(f"Graeffe iteration did not converge in {max_iterations} steps")


def mahler_roots(p: IntPoly, precision: int = DEFAULT_PRECISION) -> mpfr:
    """|lc(p)| * prod max(1, |root|) from certified enclosures."""
    if p.is_zero():
        raise ValueError("Mahler measure of the zero polynomial")
    encl = find_roots(p, precision)
    with context(precision + 32):
        m = abs(mpfr(p.lead))
        for e in encl:
            a = abs(e.center)
            if a > 1:
                m *= a ** e.multiplicity
        return m


def mahler_measure(p: IntPoly, precision: int = DEFAULT_PRECISION) -> mpfr:
    """Graeffe first, root product as fallback."""
    try:
        return mahler_graeffe(p)
    except GraeffeNonConvergence:
        return mahler_roots(p, precision)
