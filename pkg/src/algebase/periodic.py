"""Eventually periodic digit expansions x = sum_{k>=1} a_k g^-k in an algebraic base g > 1.

Remainders live in Z[g]/D, stored as integer coordinate vectors over the
power basis 1, g, ..., g^(n-1) of Z[X]/(S) for the monic defining polynomial S.
Two engines share the same state machine: the greedy Renyi map (digit =
floor(g * rem)) and a balanced rule (digit = nearest integer to g * rem,
clamped to [-m, m]).  A repeated state closes the cycle.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import gmpy2
from gmpy2 import mpfr

from .dominance import Alphabet
from .poly import IntPoly, RationalVector, gcd_primitive, reciprocal
from .roots import RootEnclosure, classify_modulus, context, isolate_real_roots, real_root_in_interval

DEFAULT_BUDGET = 10**6
_EPS = 2.0**-52


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, digits: list[int] | None = None):
        super().__init__(message)
        self.digits = digits or []


class WindowEscape(RuntimeError):
    pass


def _cauchy_bound(p: IntPoly) -> Fraction:
    return 1 + Fraction(max(abs(c) for c in p.coeffs[:-1]), abs(p.lead))


@dataclass
class AlgebraicBase:
    """A real algebraic base g > 1 with its defining polynomial.

    orientation "base_gt_one": defining_poly(g) = 0 and selected_root encloses g.
    orientation "inverse_in_unit": defining_poly(1/g) = 0 and selected_root
    encloses 1/g in (0, 1).
    """

    defining_poly: IntPoly
    selected_root: RootEnclosure
    orientation: str = "base_gt_one"
    _ring: IntPoly | None = field(default=None, repr=False, compare=False)
    _brackets: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.orientation not in ("base_gt_one", "inverse_in_unit"):
            raise ValueError(f"bad orientation {self.orientation!r}")
        if self.selected_root.real_interval is None:
            raise ValueError("selected root must be certified real")
        lo, hi = self.selected_root.real_interval
        if self.orientation == "base_gt_one" and not lo > 1:
            raise ValueError("base must exceed 1")
        if self.orientation == "inverse_in_unit" and not (0 < lo and hi < 1):
            raise ValueError("inverse base must lie in (0, 1)")

    # constructors

    @classmethod
    def from_interval(cls, S: IntPoly, lo, hi, precision: int = 128) -> "AlgebraicBase":
        return cls(S, real_root_in_interval(S, lo, hi, precision), "base_gt_one")

    @classmethod
    def largest_real_root(cls, S: IntPoly, precision: int = 128) -> "AlgebraicBase":
        ivs = isolate_real_roots(S, Fraction(1), _cauchy_bound(S))
        if not ivs:
            raise ValueError(f"{S} has no real root > 1")
        lo, hi = ivs[-1]
        if lo == hi:
            lo, hi = lo - Fraction(1, 2**precision), hi + Fraction(1, 2**precision)
        return cls.from_interval(S, lo, hi, precision)

    @classmethod
    def from_inverse(cls, f: IntPoly, lo=0, hi=1, precision: int = 128) -> "AlgebraicBase":
        return cls(f, real_root_in_interval(f, lo, hi, precision), "inverse_in_unit")

    # derived data

    @property
    def ring_poly(self) -> IntPoly:
        """Monic S with S(g) = 0."""
        if self._ring is None:
            if self.orientation == "base_gt_one":
                S = self.defining_poly
            else:
                S = reciprocal(self.defining_poly)
            if S.lead < 0:
                S = -S
            if S.lead != 1:
                raise ValueError(f"base is not an algebraic integer for {S}")
            self._ring = S
        return self._ring

    @property
    def degree(self) -> int:
        return self.ring_poly.degree

    def bracket(self, bits: int = 128) -> tuple[Fraction, Fraction]:
        """Certified rational bracket of g of relative width about 2^-bits."""
        for b in sorted(self._brackets):
            if b >= bits:
                return self._brackets[b]
        lo, hi = self.selected_root.real_interval
        if self.orientation == "inverse_in_unit":
            lo, hi = 1 / hi, 1 / lo
        if lo == hi:
            self._brackets[bits] = (lo, hi)
            return lo, hi
        if hi - lo <= Fraction(2) ** -bits * hi:
            self._brackets[bits] = (lo, hi)
            return lo, hi
        e = real_root_in_interval(self.ring_poly, lo, hi, bits)
        self._brackets[bits] = e.real_interval
        return e.real_interval

    def value(self, bits: int = 128) -> mpfr:
        lo, hi = self.bracket(bits)
        with context(bits + 16):
            return mpfr(gmpy2.mpq(lo + hi) / 2)

    def __float__(self) -> float:
        return float(self.value(64))

    def is_pisot(self) -> bool:
        """g > 1 real with all other roots of its ring polynomial strictly inside the disk."""
        try:
            return classify_modulus(self.ring_poly).j0 == 1
        except RuntimeError:
            return False

    def describe(self) -> str:
        return str(self.defining_poly)


class _Ring:
    """Z[X]/(S) with evaluation at the selected real root g."""

    def __init__(self, base: AlgebraicBase):
        self.base = base
        S = base.ring_poly
        self.S = S
        self.n = S.degree
        self.red = tuple(-c for c in S.coeffs[:-1])  # g^n = sum red_i g^i
        with context(192):
            g = base.value(160)
            self.gpow = [float(g**i) for i in range(self.n)]
        self.g = self.gpow[1] if self.n > 1 else float(base.value(64))

    def mul_gamma(self, c: tuple[int, ...]) -> tuple[int, ...]:
        if self.n == 1:
            return (c[0] * self.red[0],)
        top = c[-1]
        out = (0,) + c[:-1]
        if top:
            out = tuple(a + top * r for a, r in zip(out, self.red))
        return out

    def approx(self, c: tuple[int, ...]) -> tuple[float, float]:
        """Float value of sum c_i g^i and an error bound, or (nan, inf) on overflow."""
        try:
            terms = [ci * gi for ci, gi in zip(c, self.gpow)]
            v = math.fsum(terms)
            mag = math.fsum(abs(t) for t in terms)
        except OverflowError:
            return math.nan, math.inf
        if not math.isfinite(mag):
            return math.nan, math.inf
        return v, 4 * _EPS * mag + 1e-300

    def value_hp(self, c: tuple[int, ...]) -> mpfr:
        """sum c_i g^i at a precision matched to the coordinate sizes."""
        need = max(abs(x) for x in c).bit_length() + 96
        bits = getattr(self, "_hp_bits", 0)
        if need > bits:
            bits = max(2 * bits, need, 256)
            with context(bits + 32):
                g = self.base.value(bits + 32)
                self._hp_pow = [g**i for i in range(self.n)]
            self._hp_bits = bits
        with context(self._hp_bits + 32):
            acc = mpfr(0)
            for ci, gi in zip(c, self._hp_pow):
                if ci:
                    acc += ci * gi
            return acc

    def sign(self, c: tuple[int, ...]) -> int:
        """Exact sign of sum c_i g^i."""
        if not any(c):
            return 0
        v, err = self.approx(c)
        if abs(v) > err:
            return 1 if v > 0 else -1
        bits = 128
        while bits <= 16384:
            lo, hi = self.base.bracket(bits)
            with context(bits + 64):
                mid = mpfr(gmpy2.mpq(lo + hi) / 2)
                rad = mpfr(gmpy2.mpq(hi - lo) / 2) + abs(mid) * mpfr(2) ** (-bits - 56)
                top = abs(mid) + rad
                val = mpfr(0)
                bound = mpfr(0)
                dbound = mpfr(0)
                for ci in reversed(c):
                    val = val * mid + ci
                    dbound = dbound * top + bound
                    bound = bound * top + abs(ci)
                err = dbound * rad + bound * mpfr(2) ** (-bits) * (len(c) + 4)
                if abs(val) > err:
                    return 1 if val > 0 else -1
            bits *= 4
        Z = IntPoly(c)
        g = gcd_primitive(Z, self.S)
        lo, hi = self.base.bracket(bits)
        if g.degree >= 1 and (lo == hi and g.eval_fraction(lo) == 0 or lo < hi and isolate_real_roots(g, lo, hi)):
            return 0
        raise ArithmeticError("could not decide sign at the base")

    def floor_div(self, c: tuple[int, ...], D: int) -> int:
        """floor((sum c_i g^i) / D), exact."""
        v, err = self.approx(c)
        if math.isfinite(v):
            k = math.floor(v / D)
            if v - k * D > err and (k + 1) * D - v > err:
                return k
        else:
            with context(256):
                g = self.base.value(256)
                acc = mpfr(0)
                for ci in reversed(c):
                    acc = acc * g + ci
                k = int(gmpy2.floor(acc / D))
        # settle with exact sign tests
        while self.sign(self._sub_const(c, k * D)) < 0:
            k -= 1
        while self.sign(self._sub_const(c, (k + 1) * D)) >= 0:
            k += 1
        return k

    @staticmethod
    def _sub_const(c: tuple[int, ...], a: int) -> tuple[int, ...]:
        return (c[0] - a,) + c[1:]


@dataclass(frozen=True)
class ExpansionState:
    ring_vector: RationalVector
    step: int


@dataclass(frozen=True)
class PeriodicRepresentation:
    base: AlgebraicBase = field(compare=False)
    alphabet: Alphabet
    preperiod_digits: tuple[int, ...]
    period_digits: tuple[int, ...]
    L: int
    r: int
    w: int | None

    def digit(self, k: int) -> int:
        """a_k for k >= 1."""
        if k <= self.L:
            return self.preperiod_digits[k - 1]
        return self.period_digits[(k - self.L - 1) % self.r]

    def stream(self, count: int) -> list[int]:
        return [self.digit(k) for k in range(1, count + 1)]

    @property
    def is_finite(self) -> bool:
        return not any(self.period_digits)

    def negated(self) -> "PeriodicRepresentation":
        return PeriodicRepresentation(
            self.base,
            self.alphabet,
            tuple(-a for a in self.preperiod_digits),
            tuple(-a for a in self.period_digits),
            self.L,
            self.r,
            self.w,
        )

    def to_json(self) -> dict:
        return {
            "base": self.base.describe(),
            "alphabet_m": str(self.alphabet.m),
            "preperiod": list(self.preperiod_digits),
            "period": list(self.period_digits),
            "L": self.L,
            "r": self.r,
            "w": self.w,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _first_nonzero(pre, per) -> int | None:
    for i, a in enumerate(pre, 1):
        if a:
            return i
    for i, a in enumerate(per, len(pre) + 1):
        if a:
            return i
    return None


def as_vector(x, n: int) -> RationalVector:
    if isinstance(x, RationalVector):
        if len(x) != n:
            raise ValueError(f"vector has {len(x)} coordinates, field degree is {n}")
        return x
    q = Fraction(x)
    return RationalVector([q.numerator] + [0] * (n - 1), q.denominator)


def _run(
    ring: _Ring,
    x: RationalVector,
    choose: Callable[[tuple[int, ...], int], int],
    budget: int,
) -> tuple[list[int], int, int]:
    """Iterate rem <- g*rem - a; return (digits, L, r) at the first repeated state."""
    D = x.common_denominator
    state = tuple(x.numerators)
    seen = {state: 0}
    digits: list[int] = []
    for k in range(1, budget + 1):
        y = ring.mul_gamma(state)
        a = choose(y, D)
        digits.append(a)
        state = (y[0] - a * D,) + y[1:]
        j = seen.get(state)
        if j is not None:
            return digits, j, k - j
        seen[state] = k
    raise BudgetExceeded(f"no cycle within {budget} steps", digits)


def _build(base, alphabet, digits, L, r) -> PeriodicRepresentation:
    pre = tuple(digits[:L])
    per = tuple(digits[L : L + r])
    return PeriodicRepresentation(base, alphabet, pre, per, L, r, _first_nonzero(pre, per))


def renyi_digits(base: AlgebraicBase, x=0, budget: int = DEFAULT_BUDGET) -> PeriodicRepresentation:
    """Greedy expansion of x in [0, 1), or of 1 itself.

    For x = 1 the first digit is floor(g) and the map continues on {g}.
    """
    ring = _Ring(base)
    xv = as_vector(x, ring.n)
    if not isinstance(x, RationalVector):
        q = Fraction(x)
        if not (0 <= q <= 1):
            raise ValueError("renyi_digits expects 0 <= x <= 1")
    digits, L, r = _run(ring, xv, ring.floor_div, budget)
    m = max([math.ceil(float(base.value(64))) - 1, 1] + [abs(a) for a in digits])
    return _build(base, Alphabet(m), digits, L, r)


def renyi_stream(base: AlgebraicBase, x=1):
    """Greedy digits of x one at a time; stops once the remainder is exactly zero."""
    ring = _Ring(base)
    xv = as_vector(x, ring.n)
    D = xv.common_denominator
    state = tuple(xv.numerators)
    while any(state):
        y = ring.mul_gamma(state)
        a = ring.floor_div(y, D)
        state = (y[0] - a * D,) + y[1:]
        yield a


def window(base: AlgebraicBase, m: int) -> float:
    return m / (float(base) - 1.0)


def expansion_engine(
    base: AlgebraicBase,
    x,
    alphabet: Alphabet,
    budget: int = DEFAULT_BUDGET,
    verify: bool = True,
) -> PeriodicRepresentation:
    """Balanced digits a = clamp(round(g * rem), -m, m); remainder kept in |rem| <= m/(g-1)."""
    ring = _Ring(base)
    xv = as_vector(x, ring.n)
    m = alphabet.m
    B = window(base, m) + 1.0

    def choose(y, D):
        v, err = ring.approx(y)
        if math.isfinite(v) and err < 0.01 * D:
            t = v / D
        else:
            t = float(ring.value_hp(y) / D)
        if abs(t) > ring.g * B:
            raise WindowEscape(f"remainder {t / ring.g:.6g} outside window {B:.6g}")
        return max(-m, min(m, round(t)))

    x0 = float(ring.value_hp(tuple(xv.numerators)) / xv.common_denominator)
    if abs(x0) > B:
        raise WindowEscape(f"x = {x0:.6g} outside window {B:.6g}")
    digits, L, r = _run(ring, xv, choose, budget)
    rep = _build(base, alphabet, digits, L, r)
    if verify:
        check = verify_representation(rep, xv)
        if not all(check.values()):
            raise ArithmeticError(f"engine produced an invalid representation: {check}")
    return rep


def _mod(p: IntPoly, S: IntPoly) -> IntPoly:
    return p % S if p.degree >= S.degree else p


def verify_representation(rep: PeriodicRepresentation, x) -> dict[str, bool]:
    """Exact check of x g^L (g^r - 1) = (g^r - 1) sum_{k<=L} a_k g^(L-k) + sum_{k<=r} a_(L+k) g^(r-k) mod S,
    plus a numeric check of the digit series at g to 1e-30."""
    base = rep.base
    S = base.ring_poly
    xv = as_vector(x, S.degree)
    D = xv.common_denominator
    L, r = rep.L, rep.r
    out = {}
    out["digits_in_alphabet"] = all(a in rep.alphabet for a in rep.preperiod_digits + rep.period_digits)
    out["shape"] = r >= 1 and len(rep.preperiod_digits) == L and len(rep.period_digits) == r
    if not out["shape"]:
        out["ring_identity"] = out["numeric"] = False
        return out
    gr1 = IntPoly.monomial(r) - 1
    lhs = IntPoly(xv.numerators).shift(L) * gr1
    R = IntPoly([rep.preperiod_digits[L - 1 - i] for i in range(L)])  # coefficient of g^i is a_(L-i)
    T = IntPoly([rep.period_digits[r - 1 - i] for i in range(r)])
    rhs = (gr1 * R + T) * D
    out["ring_identity"] = _mod(lhs - rhs, S).is_zero()
    out["first_nonzero"] = rep.w == _first_nonzero(rep.preperiod_digits, rep.period_digits)
    with context(256):
        g = base.value(256)
        ginv = 1 / g
        val = mpfr(0)
        pw = mpfr(1)
        for a in rep.preperiod_digits:
            pw *= ginv
            val += a * pw
        tail = mpfr(0)
        q = mpfr(1)
        for a in rep.period_digits:
            q *= ginv
            tail += a * q
        val += pw * tail / (1 - q)
        xval = mpfr(0)
        for i, c in enumerate(xv.numerators):
            xval += c * g**i
        xval /= D
        out["numeric"] = abs(val - xval) < mpfr(10) ** -30 * max(1, abs(xval))
    return out


@dataclass(frozen=True)
class SchmidtSummary:
    base: str
    Q: int
    total: int
    periodic: int
    max_length: int  # max L + r observed

    @property
    def fraction_periodic(self) -> float:
        return self.periodic / self.total if self.total else 1.0


def schmidt_suite(base: AlgebraicBase, Q: int, budget: int = DEFAULT_BUDGET) -> SchmidtSummary:
    """Greedy expansions of every reduced p/q in (0, 1) with q <= Q."""
    if not base.is_pisot():
        raise ValueError(f"{base.describe()} is not a certified Pisot base")
    total = periodic = longest = 0
    for q in range(2, Q + 1):
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            total += 1
            try:
                rep = renyi_digits(base, Fraction(p, q), budget)
            except BudgetExceeded:
                continue
            if all(verify_representation(rep, Fraction(p, q)).values()):
                periodic += 1
            longest = max(longest, rep.L + rep.r)
    return SchmidtSummary(base.describe(), Q, total, periodic, longest)
