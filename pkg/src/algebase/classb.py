"""Almost Newman polynomials -1 + x + x^n + x^m1 + ... + x^ms with gap conditions.

Structural split f = A * B * C into a cyclotomic part A, a reciprocal
non-cyclotomic part B and a part C coprime to its own reciprocal; the base
g > 1 attached to f is the inverse of the unique root of f in (0, 1).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .periodic import AlgebraicBase
from .poly import (
    IntPoly,
    cyclotomic,
    divides,
    exact_div,
    gcd_primitive,
    is_reciprocal,
    reciprocal,
    totient,
)
from .roots import RootEnclosure, isolate_real_roots, real_root_in_interval

SELMER_FACTOR = IntPoly([1, -1, 1])  # x^2 - x + 1


class GapViolation(ValueError):
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class ClassBPoly:
    n: int
    exponents: tuple[int, ...]
    poly: IntPoly

    def to_json(self) -> dict:
        return {"n": self.n, "exponents": list(self.exponents), "poly": str(self.poly)}


def trinomial(n: int) -> IntPoly:
    return IntPoly.from_exponents({0: -1, 1: 1}) + IntPoly.monomial(n)


def check_gaps(n: int, exponents) -> None:
    prev = n
    for q, m in enumerate(exponents, 1):
        if m - prev < n - 1:
            raise GapViolation(f"gap m_{q} - {'n' if q == 1 else f'm_{q - 1}'} = {m - prev} < n - 1 = {n - 1}", q)
        prev = m


def make_class_b(n: int, exponents=()) -> ClassBPoly:
    if n < 2:
        raise ValueError("n must be >= 2")
    exps = tuple(int(m) for m in exponents)
    check_gaps(n, exps)
    p = trinomial(n)
    for m in exps:
        p = p + IntPoly.monomial(m)
    return ClassBPoly(n, exps, p)


@dataclass(frozen=True)
class SelmerResult:
    n: int
    irreducible: bool
    quotient: IntPoly | None = None


def selmer_classify(n: int) -> SelmerResult:
    """-1 + x + x^n is irreducible unless n = 5 mod 6, where x^2 - x + 1 splits off."""
    if n < 2:
        raise ValueError("n must be >= 2")
    f = trinomial(n)
    if n % 6 == 5:
        return SelmerResult(n, False, exact_div(f, SELMER_FACTOR))
    return SelmerResult(n, True)


@dataclass(frozen=True)
class FactorSplit:
    cyclotomic_part: IntPoly
    reciprocal_noncyclotomic_part: IntPoly
    nonreciprocal_part: IntPoly
    cyclotomic_indices: tuple[int, ...]
    product_ok: bool

    def to_json(self) -> dict:
        return {
            "A": str(self.cyclotomic_part),
            "B": str(self.reciprocal_noncyclotomic_part),
            "C": str(self.nonreciprocal_part),
            "cyclotomic_indices": list(self.cyclotomic_indices),
            "product_ok": self.product_ok,
        }


class IncompleteCyclotomicScan(RuntimeError):
    pass


@functools.lru_cache(maxsize=None)
def _small_totient_indices(max_phi: int, k_bound: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, k_bound + 1) if totient(k) <= max_phi)


def _strip_cyclotomic(g: IntPoly, k_bound: int) -> tuple[IntPoly, IntPoly, list[int]]:
    A = IntPoly([1])
    found = []
    for k in _small_totient_indices(max(g.degree, 0), k_bound):
        phi = cyclotomic(k)
        while g.degree >= phi.degree and divides(phi, g):
            g = exact_div(g, phi)
            A = A * phi
            found.append(k)
    return A, g, found


def split_factors(f: IntPoly, k_bound: int | None = None) -> FactorSplit:
    if f.is_zero() or f[0] == 0:
        raise ValueError("need f nonzero with f(0) != 0")
    d = f.degree
    if k_bound is None:
        k_bound = max(2, 2 * d * d)
    A, g, ks = _strip_cyclotomic(f, k_bound)
    B = gcd_primitive(g, reciprocal(g)) if g.degree >= 1 else IntPoly([1])
    if B.lead < 0:
        B = -B
    C = exact_div(g, B)
    # a cyclotomic factor left in B means the scan bound was too small
    if B.degree >= 1:
        _, rest, extra = _strip_cyclotomic(B, 2 * B.degree * B.degree + 2)
        if extra:
            raise IncompleteCyclotomicScan(f"k_bound={k_bound} missed cyclotomic indices {extra}")
    return FactorSplit(A, B, C, tuple(ks), A * B * C == f)


@functools.lru_cache(maxsize=None)
def _theta_cached(n: int, precision: int) -> RootEnclosure:
    if n == 1:
        return real_root_in_interval(IntPoly([-1, 2]), 0, 1, precision)
    return real_root_in_interval(trinomial(n), 0, 1, precision)


def theta(n: int, precision: int = 128) -> RootEnclosure:
    """Root of -1 + x + x^n in (0, 1); n = 1 gives 1/2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _theta_cached(n, precision)


def _inverse_root(cb: ClassBPoly, precision: int) -> RootEnclosure:
    f = cb.poly
    ivs = isolate_real_roots(f, Fraction(0), Fraction(1))
    if len(ivs) != 1:
        raise ValueError(f"{f} has {len(ivs)} roots in (0, 1)")
    enc = real_root_in_interval(f, 0, 1, precision)
    lo, hi = enc.real_interval
    # f is increasing on (0, 1): exact sign tests at bracket endpoints of theta
    bits = precision
    while True:
        t_prev = theta(cb.n - 1, bits).real_interval
        t_n = theta(cb.n, bits).real_interval
        above = f.sign_at(t_prev[1]) < 0  # root > theta_(n-1)
        if cb.exponents:
            below = f.sign_at(t_n[0]) > 0  # root < theta_n
        else:
            below = True  # f is the trinomial: root = theta_n
        if above and below:
            return enc
        if bits > 4096:
            raise ValueError(f"could not place the root of {f} in (theta_{cb.n - 1}, theta_{cb.n}]")
        bits *= 2


def gamma_from_section(cb: ClassBPoly, precision: int = 128) -> AlgebraicBase:
    """Base g = 1/x0 where x0 is the root of f in (theta_(n-1), theta_n]."""
    inv = _inverse_root(cb, precision)
    S = -reciprocal(cb.poly)
    lo, hi = inv.real_interval
    enc = real_root_in_interval(S, 1 / hi, 1 / lo, precision)
    return AlgebraicBase(S, enc, "base_gt_one")


def minimal_polynomial_candidate(cb: ClassBPoly, split: FactorSplit | None = None, precision: int = 128) -> IntPoly:
    """Monic normalisation of -C*, checked to vanish at the base."""
    split = split or split_factors(cb.poly)
    P = -reciprocal(split.nonreciprocal_part)
    if P.lead < 0:
        P = -P
    base = gamma_from_section(cb, precision)
    lo, hi = base.selected_root.real_interval
    if not isolate_real_roots(P, lo, hi):
        raise ArithmeticError(f"{P} does not vanish at the selected base")
    return P


def nonreciprocal_coprime(split: FactorSplit) -> bool:
    C = split.nonreciprocal_part
    return C.degree < 1 or gcd_primitive(C, reciprocal(C)).degree == 0


def cyclotomic_part_ok(split: FactorSplit) -> bool:
    A = split.cyclotomic_part
    for k in split.cyclotomic_indices:
        A = exact_div(A, cyclotomic(k))
    return A == IntPoly([1]) and (split.reciprocal_noncyclotomic_part.degree < 1 or is_reciprocal(split.reciprocal_noncyclotomic_part) or is_reciprocal(-split.reciprocal_noncyclotomic_part))
