"""Exact dense integer polynomials.

Coefficients are Python ints stored low degree first, so ``IntPoly((-1, 1, 1))``
is ``x^2 + x - 1``.  Everything here is exact; numerics live in
:mod:`algebase.roots`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

NEG_INF = float("-inf")
DEFAULT_MAX_DEGREE = 10**6


class InexactDivisionError(ArithmeticError):
    pass


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


# --- fast coefficient convolution -------------------------------------------

_SCHOOLBOOK_CUTOFF = 24


def _pack(c: Sequence[int], w: int) -> int:
    n = len(c)
    if n == 1:
        return c[0]
    h = n // 2
    return _pack(c[:h], w) + (_pack(c[h:], w) << (w * h))


def _unpack(x: int, w: int, n: int) -> list[int]:
    if n == 1:
        return [x]
    h = n // 2
    s = w * h
    low = x & ((1 << s) - 1)
    if low >= 1 << (s - 1):
        low -= 1 << s
    return _unpack(low, w, h) + _unpack((x - low) >> s, w, n - h)


def convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact product of two coefficient lists (Kronecker substitution for large inputs)."""
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    w = (ma * mb * min(len(a), len(b))).bit_length() + 2
    n = len(a) + len(b) - 1
    return _unpack(_pack(a, w) * _pack(b, w), w, n)


# --- the polynomial type -----------------------------------------------------


@dataclass(frozen=True, init=False)
class IntPoly:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _trim(int(c) for c in coeffs))

    # construction helpers
    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c: int) -> "IntPoly":
        return cls([c])

    @classmethod
    def from_exponents(cls, exps: dict[int, int] | Iterable[int]) -> "IntPoly":
        items = exps.items() if isinstance(exps, dict) else ((e, 1) for e in exps)
        out: dict[int, int] = {}
        for e, c in items:
            out[e] = out.get(e, 0) + c
        if not out:
            return cls()
        c = [0] * (max(out) + 1)
        for e, v in out.items():
            c[e] = v
        return cls(c)

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # basic properties
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_fraction(self, x: Fraction) -> Fraction:
        """Exact value at a rational, done with one integer Horner pass."""
        x = Fraction(x)
        num, den = x.numerator, x.denominator
        acc, dpow = 0, 1
        for c in reversed(self.coeffs):
            acc = acc * num + c * dpow
            dpow *= den
        d = len(self.coeffs) - 1
        return Fraction(acc, den**d) if d > 0 else Fraction(acc)

    def sign_at(self, x: Fraction) -> int:
        v = self.eval_fraction(x)
        return (v > 0) - (v < 0)

    # arithmetic
    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other) -> "IntPoly":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __sub__(self, other) -> "IntPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "IntPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        other = _as_poly(other)
        return IntPoly(convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        if k < 0:
            raise ValueError("negative power")
        result, base = IntPoly([1]), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> "IntPoly":
        """Multiply by x^k (k >= 0) or drop the lowest -k coefficients."""
        if not self.coeffs:
            return self
        if k >= 0:
            return IntPoly((0,) * k + self.coeffs)
        return IntPoly(self.coeffs[-k:])

    def substitute_neg(self) -> "IntPoly":
        """p(-x)."""
        return IntPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        """Primitive part with positive leading coefficient."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.lead < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def divmod_exact(self, other: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Division over Z; raises if a quotient coefficient is not integral."""
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.coeffs)
        db = len(other.coeffs) - 1
        lb = other.coeffs[-1]
        if len(r) - 1 < db:
            return IntPoly(), self
        q = [0] * (len(r) - db)
        b = other.coeffs
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c == 0:
                continue
            qc, rem = divmod(c, lb)
            if rem:
                raise InexactDivisionError("non-integral quotient coefficient")
            q[i - db] = qc
            off = i - db
            for j in range(db + 1):
                r[off + j] -= qc * b[j]
        return IntPoly(q), IntPoly(r[:db])

    def __floordiv__(self, other) -> "IntPoly":
        return exact_div(self, _as_poly(other))

    def __mod__(self, other) -> "IntPoly":
        return self.divmod_exact(_as_poly(other))[1]

    def pseudo_rem(self, other: "IntPoly") -> "IntPoly":
        """lc(other)^(deg self - deg other + 1) * self mod other."""
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        lb = b[-1]
        e = len(r) - 1 - db + 1
        if e <= 0:
            return self
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            r = [x * lb for x in r]
            if c:
                off = i - db
                for j in range(db + 1):
                    r[off + j] -= c * b[j]
            e -= 1
            r.pop()
        res = IntPoly(r)
        return res * (lb**e) if e else res

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"IntPoly({format_poly(self)!r})"

    # serialisation
    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "IntPoly":
        return cls(int(x) for x in data)


def _as_poly(x) -> IntPoly:
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly([x])
    raise TypeError(f"cannot use {type(x).__name__} as IntPoly")


X = IntPoly([0, 1])


# --- text format -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z])|(\^)|(\*)|([+-]))")


def parse_poly(text: str, max_degree: int = DEFAULT_MAX_DEGREE) -> IntPoly:
    """Parse ``"x^101 + x^11 + x - 1"``-style input.

    Terms are ``c``, ``x``, ``c*x``, ``c*x^k`` or ``x^k`` joined by ``+``/``-``;
    a leading unary minus is allowed.  One variable letter per expression.
    """
    pos = 0
    n = len(text)
    var: str | None = None
    terms: dict[int, int] = {}

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect_int() -> int:
        nonlocal pos
        skip_ws()
        m = re.match(r"\d+", text[pos:])
        if not m:
            raise PolyParseError("expected integer", pos)
        pos += m.end()
        return int(m.group())

    def parse_var() -> int:
        nonlocal pos, var
        skip_ws()
        if pos >= n or not text[pos].isalpha():
            raise PolyParseError("expected variable", pos)
        ch = text[pos]
        if var is None:
            var = ch
        elif ch != var:
            raise PolyParseError(f"unexpected variable {ch!r} (already using {var!r})", pos)
        pos += 1
        skip_ws()
        if pos < n and text[pos] == "^":
            pos += 1
            start = pos
            k = expect_int()
            if k > max_degree:
                raise PolyParseError(f"exponent {k} exceeds max degree {max_degree}", start)
            return k
        return 1

    skip_ws()
    if pos >= n:
        raise PolyParseError("empty expression", 0)
    first = True
    while True:
        skip_ws()
        sign = 1
        if pos < n and text[pos] in "+-":
            if text[pos] == "-":
                sign = -1
            elif first:
                raise PolyParseError("unexpected '+'", pos)
            pos += 1
        elif not first:
            raise PolyParseError("expected '+' or '-'", pos)
        skip_ws()
        if pos >= n:
            raise PolyParseError("dangling operator", pos)
        if text[pos].isdigit():
            c = expect_int()
            skip_ws()
            if pos < n and text[pos] == "*":
                pos += 1
                k = parse_var()
            elif pos < n and text[pos].isalpha():
                raise PolyParseError("missing '*' between coefficient and variable", pos)
            else:
                k = 0
        elif text[pos].isalpha():
            c = 1
            k = parse_var()
        else:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        terms[k] = terms.get(k, 0) + sign * c
        first = False
        skip_ws()
        if pos >= n:
            break
    return IntPoly.from_exponents(terms)


def format_poly(p: IntPoly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


# --- operations --------------------------------------------------------------


def arithmetic(kind: str, p: IntPoly, q: IntPoly) -> IntPoly:
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    if kind == "exact_div":
        return exact_div(p, q)
    raise ValueError(f"unknown operation {kind!r}")


def exact_div(p: IntPoly, q: IntPoly) -> IntPoly:
    quo, rem = p.divmod_exact(q)
    if rem:
        raise InexactDivisionError(f"{q} does not divide {p}")
    return quo


def divides(q: IntPoly, p: IntPoly) -> bool:
    try:
        exact_div(p, q)
    except InexactDivisionError:
        return False
    return True


def reciprocal(p: IntPoly) -> IntPoly:
    """x^deg(p) p(1/x)."""
    if p.is_zero():
        raise ValueError("reciprocal of the zero polynomial")
    return IntPoly(reversed(p.coeffs))


def is_reciprocal(p: IntPoly) -> bool:
    """True if p = ±p*."""
    r = reciprocal(p)
    return r == p or r == -p


def _mobius(n: int) -> int:
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def divisors(n: int) -> list[int]:
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def totient(n: int) -> int:
    result, m, k = n, n, 2
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=4096)
def cyclotomic(k: int) -> IntPoly:
    """k-th cyclotomic polynomial from prod_{d | k} (x^d - 1)^mu(k/d)."""
    if k < 1:
        raise ValueError("cyclotomic index must be positive")
    num, den = [1], [1]
    for d in divisors(k):
        mu = _mobius(k // d)
        if mu == 1:
            num = _mul_binomial(num, d)
        elif mu == -1:
            den = _mul_binomial(den, d)
    return exact_div(IntPoly(num), IntPoly(den))


def _mul_binomial(c: list[int], d: int) -> list[int]:
    # c * (x^d - 1)
    out = [0] * (len(c) + d)
    for i, v in enumerate(c):
        out[i + d] += v
        out[i] -= v
    return out


def resultant(p: IntPoly, q: IntPoly) -> int:
    """Res(p, q) by the subresultant algorithm (Collins/Brown, Cohen Alg. 3.3.7)."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant with the zero polynomial")
    A, B = p, q
    s = 1
    if A.degree < B.degree:
        A, B = B, A
        if A.degree % 2 and B.degree % 2:
            s = -s
    if B.degree == 0:
        return s * B.lead ** A.degree
    a, b = A.content(), B.content()
    A = IntPoly(c // a for c in A.coeffs)
    B = IntPoly(c // b for c in B.coeffs)
    t = a ** B.degree * b ** A.degree
    g = h = 1
    while True:
        delta = A.degree - B.degree
        if A.degree % 2 and B.degree % 2:
            s = -s
        R = A.pseudo_rem(B)
        A = B
        if R.is_zero():
            return 0
        div = g * h**delta
        B = IntPoly(c // div for c in R.coeffs)
        g = A.lead
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g**delta // h ** (delta - 1)
        if B.degree == 0:
            da = A.degree
            if da == 1:
                hh = B.lead
            else:
                hh = B.lead**da // h ** (da - 1)
            return s * t * hh


def gcd_primitive(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive gcd over Q, normalised to positive leading coefficient."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    A, B = p.primitive(), q.primitive()
    if A.degree < B.degree:
        A, B = B, A
    while not B.is_zero():
        if B.degree == 0:
            return IntPoly([1])
        R = A.pseudo_rem(B)
        A, B = B, (R.primitive() if R else R)
    return A.primitive()


def squarefree_decomposition(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """[(f_i, i)] with p = c * prod f_i^i, the f_i primitive, squarefree and coprime."""
    if p.degree < 1:
        return []
    a = p.primitive()
    c = gcd_primitive(a, a.derivative())
    w = _div_primitive(a, c)
    out = []
    i = 1
    while w.degree > 0:
        g = gcd_primitive(w, c)
        z = _div_primitive(w, g)
        if z.degree > 0:
            out.append((z, i))
        c = _div_primitive(c, g)
        w = g
        i += 1
    return out


def _div_primitive(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive part of p/q where q | p over Q."""
    if q.degree <= 0:
        return p.primitive()
    lead = q.lead
    scaled = p * (lead ** (p.degree - q.degree + 1))
    return exact_div(scaled, q).primitive()


# --- rational vectors --------------------------------------------------------


@dataclass(frozen=True, init=False)
class RationalVector:
    """numerators / common_denominator, kept in lowest terms."""

    numerators: tuple[int, ...]
    common_denominator: int

    def __init__(self, numerators: Iterable[int], common_denominator: int = 1):
        nums = tuple(int(x) for x in numerators)
        den = int(common_denominator)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            nums, den = tuple(-x for x in nums), -den
        g = den
        for x in nums:
            g = gcd(g, x)
        if g > 1:
            nums, den = tuple(x // g for x in nums), den // g
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "common_denominator", den)

    @classmethod
    def from_fractions(cls, values: Sequence[Fraction | int]) -> "RationalVector":
        fr = [Fraction(v) for v in values]
        den = 1
        for f in fr:
            den = den * f.denominator // gcd(den, f.denominator)
        return cls([int(f * den) for f in fr], den)

    def __len__(self) -> int:
        return len(self.numerators)

    def to_fractions(self) -> list[Fraction]:
        return [Fraction(x, self.common_denominator) for x in self.numerators]

    def is_zero(self) -> bool:
        return not any(self.numerators)
