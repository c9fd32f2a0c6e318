"""Rewriting trails: restore the coefficients of P against a relation S*(1/g) = 0.

Starting from V_0 = -S* + P (which vanishes at X = 0), step q adds
c_q X^q S* with c_q chosen to kill the X^q coefficient of V.  After d = deg P
steps V = A'_d S* + P = X^(d+1) h, so at every root x of S*, P(x) = x^(d+1) h(x).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .poly import IntPoly


class TrailInputError(ValueError):
    pass


def height_bound(q: int, H: int) -> int:
    return (2**q - 1) * H + 2**q


def theorem_alphabet(d: int, H: int) -> int:
    """ceil(2((2^d - 1) H + 2^d) / 3)."""
    if d < 1 or H < 1:
        raise ValueError("need d >= 1 and H >= 1")
    return -(-2 * height_bound(d, H) // 3)


@dataclass(frozen=True)
class TrailCertificate:
    s_star: IntPoly
    p: IntPoly
    rewriting_polys: tuple[IntPoly, ...]
    remainder: IntPoly  # h, with V = X^offset * h
    offset: int
    height_trace: tuple[int, ...]
    m_theorem: int

    @property
    def d(self) -> int:
        return self.p.degree

    @property
    def H(self) -> int:
        return self.p.height

    def to_json(self) -> str:
        return json.dumps(
            {
                "s_star": self.s_star.to_json(),
                "p": self.p.to_json(),
                "rewriting_polys": [a.to_json() for a in self.rewriting_polys],
                "remainder": self.remainder.to_json(),
                "offset": self.offset,
                "height_trace": self.height_trace,
                "m_theorem": str(self.m_theorem),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "TrailCertificate":
        d = json.loads(text)
        return cls(
            s_star=IntPoly.from_json(d["s_star"]),
            p=IntPoly.from_json(d["p"]),
            rewriting_polys=tuple(IntPoly.from_json(a) for a in d["rewriting_polys"]),
            remainder=IntPoly.from_json(d["remainder"]),
            offset=int(d["offset"]),
            height_trace=tuple(int(x) for x in d["height_trace"]),
            m_theorem=int(d["m_theorem"]),
        )


def _check_inputs(s_star: IntPoly, p: IntPoly):
    if s_star.degree < 1 or s_star[0] != 1 or any(c not in (-1, 0, 1) for c in s_star.coeffs[1:]):
        raise TrailInputError(f"S* must be 1 + sum of -1/0/+1 multiples of X^i, got {s_star}")
    if p.degree < 1 or p[0] != 1:
        raise TrailInputError(f"P must have constant term 1 and degree >= 1, got {p}")


def rewriting_trail(s_star: IntPoly, p: IntPoly, extra_steps: int = 0) -> TrailCertificate:
    _check_inputs(s_star, p)
    d = p.degree
    steps = d + extra_steps
    a_prime = IntPoly([-1])
    V = p - s_star
    polys = []
    trace = []
    for q in range(1, steps + 1):
        c = -V[q]
        if c:
            step = s_star.shift(q) * c
            V = V + step
            a_prime = a_prime + IntPoly.monomial(q, c)
        polys.append(a_prime)
        tail = IntPoly([0] * (q + 1) + list(p.coeffs[q + 1 :]))
        trace.append((V - tail).height)
    h = V.shift(-(steps + 1))
    return TrailCertificate(
        s_star=s_star,
        p=p,
        rewriting_polys=tuple(polys),
        remainder=h,
        offset=steps + 1,
        height_trace=tuple(trace),
        m_theorem=theorem_alphabet(d, p.height),
    )


def verify_trail(cert: TrailCertificate) -> dict[str, bool]:
    """Independent re-check of a certificate; failures are reported, not raised."""
    s, p = cert.s_star, cert.p
    d, H = p.degree, p.height
    out = {}
    last = cert.rewriting_polys[-1] if cert.rewriting_polys else IntPoly([-1])
    lhs = last * s + p
    out["identity"] = lhs == cert.remainder.shift(cert.offset)
    out["rewriting_shape"] = all(a[0] == -1 and a.degree <= q for q, a in enumerate(cert.rewriting_polys, 1))
    out["remainder_degree"] = cert.remainder.is_zero() or cert.remainder.degree <= s.degree - 1
    out["height_trace"] = len(cert.height_trace) >= d and all(
        h <= height_bound(q, H) for q, h in enumerate(cert.height_trace[:d], 1)
    )
    out["remainder_height"] = cert.remainder.height <= height_bound(d, H)
    out["m_theorem"] = cert.m_theorem == theorem_alphabet(d, H)
    return out
