from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from algebase.poly import IntPoly, parse_poly
from algebase.roots import context, find_roots
from algebase.trail import (
    TrailCertificate,
    TrailInputError,
    height_bound,
    rewriting_trail,
    theorem_alphabet,
    verify_trail,
)

S3 = parse_poly("1 - x - x^3")


@st.composite
def s_stars(draw, max_s=30):
    s = draw(st.integers(1, max_s))
    body = draw(st.lists(st.sampled_from([-1, 0, 1]), min_size=s - 1, max_size=s - 1))
    last = draw(st.sampled_from([-1, 1]))
    return IntPoly([1] + body + [last])


@st.composite
def ps(draw, max_d=8, max_h=20):
    d = draw(st.integers(1, max_d))
    H = draw(st.integers(1, max_h))
    body = draw(st.lists(st.integers(-H, H), min_size=d - 1, max_size=d - 1))
    last = draw(st.integers(1, H)) * draw(st.sampled_from([-1, 1]))
    return IntPoly([1] + body + [last])


@pytest.mark.parametrize(
    "p,a_last,h",
    [
        ("1 + x", "-1 - 2*x", [2, 1, 2]),
        ("1 - x", "-1", [0, 1]),
        ("1 + 2*x + x^2", "-1 - 3*x - 4*x^2", [5, 3, 4]),
    ],
)
def test_hand_examples(p, a_last, h):
    cert = rewriting_trail(S3, parse_poly(p))
    assert cert.rewriting_polys[-1] == parse_poly(a_last)
    assert cert.remainder == IntPoly(h)
    assert all(verify_trail(cert).values())


def test_hand_example_value_at_theta3():
    cert = rewriting_trail(S3, parse_poly("1 + x"))
    (x,) = [e for e in find_roots(S3, 100) if abs(complex(e.center)) < 1]
    t = complex(x.center).real
    assert t == pytest.approx(0.682328, abs=1e-6)
    assert cert.p(t) == pytest.approx(t**2 * cert.remainder(t), rel=1e-14)
    assert cert.p(t) == pytest.approx(1.682328, abs=1e-6)


@pytest.mark.parametrize("d,H,m", [(1, 1, 2), (2, 2, 7), (10, 1, 1365)])
def test_theorem_alphabet(d, H, m):
    assert theorem_alphabet(d, H) == m


def test_bad_inputs():
    with pytest.raises(TrailInputError):
        rewriting_trail(parse_poly("1 - 2*x"), parse_poly("1 + x"))
    with pytest.raises(TrailInputError):
        rewriting_trail(S3, parse_poly("2 + x"))
    with pytest.raises(TrailInputError):
        rewriting_trail(parse_poly("2 - x"), parse_poly("1 + x"))


def test_tampering_detected():
    cert = rewriting_trail(S3, parse_poly("1 + x"))
    h = list(cert.remainder.coeffs)
    h[1] += 1
    assert not verify_trail(replace(cert, remainder=IntPoly(h)))["identity"]
    big = replace(cert, height_trace=(height_bound(1, 1) + 1,))
    v = verify_trail(big)
    assert not v["height_trace"] and v["identity"]


@given(s_stars(), ps())
@settings(max_examples=300, deadline=None)
def test_certificate_invariants(s, p):
    cert = rewriting_trail(s, p)
    d, H = p.degree, p.height
    last = cert.rewriting_polys[-1]
    assert last * s + p == cert.remainder.shift(d + 1)
    assert cert.remainder.is_zero() or cert.remainder.degree <= s.degree - 1
    assert cert.remainder.height <= (2**d - 1) * H + 2**d
    assert cert.m_theorem == theorem_alphabet(d, H)
    assert all(verify_trail(cert).values())


@given(s_stars(12), ps(6, 10))
@settings(max_examples=100, deadline=None)
def test_step_local_invariant(s, p):
    cert = rewriting_trail(s, p)
    for q, a in enumerate(cert.rewriting_polys, 1):
        assert a[0] == -1 and a.degree <= q
        v = a * s + p
        assert all(v[i] == 0 for i in range(1, q + 1))


@given(s_stars(10), ps(5, 10))
@settings(max_examples=30, deadline=None)
def test_identity_at_roots(s, p):
    cert = rewriting_trail(s, p)
    with context(200):
        for e in find_roots(s, 120):
            x = e.center
            if abs(x) >= 1:
                continue
            lhs = sum(c * x**i for i, c in enumerate(p.coeffs))
            rhs = x ** cert.offset * sum(c * x**i for i, c in enumerate(cert.remainder.coeffs))
            assert abs(lhs - rhs) < 1e-25 * (1 + abs(lhs))


@given(s_stars(10), ps(5, 10))
@settings(max_examples=30, deadline=None)
def test_json_roundtrip_and_determinism(s, p):
    cert = rewriting_trail(s, p)
    assert TrailCertificate.from_json(cert.to_json()) == cert
    assert rewriting_trail(s, p).to_json() == cert.to_json()


def test_extra_steps_keep_identity():
    cert = rewriting_trail(S3, parse_poly("1 + 2*x + x^2"), extra_steps=3)
    assert cert.rewriting_polys[-1] * S3 + cert.p == cert.remainder.shift(cert.offset)
