import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from algebase.poly import IntPoly, cyclotomic, parse_poly
from algebase.roots import (
    RootIntervalError,
    UnitCircleError,
    classify_modulus,
    context,
    find_roots,
    mahler_graeffe,
    mahler_roots,
    real_root_in_interval,
)

GOLDEN = (1 + math.sqrt(5)) / 2
LEHMER = parse_poly("x^10 + x^9 - x^7 - x^6 - x^5 - x^4 - x^3 + x + 1")

small_polys = st.lists(st.integers(-20, 20), min_size=2, max_size=12).map(IntPoly).filter(lambda p: p.degree >= 1)


def test_golden_roots():
    r = find_roots(parse_poly("x^2 - x - 1"), 64)
    vals = sorted(float(e.center.real) for e in r)
    assert vals == pytest.approx([1 - GOLDEN, GOLDEN], abs=1e-15)
    for e in r:
        assert e.radius <= 2.0**-64 * max(1, abs(complex(e.center)))


def test_linear_root_exact():
    (e,) = find_roots(parse_poly("x - 2"))
    assert e.center == 2 and e.radius == 0


def test_double_root():
    (e,) = find_roots(parse_poly("x^2 - 2*x + 1"))
    assert e.multiplicity == 2 and e.center == 1


def test_zero_roots_and_mixed():
    p = parse_poly("x^3") * parse_poly("x^2 + 1") * parse_poly("x - 3") ** 2
    enc = find_roots(p)
    assert sum(e.multiplicity for e in enc) == p.degree
    assert any(e.multiplicity == 3 and e.center == 0 for e in enc)


@given(small_polys)
@settings(max_examples=40, deadline=None)
def test_enclosures_match_mpmath(p):
    enc = find_roots(p, 80)
    assert sum(e.multiplicity for e in enc) == p.degree
    ref = mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=400, extraprec=400, error=False)
    # every reference root falls near some enclosure
    for z in ref:
        assert min(abs(complex(z) - complex(e.center)) for e in enc) < 1e-6


@given(small_polys)
@settings(max_examples=30, deadline=None)
def test_disks_disjoint_and_small(p):
    enc = find_roots(p, 100)
    for i, a in enumerate(enc):
        assert a.radius <= 2.0**-100 * max(1, abs(complex(a.center)))
        for b in enc[i + 1 :]:
            assert abs(a.center - b.center) > a.radius + b.radius


def test_residual_small_at_centers():
    p = parse_poly("x^101 + x^11 + x - 1")
    with context(200):
        for e in find_roots(p, 128):
            assert abs(p(e.center)) < p.degree * p.height * e.radius


@pytest.mark.parametrize(
    "text,j0",
    [("x^2 - x - 1", 1), ("x^2 - 3*x + 1", 1), ("x^3 - x - 1", 1), ("2*x^2 - 1", 0), ("x^101 + x^11 + x - 1", 80)],
)
def test_classify(text, j0):
    p = parse_poly(text)
    c = classify_modulus(p)
    assert c.j0 == j0
    assert c.inside + c.outside == p.degree and c.undecided == 0


@pytest.mark.parametrize("p", [parse_poly("x^2 - x + 1"), cyclotomic(7), LEHMER, parse_poly("x - 1")])
def test_classify_circle_fails(p):
    with pytest.raises(UnitCircleError):
        classify_modulus(p)


def test_classify_stable_under_precision():
    p = parse_poly("x^40 - x^39 - 1")
    assert classify_modulus(p, 128) == classify_modulus(p, 512)


def test_real_root_examples():
    r = real_root_in_interval(parse_poly("-1 + x + x^2"), 0, 1)
    assert float(r) == pytest.approx(1 / GOLDEN, abs=1e-15)
    r = real_root_in_interval(parse_poly("-1 + x + x^3"), 0, 1)
    assert float(r) == pytest.approx(0.6823278038280193, abs=1e-15)
    r = real_root_in_interval(parse_poly("2*x - 1"), 0, 1)
    assert r.center == 0.5 and r.radius == 0


def test_real_root_bracket_certified():
    p = parse_poly("x^5 - x - 1")
    r = real_root_in_interval(p, 1, 2, precision=300)
    lo, hi = r.real_interval
    assert p.sign_at(lo) < 0 < p.sign_at(hi)
    assert hi - lo <= Fraction(2) ** -300 * 2


def test_real_root_errors():
    with pytest.raises(RootIntervalError):
        real_root_in_interval(parse_poly("x^2 + 1"), -5, 5)
    with pytest.raises(RootIntervalError):
        real_root_in_interval(parse_poly("x^2 - 2"), -5, 5)


def test_mahler_examples():
    assert float(mahler_graeffe(parse_poly("x^2 - x - 1"))) == pytest.approx(GOLDEN, rel=1e-10)
    assert float(mahler_graeffe(parse_poly("x - 1"))) == pytest.approx(1.0, rel=1e-10)
    assert float(mahler_graeffe(parse_poly("-1 + x + x^12"))) == pytest.approx(1.38, abs=0.01)
    assert float(mahler_roots(parse_poly("x^2 - 3*x + 1"))) == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-12)
    assert float(mahler_roots(cyclotomic(15) * cyclotomic(4) ** 2)) == pytest.approx(1.0, rel=1e-12)
    assert float(mahler_roots(LEHMER)) == pytest.approx(1.17628081826, abs=1e-11)


def test_mahler_leading_coefficient():
    # 2x^2 + 3: roots of modulus sqrt(3/2), M = 2 * 3/2
    assert float(mahler_graeffe(parse_poly("2*x^2 + 3"))) == pytest.approx(3.0, rel=1e-10)


def test_graeffe_vs_roots_random():
    rng = random.Random(20261015)
    for _ in range(100):
        d = rng.randint(1, 20)
        c = [rng.randint(-50, 50) for _ in range(d)] + [rng.choice([-1, 1]) * rng.randint(1, 50)]
        p = IntPoly(c)
        if p.is_zero() or all(x == 0 for x in c[:-1]) and c[-1] == 0:
            continue
        g, r = mahler_graeffe(p), mahler_roots(p)
        assert abs(g - r) / r <= 1e-9, str(p)


@given(small_polys, small_polys)
@settings(max_examples=25, deadline=None)
def test_mahler_multiplicative(p, q):
    mp, mq, mpq_ = mahler_roots(p), mahler_roots(q), mahler_roots(p * q)
    assert abs(mpq_ - mp * mq) / mpq_ <= 1e-8
