import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from algebase.dominance import (
    Alphabet,
    BudgetExhausted,
    bound_checks,
    companion_matrix,
    dominance_index,
    maximal_alphabet,
    pierce_number,
    power_charpoly,
    power_sums,
    scientific,
    verify_minimality,
)
from algebase.poly import IntPoly, parse_poly, resultant
from algebase.roots import UnitCircleError

TAU = parse_poly("x^2 - x - 1")


def lucas(n):
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def monic(coeffs):
    return IntPoly(list(coeffs) + [1])


monic_polys = st.lists(st.integers(-10, 10), min_size=1, max_size=8).map(monic).filter(lambda p: p[0] != 0)


def test_companion_and_charpoly():
    assert companion_matrix(parse_poly("x - 2")) == [[2]]
    assert companion_matrix(TAU) == [[0, 1], [1, 1]]
    H = companion_matrix(parse_poly("x^3 - x - 1"))
    assert [row[-1] for row in H] == [1, 1, 0]
    assert power_charpoly(TAU, 3) == parse_poly("x^2 - 4*x - 1")
    assert power_charpoly(parse_poly("x^3 - x - 1"), 2) == parse_poly("x^3 - 2*x^2 + x - 1")
    assert power_charpoly(parse_poly("x - 2"), 4) == parse_poly("x - 16")
    # A^2 for the golden ratio: roots tau^2 and tau'^2
    assert power_charpoly(TAU, 2) == parse_poly("x^2 - 3*x + 1")


def test_pierce_small():
    assert pierce_number(parse_poly("x - 2"), 10) == 1023
    assert pierce_number(TAU, 5) == 11


@pytest.mark.parametrize("N", range(1, 31))
def test_pierce_lucas(N):
    assert pierce_number(TAU, N) == abs(1 + (-1) ** N - lucas(N))


@given(monic_polys, st.integers(1, 30))
@settings(max_examples=60, deadline=None)
def test_pierce_resultant_vs_charpoly(p, N):
    via_charpoly = abs(power_charpoly(p, N)(1))
    via_resultant = abs(resultant(p, IntPoly.monomial(N) - 1))
    assert via_charpoly == via_resultant == pierce_number(p, N)


@given(monic_polys)
@settings(max_examples=40, deadline=None)
def test_delta_one_is_value_at_one(p):
    assert pierce_number(p, 1) == abs(p(1))


@given(monic_polys, st.integers(1, 12))
@settings(max_examples=40, deadline=None)
def test_power_sums_match_charpoly(p, N):
    # Newton identities: trace of A^N is the sum of N-th powers of the roots
    s = power_sums(p, N)
    g = power_charpoly(p, N)
    assert s[N] == -g[g.degree - 1]


@given(monic_polys, st.integers(1, 50))
@settings(max_examples=40, deadline=None)
def test_numeric_charpoly_matches_exact(p, N):
    try:
        numeric = power_charpoly(p, N, "numeric")
    except UnitCircleError:
        assume(False)
    assert numeric == power_charpoly(p, N, "exact")


def test_golden_alphabet():
    alphabet, rep = maximal_alphabet(TAU)
    assert alphabet.m == 3 and rep.N == 2 and rep.j0 == 1
    assert list(alphabet.digits()) == [-3, -2, -1, 0, 1, 2, 3]
    assert verify_minimality(rep)


def test_integer_base():
    rep = dominance_index(parse_poly("x - 2"), 1)
    assert rep.N == 1 and rep.m == 2  # ceil((2 - 1)/2) + 1
    assert bound_checks(rep).pierce_bound


def test_budget_exhausted():
    with pytest.raises(BudgetExhausted):
        dominance_index(parse_poly("x^101 + x^11 + x - 1"), 1, "numeric", N_max=10)


def test_unit_circle_rejected():
    with pytest.raises(UnitCircleError):
        dominance_index(parse_poly("x^2 - x + 1"))


def _dominance_cases(seed, count):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randint(1, 6)
        p = monic([rng.randint(-6, 6) for _ in range(d)])
        if p[0] == 0:
            continue
        try:
            out.append(dominance_index(p, 1, "exact", N_max=400))
        except (UnitCircleError, BudgetExhausted):
            continue
    return out


@pytest.mark.parametrize("rep", _dominance_cases(7, 20), ids=lambda r: str(r.base_poly))
def test_backends_agree(rep):
    other = dominance_index(rep.base_poly, 1, "numeric", N_max=400)
    assert (other.N, other.gN, other.m) == (rep.N, rep.gN, rep.m)
    assert verify_minimality(rep)
    b = bound_checks(rep)
    assert b.pierce_bound and b.alphabet_bound


def test_golden_t2():
    rep = dominance_index(TAU, 2)
    assert rep.N == 4 and rep.gN == (1, -7, 1) and rep.pierce_N == 5
    assert bound_checks(rep).pierce_bound


def test_t_parameter_monotone():
    # a smaller t is a weaker requirement, so N can only drop
    p = parse_poly("x^3 - x - 1")
    Ns = [dominance_index(p, t).N for t in (Fraction(1, 4), Fraction(1), Fraction(4))]
    assert Ns == sorted(Ns)


def test_scientific():
    assert scientific(3) == ("3.000000000", 0)
    assert scientific(2617526038 * 10**356 + 123) == ("2.617526038", 365)
    assert Alphabet(2).size == 5 and -2 in Alphabet(2) and 3 not in Alphabet(2)


def test_certified_coefficients_exact_at_degree_101():
    # P_N(1) from certified ball arithmetic must equal the resultant exactly
    from algebase.classb import make_class_b
    from algebase.poly import reciprocal

    p = -reciprocal(make_class_b(11, (21, 35, 101)).poly)
    assert pierce_number(p, 588, "numeric") == abs(resultant(p, IntPoly.monomial(588) - 1))
