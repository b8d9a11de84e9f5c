import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import PRIMES, poly, soluble_cases
from rankone.errors import PrecisionError
from rankone.expr import Coeff
from rankone.numbertheory import from_fraction, from_int, make_params, pi_elem
from rankone.series import (
    InputPoly,
    derivative,
    etilde,
    prepare,
    series_mul,
    tilde_transform,
    to_plain,
    truncated_exp,
    truncated_exp_direct,
    unscale,
)


def as_fractions(series, params):
    return [from_fraction(params.ring, q) for q in series]


def same(xs, ys):
    return all(x.equals(y) for x, y in zip(xs, ys)) and len(xs) == len(ys)


@pytest.mark.parametrize("p", PRIMES)
def test_tilde_examples(p):
    assert str(tilde_transform(poly("pi(0)*T", p, 1), make_params(p, 1))) == "T"
    assert str(tilde_transform(poly("pi(0)*T", p, p), make_params(p, p))) == "pi(0)*pi(1)^-1*T"
    if p > 2:
        pr = make_params(p, p - 1)
        assert str(tilde_transform(poly("pi(0)*T", p, p - 1), pr)) == "T"


def test_tilde_rejects_degree_above_bound():
    with pytest.raises(ValueError):
        tilde_transform(poly("pi(0)*T^3", 2, 3), make_params(2, 2))


def test_prepare_examples():
    pr = make_params(2, 2)
    _, k = prepare(poly("T", 2, 2), pr)
    assert k == 0
    scaled, k = prepare(poly("pi(1)^-1*T", 2, 2), pr)
    assert k == 1
    assert scaled.coeffs(pr)[1].equals(from_int(pr.ring, 1))
    scaled, k = prepare(poly("pi(1)^2*T", 2, 2), pr)
    assert k == -2
    assert scaled.coeffs(pr)[1].valuation() == 0
    _, k = prepare(poly("pi(1)^2*T", 2, 2), pr, clamp=True)
    assert k == 0
    with pytest.raises(ValueError):
        prepare(InputPoly.from_terms({}, 2), pr)


def test_truncated_exp_of_T():
    pr = make_params(3, 3)
    b = truncated_exp([from_int(pr.ring, 1)], pr)
    assert b.basis == "factorial"
    assert same(b.coeffs, as_fractions([1, 1, 1, 1], pr))
    assert b.mults == 6
    assert same(to_plain(b).coeffs, as_fractions([1, 1, Fraction(1, 2), Fraction(1, 6)], pr))


def test_dwork_unit_example():
    # p = 2, d = 1: pi_0/pi_1 = 1 + zeta has valuation 1, and (pi_0/pi_1)^2/2 is a unit
    pr = make_params(2, 2)
    Pt = poly("pi(0)*pi(1)^-1*T", 2, 2)
    e = etilde(poly("pi(0)*T", 2, 2), pr).series.coeffs
    u = pi_elem(0, pr) / pi_elem(1, pr)
    assert u.valuation() == 1
    assert same(e, [from_int(pr.ring, 1), u, u * u * Fraction(1, 2)])
    assert e[2].valuation() == 0
    assert same(truncated_exp_direct(Pt, pr).coeffs, e)


@pytest.mark.parametrize("p", PRIMES)
def test_exp_of_T_to_the_p(p):
    D = 3 * p
    pr = make_params(p, D)
    Pt = poly(f"T^{p}", p, D)
    b = truncated_exp(derivative(Pt, pr), pr)
    expected = [Fraction(1, math.factorial(n // p)) if n % p == 0 else 0 for n in range(D + 1)]
    assert same(to_plain(b).coeffs, as_fractions(expected, pr))


def test_direct_examples():
    pr = make_params(2, 2)
    assert same(truncated_exp_direct(poly("T", 2, 2), pr).coeffs,
                as_fractions([1, 1, Fraction(1, 2)], pr))
    zero = InputPoly.from_terms({}, 2)
    assert same(truncated_exp_direct(zero, pr).coeffs, as_fractions([1, 0, 0], pr))
    assert same(etilde(zero, pr).series.coeffs, as_fractions([1, 0, 0], pr))


def test_unscale_identity_and_degree_one():
    pr = make_params(3, 3)
    s = to_plain(truncated_exp([from_int(pr.ring, 1)], pr))
    assert unscale(s, 0) is s
    P = poly("pi(1)^-2*T", 3, 3)
    run = etilde(P.compose_power(1), pr)
    a1 = tilde_transform(P, pr).coeffs(pr)[1]
    assert run.series.coeffs[1].equals(a1)


def test_direct_path_precision_error():
    pr = make_params(2, 8, margin=0)
    with pytest.raises(PrecisionError):
        truncated_exp_direct(poly("pi(3)^-30*T", 2, 8), pr)


def test_inputpoly_validation():
    with pytest.raises(ValueError):
        InputPoly.from_terms({0: Coeff.const(1)}, 2)
    with pytest.raises(ValueError):
        InputPoly.from_terms({3: Coeff.const(1)}, 2)
    P = poly("pi(0)*T + 2*T^2", 3, 4)
    assert P.degree == 2 and P.degree_bound == 4 and P.support() == [1, 2]
    assert str(P.compose_power(2)) == "pi(0)*T^2 + 2*T^4"
    assert str(P.scale_var(2)) == "2*pi(0)*T + 8*T^2"


@st.composite
def prepared_inputs(draw):
    p = draw(st.sampled_from(PRIMES))
    D = draw(st.integers(1, 9))
    pr = make_params(p, D)
    terms = {}
    for i in range(1, D + 1):
        if draw(st.booleans()):
            e = draw(st.integers(-2, 3))
            q = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 4)))
            terms[i] = Coeff.const(q) * Coeff.pi(pr.d, e) if q else Coeff()
    P = InputPoly.from_terms(terms, D)
    return P, pr


@given(prepared_inputs())
def test_recurrence_matches_direct(case):
    Pt, pr = case
    if Pt.is_zero():
        return
    scaled, k = prepare(Pt, pr)
    b = truncated_exp(derivative(scaled, pr), pr)
    # integrality of the factorial-scaled coefficients
    assert all(x.is_integral() for x in b.coeffs)
    assert b.mults <= pr.D * (pr.D - 1) // 2 + pr.D
    via = unscale(to_plain(b), k).coeffs
    try:
        direct = truncated_exp_direct(Pt, pr).coeffs
    except PrecisionError:
        return
    for x, y in zip(via, direct):
        diff = x - y
        assert diff.is_zero() or diff.valuation() >= min(x.value_prec, y.value_prec)


@given(prepared_inputs())
def test_minoration_after_prepare(case):
    Pt, pr = case
    if Pt.is_zero():
        return
    scaled, _ = prepare(Pt, pr)
    vals = [a.valuation() for a in scaled.coeffs(pr).values()]
    assert min(vals) <= pr.D - 1


@given(soluble_cases(max_D=7), st.integers(0, 2**32 - 1))
def test_group_property(case, seed):
    P1, pr, _ = case
    rng = random.Random(seed)
    P2 = InputPoly.from_terms(
        {i: Coeff.const(rng.randrange(pr.p)) * Coeff.pi(pr.d_i(i))
         for i in range(1, pr.D + 1) if rng.random() < 0.5}, pr.D)
    lhs = etilde(P1 + P2, pr).series.coeffs
    rhs = series_mul(etilde(P1, pr).series.coeffs, etilde(P2, pr).series.coeffs, pr.D)
    for x, y in zip(lhs, rhs):
        diff = x - y
        assert diff.is_zero() or diff.valuation() >= min(x.value_prec, y.value_prec)
