import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import PRIMES, poly, soluble_cases
from rankone.invariants import ResidueSeries, is_p_typical, is_power_of, residue_invariant, vT
from rankone.numbertheory import make_params
from rankone.series import InputPoly
from rankone.witt import (
    WittFactorization,
    ah_rational,
    ah_series,
    index_via_witt,
    vt_exponent_from_factors,
    witt_factorize,
)


def test_ah_rational_start():
    assert ah_rational(2, 3) == (1, 1, 1, Fraction(2, 3))
    assert ah_rational(3, 3)[:3] == (1, 1, Fraction(1, 2))


@pytest.mark.parametrize("p", PRIMES)
def test_ah_is_p_integral(p):
    assert all(a.denominator % p for a in ah_rational(p, 80))


def test_ah_series_examples():
    pr = make_params(2, 2)
    assert ah_series(0, 1, pr).is_one()
    assert ah_series(1, 1, pr).coeffs == (1, 1, 1)
    for p in PRIMES:
        pr = make_params(p, 12)
        for n in range(1, 13):
            for u in range(p):
                assert ah_series(u, n, pr).coeffs[n] == u
                assert not any(ah_series(u, n, pr).coeffs[1:n])
    with pytest.raises(ValueError):
        ah_series(1, 0, make_params(2, 2))


def test_factorize_examples():
    pr = make_params(2, 2)
    assert witt_factorize(ResidueSeries.one(2, 2), pr).factors == {}
    assert witt_factorize(ResidueSeries(2, (1, 1, 1)), pr).factors == {1: 1}
    for p in PRIMES:
        pr = make_params(p, p)
        eh = residue_invariant(poly("pi(0)*T", p, p), pr)
        assert witt_factorize(eh, pr).factors == {p: 1}


@given(st.sampled_from(PRIMES), st.integers(1, 14), st.data())
def test_factorization_unique(p, D, data):
    pr = make_params(p, D)
    coords = {n: u for n in range(1, D + 1)
              if (u := data.draw(st.integers(0, p - 1)))}
    w = WittFactorization(p, D, coords)
    eh = w.reconstruct(pr)
    assert witt_factorize(eh, pr).factors == coords


@given(st.sampled_from(PRIMES), st.integers(1, 14), st.data())
def test_factorize_reconstructs(p, D, data):
    pr = make_params(p, D)
    eh = ResidueSeries(p, (1,) + tuple(data.draw(st.integers(0, p - 1)) for _ in range(D)))
    assert witt_factorize(eh, pr).reconstruct(pr) == eh


@given(soluble_cases(max_D=12))
def test_p_typical_coordinates(case):
    P, pr, eh = case
    p = pr.p
    typ = InputPoly.from_terms({i: c for i, c in P.terms if is_power_of(i, p)}, pr.D)
    assert is_p_typical(typ, p)
    eh = residue_invariant(typ, pr)
    f = witt_factorize(eh, pr).factors
    assert all(is_power_of(n, p) for n in f)
    k = vt_exponent_from_factors(f, p)
    v = vT(eh)
    assert (v == math.inf and k == math.inf) or v == p**k


def test_index_via_witt_examples():
    for p in PRIMES:
        pr = make_params(p, p)
        assert index_via_witt(poly("pi(0)*T", p, p), pr) == 0
        assert index_via_witt(InputPoly.from_terms({}, p), pr) == 1
