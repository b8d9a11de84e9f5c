import math
import random
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import PRIMES, poly, random_ehat, soluble_cases
from rankone.errors import ConsistencyError, InsolubleError
from rankone.expr import Coeff
from rankone.invariants import (
    ResidueSeries,
    analyze,
    comparison_iso,
    equivalent,
    index,
    index_p_typical,
    is_p_typical,
    is_soluble,
    lfunction_degree,
    lift,
    ptypical_decompose,
    reduce_comparison,
    residue_invariant,
    shift_V,
    vT,
)
from rankone.numbertheory import make_params
from rankone.series import InputPoly
from rankone.witt import index_via_witt


def ehat_of(text, p, D):
    return residue_invariant(poly(text, p, D), make_params(p, D)).coeffs


def pi_exponential(p, k, D=None):
    """e_k: exp(pi_k T + pi_(k-1) T^p / p + ... + pi_0 T^(p^k) / p^k)."""
    text = " + ".join(f"1/{p**j}*pi({k - j})*T^{p**j}" for j in range(k + 1))
    return poly(text, p, D or p**k)


# solubility and e^

def test_soluble_examples():
    for p in PRIMES:
        for D in (1, p - 1 or 1, p, p * p):
            assert is_soluble(poly("pi(0)*T", p, D), make_params(p, D))
    w = is_soluble(poly("T", 2, 1), make_params(2, 1))
    assert not w and w.degree == 1 and w.deficit == 1
    assert is_soluble(InputPoly.from_terms({}, 3), make_params(2, 3))


@pytest.mark.parametrize("p", PRIMES)
def test_residue_invariant_examples(p):
    assert ehat_of("pi(0)*T", p, 1) == (1, 1)
    if p > 2:
        expected = tuple(pow(factorial(n), -1, p) for n in range(p))
        assert ehat_of("pi(0)*T", p, p - 1) == expected
    # the T^p coefficient reduces to +1 for every p (see the decisions ledger)
    assert ehat_of("pi(0)*T", p, p) == (1,) + (0,) * (p - 1) + (1,)


def test_residue_invariant_insoluble():
    with pytest.raises(InsolubleError):
        residue_invariant(poly("T", 2, 1), make_params(2, 1))


def test_vT_examples():
    assert vT(ResidueSeries(3, (1, 1, 0))) == 1
    assert vT(ResidueSeries(3, (1, 0, 0, 2))) == 3
    assert vT(ResidueSeries(3, (1, 0, 0))) == math.inf


def test_residue_series_ops():
    a = ResidueSeries(3, (1, 2, 0, 1))
    assert (a * a.inverse()).is_one()
    assert a.substitute_power(2, 3).coeffs == (1, 0, 2, 0)
    assert str(a) == "1 + 2*T + T^3"
    with pytest.raises(ValueError):
        ResidueSeries(3, (2, 1))


# p-typical decomposition

def test_decompose_examples():
    pr = make_params(2, 4)
    P = poly("pi(2)*T + pi(1)*T^2 + pi(0)*T^3 + pi(0)*T^4", 2, 4)
    comps = ptypical_decompose(P, pr).components
    assert str(comps[1]) == "pi(2)*T + pi(1)*T^2 + pi(0)*T^4"
    assert str(comps[3]) == "pi(0)*T"
    assert comps[3].degree_bound == 1
    assert ptypical_decompose(P, pr).recompose().as_dict() == P.as_dict()
    P = poly("pi(0)*T + 2*T^2", 2, 2)
    assert list(ptypical_decompose(P, make_params(2, 2)).components) == [1]
    P = poly("pi(0)*T^5 + pi(0)*T^15", 3, 15)
    comps = ptypical_decompose(P, make_params(3, 15)).components
    assert str(comps[5]) == "pi(0)*T + pi(0)*T^3"


@given(soluble_cases(max_D=12))
def test_decompose_recomposes(case):
    P, pr, _ = case
    dec = ptypical_decompose(P, pr)
    if not P.is_zero():
        assert dec.recompose().as_dict() == P.as_dict()
    for m, Pm in dec.components.items():
        assert m % pr.p and is_p_typical(Pm, pr.p) and Pm.degree_bound == pr.D // m


# index

@pytest.mark.parametrize("p", PRIMES)
def test_index_p_typical_examples(p):
    assert index_p_typical(poly("pi(0)*T", p, 1), make_params(p, 1)) == 0
    assert index_p_typical(poly("pi(0)*T", p, p), make_params(p, p)) == 0
    assert index_p_typical(InputPoly.from_terms({}, p), make_params(p, p)) == 1


def test_index_p_typical_rejects_support():
    with pytest.raises(ValueError):
        index_p_typical(poly("pi(0)*T^3", 2, 3), make_params(2, 3))


def test_index_examples():
    pr = make_params(2, 3)
    P = poly("pi(0)*T + pi(0)*T^3", 2, 3)
    assert index(P, pr) == -2
    assert index_via_witt(P, pr) == -2
    for p in (5, 7):
        for m in (1, 2, 3, 4):
            assert index(poly(f"pi(0)*T^{m}", p, m), make_params(p, m)) == 1 - m
    with pytest.raises(InsolubleError):
        index(poly("T", 2, 1), make_params(2, 1))


@pytest.mark.parametrize("p,k", [(2, 0), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1), (3, 2), (5, 1)])
def test_pi_exponential_index(p, k):
    P = pi_exponential(p, k)
    pr = make_params(p, p**k)
    assert index(P, pr) == 1 - p**k
    assert lfunction_degree(P, pr) == p**k - 1


def test_lfunction_degree_trivial():
    pr = make_params(2, 2)
    assert lfunction_degree(poly("pi(0)*T^2 - pi(0)*T", 2, 2), pr) == 0
    assert lfunction_degree(poly("pi(0)*T^2", 2, 2), pr) == 0


# equivalence, lift

def test_equivalent_examples():
    pr = make_params(2, 2)
    P = poly("pi(0)*T^2", 2, 2)
    assert equivalent(P, P, pr)
    F = poly("pi(0)*T^2 - pi(0)*T", 2, 2)
    assert residue_invariant(F, pr).is_one()
    assert equivalent(P, P + F, pr)
    assert not equivalent(poly("pi(0)*T", 3, 1), poly("2*pi(0)*T", 3, 1), make_params(3, 1))
    assert not equivalent(poly("pi(0)*T", 2, 1), poly("T", 2, 1), make_params(2, 1))
    with pytest.raises(InsolubleError):
        equivalent(poly("T", 2, 1), poly("3*T", 2, 1), make_params(2, 1))


def test_lift_examples():
    pr = make_params(2, 1)
    assert lift(ResidueSeries(2, (1, 0)), pr).is_zero()
    assert str(lift(ResidueSeries(2, (1, 1)), pr)) == "pi(0)*T"


@pytest.mark.parametrize("p", PRIMES)
def test_lift_roundtrip(p, rng):
    for _ in range(15):
        D = rng.randint(1, 12)
        pr = make_params(p, D)
        eh = random_ehat(rng, p, D)
        assert residue_invariant(lift(eh, pr), pr) == eh


@given(soluble_cases(max_D=9), st.integers(0, 2**32 - 1), st.booleans())
def test_completeness_of_ehat(case, seed, same_ehat):
    P1, pr, e1 = case
    e2 = e1 if same_ehat else random_ehat(random.Random(seed), pr.p, pr.D)
    # a second equation with the prescribed e^, built differently from the lift
    P2 = lift(e2, pr).scale_var(1 + pr.p)
    assert residue_invariant(P2, pr) == e2
    trivial_diff = residue_invariant(P1 - P2, pr).is_one()
    assert equivalent(P1, P2, pr) == (e1 == e2) == trivial_diff


# laws on the index

@given(soluble_cases(max_D=10), st.integers(1, 4))
def test_scaling_invariance(case, u):
    P, pr, _ = case
    if u % pr.p == 0:
        return
    assert index(P.scale_var(u), pr) == index(P, pr)


@given(soluble_cases(max_D=5), st.sampled_from([1, 2, 3, 4, 5]))
def test_substitution_law(case, m):
    P, pr, _ = case
    if m % pr.p == 0 or P.is_zero():
        return
    prm = make_params(pr.p, pr.D * m)
    assert index(P.compose_power(m), prm) - 1 == m * (index(P, pr) - 1)


@given(soluble_cases(max_D=12))
def test_index_bounds_and_witt(case):
    P, pr, eh = case
    chi = index(P, pr)
    assert chi <= 1
    assert (chi == 1) == eh.is_one()
    assert chi == index_via_witt(P, pr)
    if is_p_typical(P, pr.p) and not eh.is_one():
        v = vT(eh)
        assert pr.p ** round(math.log(v, pr.p)) == v
        assert chi == index_p_typical(P, pr)


def test_product_law_on_pi_exponentials():
    cases = [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1)]
    for p, k1 in [c for c in cases]:
        for q, k2 in cases:
            if q != p or k1 == k2:
                continue
            D = p ** max(k1, k2)
            pr = make_params(p, D)
            P1 = pi_exponential(p, k1, D)
            P2 = pi_exponential(p, k2, D)
            # each at its own natural bound
            chi1 = index(pi_exponential(p, k1), make_params(p, p**k1))
            chi2 = index(pi_exponential(p, k2), make_params(p, p**k2))
            assert index(P1 + P2, pr) == min(chi1, chi2)


# comparison and reduction

def test_comparison_examples():
    c = comparison_iso(poly("pi(0)*T", 3, 1), make_params(3, 1))
    assert c.iso and c.chi == 0 and c.by_innocuous
    for p in PRIMES:
        c = comparison_iso(poly(f"pi(0)*T^{p}", p, p), make_params(p, p))
        assert not c.iso and c.chi == 0 and c.by_innocuous is None
    for p, m in [(5, 3), (7, 4), (3, 2)]:
        c = comparison_iso(poly(f"pi(0)*T^{m}", p, m), make_params(p, m))
        assert c.iso and c.by_innocuous
    with pytest.raises(ValueError):
        comparison_iso(poly("pi(0)*T", 2, 2), make_params(2, 2))


@given(soluble_cases(max_D=12))
def test_comparison_criteria_agree(case):
    P, pr, _ = case
    if P.is_zero() or P.degree != pr.D:
        return
    c = comparison_iso(P, pr)
    assert c.by_index == c.by_derivative
    if c.by_innocuous is not None:
        assert c.by_innocuous == c.by_index


def test_shift_V_examples():
    P = poly("pi(1)*T", 2, 4)
    assert shift_V(P, 2).is_zero()
    P = poly("pi(1)*T + pi(0)*T^2", 2, 2)
    assert str(shift_V(P, 2)) == "pi(0)*T"
    P = poly("pi(2)*T + pi(1)*T^2 + pi(0)*T^4", 2, 4)
    assert str(shift_V(shift_V(P, 2), 2)) == "pi(0)*T"
    with pytest.raises(ValueError):
        shift_V(poly("pi(0)*T^3", 2, 3), 2)


def test_reduce_example():
    pr = make_params(2, 2)
    P = poly("pi(0)*T^2", 2, 2)
    Pstar, steps = reduce_comparison(P, pr)
    assert str(Pstar) == "pi(0)*T"
    assert len(steps) == 1 and str(steps[0].F) == "-pi(0)*T + pi(0)*T^2"
    assert equivalent(P, Pstar, pr)
    P = poly("pi(0)*T", 2, 1)
    assert reduce_comparison(P, make_params(2, 1)) == (P, [])


def test_reduce_surfaces_nontrivial_factor():
    # a trivial equation whose top factor is not trivial: reported, not ignored
    with pytest.raises(ConsistencyError):
        reduce_comparison(poly("pi(0)*T + pi(0)*T^2", 2, 2), make_params(2, 2))


@given(soluble_cases(max_D=10))
def test_reduce_chain_preserves_invariants(case):
    P, pr, eh = case
    if P.is_zero():
        return
    P = P.with_bound(pr.D)
    Pstar, steps = reduce_comparison(P, pr)
    assert equivalent(P, Pstar, pr)
    assert index(Pstar, pr) == index(P, pr)
    for s in steps:
        assert s.result.degree < s.degree
    if not Pstar.is_zero():
        pd = pr.with_bound(Pstar.degree)
        assert comparison_iso(Pstar.with_bound(Pstar.degree), pd).iso


def test_analyze_report():
    rep = analyze(poly("pi(0)*T + pi(0)*T^3", 2, 3), make_params(2, 3))
    assert rep.soluble and not rep.trivial
    assert rep.ehat.coeffs == (1, 0, 1, 1)
    assert (rep.vT, rep.chi, rep.delta, rep.comparison_iso) == (2, -2, 2, True)
    assert rep.witt == {2: 1, 3: 1}
    assert rep.per_component[3].weight == 3 and rep.per_component[1].vT == 2
    rep = analyze(poly("T", 2, 1), make_params(2, 1))
    assert not rep.soluble and rep.witness.degree == 1
