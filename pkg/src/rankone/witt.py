"""Artin-Hasse series over F_p and the Witt-coordinate factorization of e^."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

from .errors import ConsistencyError, InsolubleError
from .invariants import ResidueSeries, is_soluble, prime_to_p_part, residue_invariant
from .numbertheory import Params, floor_log
from .series import InputPoly


@cache
def ah_rational(p: int, N: int) -> tuple[Fraction, ...]:
    """Coefficients 0..N of AH(T) = exp(sum_i T^(p^i) / p^i) over Q.

    From AH'/AH = sum_i T^(p^i - 1):  n A_n = sum_{p^i <= n} A_{n - p^i}.
    """
    A = [Fraction(1)]
    powers = []
    q = 1
    while q <= N:
        powers.append(q)
        q *= p
    for n in range(1, N + 1):
        A.append(sum((A[n - q] for q in powers if q <= n), Fraction(0)) / n)
    return tuple(A)


def reduce_mod_p(q: Fraction, p: int) -> int:
    if q.denominator % p == 0:
        raise ValueError(f"{q} is not {p}-integral")
    return q.numerator * pow(q.denominator, -1, p) % p


@cache
def ah_residues(p: int, N: int) -> tuple[int, ...]:
    return tuple(reduce_mod_p(a, p) for a in ah_rational(p, N))


def ah_series(u: int, n: int, params: Params) -> ResidueSeries:
    """AH(u T^n) mod (T^(D+1), p)."""
    p, D = params.p, params.D
    if not 1 <= n <= D:
        raise ValueError(f"n = {n} outside [1, {D}]")
    u %= p
    out = [0] * (D + 1)
    out[0] = 1
    if u:
        A = ah_residues(p, D // n)
        for j in range(1, D // n + 1):
            out[j * n] = A[j] * pow(u, j, p)
    return ResidueSeries(p, tuple(out))


@dataclass(frozen=True)
class WittFactorization:
    """e^ = prod_n AH(u_n T^n) mod T^(D+1), u_n in F_p (zero entries omitted)."""

    p: int
    D: int
    factors: dict[int, int] = field(hash=False)

    def reconstruct(self, params: Params) -> ResidueSeries:
        out = ResidueSeries.one(self.p, self.D)
        for n, u in sorted(self.factors.items()):
            out = out * ah_series(u, n, params)
        return out


def witt_factorize(ehat: ResidueSeries, params: Params) -> WittFactorization:
    """Peel off AH(u_n T^n) for n = 1..D; the coordinate u_n is the T^n coefficient left."""
    if ehat.D != params.D or ehat.p != params.p:
        raise ValueError("series does not match params")
    rest = ehat
    factors = {}
    for n in range(1, params.D + 1):
        u = rest.coeffs[n]
        if u:
            factors[n] = u
            rest = rest * ah_series(u, n, params).inverse()
    if not rest.is_one():
        raise ConsistencyError("Witt factorization left a nontrivial remainder")
    return WittFactorization(params.p, params.D, factors)


def index_from_factors(factors: dict[int, int], params: Params) -> int:
    """chi = 1 - max{ m p^floor(log_p(D/n)) : u_n != 0, n = m p^k, p not dividing m }."""
    p, D = params.p, params.D
    best = 0
    for n, u in factors.items():
        if u % p:
            m, _ = prime_to_p_part(n, p)
            best = max(best, m * p ** floor_log(p, D, n))
    return 1 - best


def index_via_witt(P: InputPoly, params: Params) -> int:
    if not is_soluble(P, params):
        raise InsolubleError("index of an insoluble equation")
    eh = residue_invariant(P, params)
    return index_from_factors(witt_factorize(eh, params).factors, params)


def vt_exponent_from_factors(factors: dict[int, int], p: int):
    """min{ i : u_(p^i) != 0 } for a p-typical factorization; math.inf if none."""
    exps = [prime_to_p_part(n, p)[1] for n, u in factors.items() if u % p]
    return min(exps, default=math.inf)
