"""Truncated power series over the cyclotomic ring and the tilde exponential.

The pipeline from P to the truncated series e~(T) = exp(P~(T)) mod T^(D+1):

1. ``tilde_transform``: a_i -> a_i / pi(d_i)
2. ``prepare``: substitute T -> pi^k T with the least k making P~ integral
3. ``truncated_exp``: the factorial-scaled recurrence, entirely in the ring
4. ``to_plain`` and ``unscale``: divide by i!, substitute the variable back
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import PrecisionError
from .expr import Coeff, format_terms
from .numbertheory import (
    ZERO,
    CycElem,
    CycInt,
    Params,
    _pi_uniformizer,
    from_fraction,
    from_int,
)


@dataclass(frozen=True)
class InputPoly:
    """P(T) = sum a_i T^i with exact symbolic coefficients and P(0) = 0."""

    terms: tuple[tuple[int, Coeff], ...]
    degree_bound: int

    @classmethod
    def from_terms(cls, terms: dict[int, Coeff], degree_bound: int | None = None) -> InputPoly:
        terms = {i: c for i, c in terms.items() if not c.is_zero()}
        if 0 in terms:
            raise ValueError("constant term present")
        if any(i < 0 for i in terms):
            raise ValueError("negative degree")
        deg = max(terms, default=0)
        if degree_bound is None:
            degree_bound = max(deg, 1)
        if deg > degree_bound:
            raise ValueError(f"degree {deg} exceeds bound {degree_bound}")
        return cls(tuple(sorted(terms.items())), degree_bound)

    @classmethod
    def monomial(cls, c, i: int, degree_bound: int | None = None) -> InputPoly:
        if not isinstance(c, Coeff):
            c = Coeff.const(c)
        return cls.from_terms({i: c}, degree_bound)

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def as_dict(self) -> dict[int, Coeff]:
        return dict(self.terms)

    def coeff(self, i: int) -> Coeff:
        return self.as_dict().get(i, Coeff())

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[int]:
        return [i for i, _ in self.terms]

    def with_bound(self, D: int) -> InputPoly:
        return InputPoly.from_terms(self.as_dict(), D)

    def __add__(self, other: InputPoly) -> InputPoly:
        d = self.as_dict()
        for i, c in other.terms:
            d[i] = d.get(i, Coeff()) + c
        return InputPoly.from_terms(d, max(self.degree_bound, other.degree_bound))

    def __neg__(self) -> InputPoly:
        return InputPoly(tuple((i, -c) for i, c in self.terms), self.degree_bound)

    def __sub__(self, other: InputPoly) -> InputPoly:
        return self + (-other)

    def scale_var(self, u) -> InputPoly:
        """P(u T)."""
        if not isinstance(u, Coeff):
            u = Coeff.const(u)
        return InputPoly.from_terms({i: c * u**i for i, c in self.terms}, self.degree_bound)

    def compose_power(self, m: int) -> InputPoly:
        """P(T^m), with degree bound m D."""
        return InputPoly.from_terms({i * m: c for i, c in self.terms}, self.degree_bound * m)

    def coeffs(self, params: Params) -> dict[int, CycElem]:
        """Coefficients evaluated in the ring of ``params``."""
        return _evaluate(self, params)

    def __str__(self):
        return format_terms(self.as_dict())


@lru_cache(maxsize=None)
def _pi_power(ring, i, k) -> CycElem:
    return CycElem(_pi_uniformizer(ring, i), 0) ** k


def evaluate_coeff(c: Coeff, params: Params) -> CycElem:
    ring = params.ring
    if c.max_pi_index() > params.level:
        raise ValueError(f"pi({c.max_pi_index()}) undefined at level {params.level}")
    return c.evaluate(lambda q: from_fraction(ring, q),
                      lambda i, k: _pi_power(ring, i, k))


@lru_cache(maxsize=4096)
def _evaluate(P: InputPoly, params: Params) -> dict[int, CycElem]:
    return {i: evaluate_coeff(c, params) for i, c in P.terms}


@dataclass(frozen=True)
class TruncSeries:
    """Coefficients 0..D; ``basis`` is 'plain' (B_i) or 'factorial' (b_i = i! B_i)."""

    coeffs: tuple[CycElem, ...]
    basis: str = "plain"
    mults: int = 0

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def equals(self, other: TruncSeries) -> bool:
        return all(a.equals(b) for a, b in zip(self.coeffs, other.coeffs))


def tilde_transform(P: InputPoly, params: Params) -> InputPoly:
    """P~ with coefficients a_i / pi(d_i)."""
    if P.degree > params.D:
        raise ValueError(f"degree {P.degree} exceeds bound {params.D}")
    return InputPoly.from_terms(
        {i: c / Coeff.pi(params.d_i(i)) for i, c in P.terms}, params.D)


def prepare(Ptilde: InputPoly, params: Params, clamp: bool = False) -> tuple[InputPoly, int]:
    """Return (P~(pi^k T), k) for the least k making every coefficient integral.

    k = max_i ceil(-v(a_i) / i) in units of the ring uniformizer; it may be
    negative (scaling up) unless ``clamp`` is set.
    """
    if Ptilde.is_zero():
        raise ValueError("cannot prepare the zero polynomial")
    vals = {}
    for i, a in Ptilde.coeffs(params).items():
        v = a.valuation()
        if v is not ZERO:
            vals[i] = v
    if not vals:
        raise PrecisionError("every coefficient vanishes at working precision")
    k = max(-(v // i) for i, v in vals.items())   # ceil(-v/i)
    if clamp:
        k = max(k, 0)
    L = params.level
    scaled = InputPoly.from_terms(
        {i: c * Coeff.pi(L, k * i) for i, c in Ptilde.terms}, Ptilde.degree_bound)
    for i, a in scaled.coeffs(params).items():
        if not a.is_integral():
            raise PrecisionError(f"prepared coefficient {i} not integral at working precision")
    return scaled, k


def derivative(P: InputPoly, params: Params) -> list[CycElem]:
    """Coefficients c_0..c_{D-1} of P'(T)."""
    cs = P.coeffs(params)
    zero = from_int(params.ring, 0)
    return [cs[k + 1] * (k + 1) if k + 1 in cs else zero for k in range(params.D)]


def truncated_exp(ltilde: Sequence[CycElem], params: Params) -> TruncSeries:
    """Factorial-scaled solution of y' = L~ y modulo T^(D+1).

    With e~ = sum b_i T^i / i!, b_0 = 1 and
    b_{i+1} = sum_{k=0}^{min(i, D-1)} c_k * i!/(i-k)! * b_{i-k}.
    Every product stays in the ring; the count of ring products is recorded
    in ``mults`` and equals D (D + 1) / 2.
    """
    D = params.D
    cs: list[CycInt] = []
    for c in ltilde:
        if c.shift:
            if not c.is_integral():
                raise ValueError("truncated_exp needs integral coefficients")
        cs.append(c.to_int())
    ring = params.ring
    zero = ring._make((0,) * ring.e, ring.cap)
    cs += [zero] * (D - len(cs))
    b = [ring.one]
    mults = 0
    for i in range(D):
        s = zero
        fall = 1
        for k in range(min(i, D - 1) + 1):
            s = s + (cs[k] * b[i - k]).scale(fall)
            mults += 1
            fall *= i - k
        b.append(s)
    return TruncSeries(tuple(CycElem(x, 0) for x in b), "factorial", mults)


def to_plain(series: TruncSeries) -> TruncSeries:
    """b_i -> B_i = b_i / i!  (a p-adic denominator becomes a shift)."""
    if series.basis == "plain":
        return series
    out = tuple(b * from_fraction(b.ring, Fraction(1, math.factorial(i)))
                for i, b in enumerate(series.coeffs))
    return TruncSeries(out, "plain", series.mults)


def unscale(series: TruncSeries, k: int) -> TruncSeries:
    """Undo T -> pi^k T: coefficient i is multiplied by pi^(-i k)."""
    if k == 0:
        return series
    if series.basis != "plain":
        raise ValueError("unscale expects plain coefficients")
    out = tuple(c.times_pi_power(-i * k) for i, c in enumerate(series.coeffs))
    return TruncSeries(out, "plain", series.mults)


def series_mul(a: Sequence[CycElem], b: Sequence[CycElem], D: int) -> list[CycElem]:
    ring = a[0].ring
    out = [from_int(ring, 0)] * (D + 1)
    for i, x in enumerate(a[:D + 1]):
        if x.is_zero() and x.value_prec >= 0:
            continue
        for j in range(D + 1 - i):
            out[i + j] = out[i + j] + x * b[j]
    return out


def truncated_exp_direct(Ptilde: InputPoly, params: Params) -> TruncSeries:
    """1 + P~ + P~^2/2! + ... + P~^D/D! mod T^(D+1), with no preparation."""
    D = params.D
    ring = params.ring
    zero, one = from_int(ring, 0), from_int(ring, 1)
    cs = Ptilde.coeffs(params)
    base = [cs.get(i, zero) for i in range(D + 1)]
    result = [one] + [zero] * D
    power = [one] + [zero] * D
    for j in range(1, D + 1):
        power = series_mul(power, base, D)
        inv = from_fraction(ring, Fraction(1, math.factorial(j)))
        result = [r + t * inv for r, t in zip(result, power)]
    for i, c in enumerate(result):
        if c.value_prec < 0:
            raise PrecisionError(f"direct exponential lost all precision at degree {i}")
    return TruncSeries(tuple(result), "plain")


@dataclass(frozen=True)
class TildeRun:
    """Result of the full e~ pipeline."""

    series: TruncSeries      # plain coefficients of e~
    k: int                   # preparation exponent
    mults: int               # ring products in the recurrence
    prepared: InputPoly | None


@lru_cache(maxsize=4096)
def etilde(P: InputPoly, params: Params) -> TildeRun:
    """e~(T) = exp(P~(T)) mod T^(D+1) via preparation and the recurrence."""
    ring = params.ring
    Pt = tilde_transform(P, params)
    if Pt.is_zero():
        one, zero = from_int(ring, 1), from_int(ring, 0)
        return TildeRun(TruncSeries((one,) + (zero,) * params.D), 0, 0, None)
    prepared, k = prepare(Pt, params)
    b = truncated_exp(derivative(prepared, params), params)
    plain = unscale(to_plain(b), k)
    return TildeRun(plain, k, b.mults, prepared)

