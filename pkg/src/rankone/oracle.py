"""Independent exact cross-checks over Q(zeta).

Nothing here shares code with the precision-tracked ring: the minimal
polynomial is obtained by exact polynomial division, elements are integer
vectors over a common denominator, inverses come from an extended Euclid
over Q, and exp(P) is expanded directly as sum P^j / j!.  It is slow on
purpose and meant for desk-scale sizes only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, reduce

from .errors import ConsistencyError, PrecisionError
from .series import InputPoly, etilde, truncated_exp_direct, tilde_transform


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Division of polynomials over Q (low-to-high coefficient lists)."""
    num = [Fraction(c) for c in num]
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = Fraction(den[-1])
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] / lead
        q[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    r = num[:len(den) - 1]
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _binomial_poly(n: int) -> list[int]:
    """(1 + x)^n - 1."""
    out = [math.comb(n, k) for k in range(n + 1)]
    out[0] -= 1
    return out


@dataclass(frozen=True)
class ExactField:
    """Q(zeta) with zeta of order p^(level+1), in the basis of powers of x = zeta - 1."""

    p: int
    level: int

    @property
    def e(self) -> int:
        return self.p**self.level * (self.p - 1)

    @property
    def modulus(self) -> tuple[int, ...]:
        return _minpoly(self.p, self.level)

    def make(self, coeffs, den=1) -> ExactCyc:
        return ExactCyc.build(self, list(coeffs), den)

    def const(self, q) -> ExactCyc:
        q = Fraction(q)
        return self.make([q.numerator] + [0] * (self.e - 1), q.denominator)

    def zero(self) -> ExactCyc:
        return self.const(0)

    def one(self) -> ExactCyc:
        return self.const(1)

    def x(self) -> ExactCyc:
        if self.e == 1:
            return self.const(-self.modulus[0])
        return self.make([0, 1] + [0] * (self.e - 2))

    def pi(self, i: int) -> ExactCyc:
        """zeta^(p^(level - i)) - 1."""
        if not 0 <= i <= self.level:
            raise ValueError(f"pi({i}) undefined at level {self.level}")
        return _exact_pi(self, i)

    def pi_power(self, i: int, k: int) -> ExactCyc:
        base = self.pi(i)
        return base**k if k >= 0 else base.inverse() ** (-k)

    def valuation_of_pi(self, i: int) -> int:
        return self.p ** (self.level - i)


@cache
def _minpoly(p: int, level: int) -> tuple[int, ...]:
    """((1+x)^(p^(L+1)) - 1) / ((1+x)^(p^L) - 1), by long division."""
    q, r = _poly_divmod(_binomial_poly(p ** (level + 1)), _binomial_poly(p**level))
    if r:
        raise ConsistencyError("cyclotomic division left a remainder")
    if any(c.denominator != 1 for c in q):
        raise ConsistencyError("cyclotomic quotient is not integral")
    return tuple(int(c) for c in q)


@cache
def _exact_pi(F: ExactField, i: int) -> ExactCyc:
    # (1 + x)^(p^(L-i)) - 1, reduced; x^k built by repeated multiplication
    n = F.p ** (F.level - i)
    out = F.zero()
    xk = F.one()
    x = F.x()
    for k in range(1, n + 1):
        xk = xk * x
        out = out + xk * F.const(math.comb(n, k))
    return out


@dataclass(frozen=True)
class ExactCyc:
    """sum_j num[j] x^j / den with gcd(num, den) = 1 and den > 0."""

    field: ExactField
    num: tuple[int, ...]
    den: int

    @classmethod
    def build(cls, F: ExactField, coeffs: list[int], den: int) -> ExactCyc:
        e = F.e
        coeffs = _reduce_mod(coeffs, F.modulus, e)
        if den < 0:
            coeffs = [-c for c in coeffs]
            den = -den
        g = reduce(math.gcd, coeffs, den)
        if g > 1:
            coeffs = [c // g for c in coeffs]
            den //= g
        return cls(F, tuple(coeffs), den)

    def is_zero(self) -> bool:
        return not any(self.num)

    def coefficients(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def __add__(self, other: ExactCyc) -> ExactCyc:
        if isinstance(other, (int, Fraction)):
            other = self.field.const(other)
        d = self.den * other.den // math.gcd(self.den, other.den)
        a, b = d // self.den, d // other.den
        return ExactCyc.build(self.field, [x * a + y * b for x, y in zip(self.num, other.num)], d)

    def __neg__(self) -> ExactCyc:
        return ExactCyc(self.field, tuple(-c for c in self.num), self.den)

    def __sub__(self, other: ExactCyc) -> ExactCyc:
        if isinstance(other, (int, Fraction)):
            other = self.field.const(other)
        return self + (-other)

    def __mul__(self, other) -> ExactCyc:
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return ExactCyc.build(self.field, [c * q.numerator for c in self.num],
                                  self.den * q.denominator)
        e = self.field.e
        prod = [0] * (2 * e - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(other.num):
                    if b:
                        prod[i + j] += a * b
        return ExactCyc.build(self.field, prod, self.den * other.den)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ExactCyc:
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> ExactCyc:
        """Extended Euclid of the numerator against the minimal polynomial over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        F = self.field
        a = list(F.modulus)
        b = _trim([Fraction(c) for c in self.num])
        s0, s1 = [Fraction(0)], [Fraction(1)]     # coefficients of b
        while len(b) > 1:
            q, r = _poly_divmod(a, b)
            a, b = b, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            if not b:
                raise ConsistencyError("minimal polynomial is reducible")
        # now b is a nonzero constant and s1 * num == b (mod minpoly)
        inv = [c / b[0] for c in s1]
        _, inv = _poly_divmod(inv + [Fraction(0)] * F.e, list(F.modulus))
        inv = inv + [Fraction(0)] * (F.e - len(inv))
        den = reduce(math.lcm, (c.denominator for c in inv), 1)
        nums = [int(c * den) * self.den for c in inv]
        return ExactCyc.build(F, nums, den)

    def __truediv__(self, other) -> ExactCyc:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def valuation(self):
        """min_j (e v_p(num_j) + j) - e v_p(den); math.inf for zero."""
        if self.is_zero():
            return math.inf
        p, e = self.field.p, self.field.e
        v = min(e * _vp(c, p) + j for j, c in enumerate(self.num) if c)
        return v - e * _vp(self.den, p)

    def residue(self) -> int:
        """Image in F_p of an integral element."""
        if self.valuation() < 0:
            raise ValueError("residue of a non-integral element")
        p = self.field.p
        return self.num[0] * pow(self.den, -1, p) % p if self.num[0] % p else 0


def _trim(c: list) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out) or [Fraction(0)]


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)]) or [Fraction(0)]


def _reduce_mod(coeffs: list[int], E: tuple[int, ...], e: int) -> list[int]:
    """Reduce an integer polynomial modulo the monic E of degree e."""
    c = list(coeffs) + [0] * max(0, e - len(coeffs))
    for k in range(len(c) - 1, e - 1, -1):
        t = c[k]
        if t:
            for j in range(e):
                c[k - e + j] -= t * E[j]
    return c[:e]


# exact polynomials and exponentials

ExactPoly = dict  # degree -> ExactCyc


def exact_coeffs(P: InputPoly, F: ExactField) -> ExactPoly:
    return {i: c.evaluate(F.const, F.pi_power) for i, c in P.terms}


def exp_series_exact(P: ExactPoly, N: int, F: ExactField) -> list[ExactCyc]:
    """Coefficients 0..N of exp(P(T)) = sum_j P^j / j!, P(0) = 0."""
    if 0 in P and not P[0].is_zero():
        raise ValueError("P(0) must vanish")
    zero = F.zero()
    base = [P.get(i, zero) for i in range(N + 1)]
    out = [F.one()] + [zero] * N
    power = [F.one()] + [zero] * N
    lowest = min((i for i in P if not P[i].is_zero()), default=None)
    if lowest is None:
        return out
    for j in range(1, N // lowest + 1):
        nxt = [zero] * (N + 1)
        for a, x in enumerate(power):
            if x.is_zero():
                continue
            for b in range(lowest, N + 1 - a):
                if not base[b].is_zero():
                    nxt[a + b] = nxt[a + b] + x * base[b]
        power = nxt
        inv = Fraction(1, math.factorial(j))
        out = [o + t * inv for o, t in zip(out, power)]
    return out


def _d_table(p: int, D: int) -> list[int]:
    """floor(log_p(D/i)) for i = 1..D, counted up from scratch."""
    out = []
    for i in range(1, D + 1):
        k = 0
        while i * p ** (k + 1) <= D:
            k += 1
        out.append(k)
    return out


def exact_tilde(P: InputPoly, p: int, D: int, F: ExactField) -> ExactPoly:
    dt = _d_table(p, D)
    return {i: c / F.pi(dt[i - 1]) for i, c in exact_coeffs(P, F).items()}


@dataclass(frozen=True)
class ProbeResult:
    integral: bool
    horizon: int
    first_failure: int | None = None       # lowest degree with negative valuation
    failure_valuation: int | None = None
    tail_divisible: bool | None = None     # last D coefficients divisible by pi(0)


def probe_integrality(P: InputPoly, p: int, N: int, level: int | None = None) -> ProbeResult:
    """Check that exp(P(T)) has integral coefficients up to T^N.

    A finite probe of an infinite condition: it can refute solubility but not
    prove it.  ``tail_divisible`` reports whether the top max(deg P, 1)
    coefficients are divisible by pi(0), the finite shadow of triviality.
    """
    if level is None:
        level = max((c.max_pi_index() for _, c in P.terms), default=0)
        level = max(level, 0)
    F = ExactField(p, level)
    coeffs = exp_series_exact(exact_coeffs(P, F), N, F)
    for n, c in enumerate(coeffs):
        v = c.valuation()
        if v < 0:
            return ProbeResult(False, N, n, v)
    span = max(P.degree, 1)
    tail = coeffs[max(1, N - span + 1):]
    vpi0 = F.valuation_of_pi(0)
    return ProbeResult(True, N, tail_divisible=all(c.valuation() >= vpi0 for c in tail))


@dataclass(frozen=True)
class CrossCheck:
    degree_checked: int
    soluble_main: bool
    soluble_exact: bool
    probe: ProbeResult
    direct_path: str     # 'match' or 'skipped: <reason>'


def crosscheck_pipeline(P: InputPoly, params, horizon: int | None = None) -> CrossCheck:
    """Recompute e~ exactly and compare with the main pipeline; raise on mismatch."""
    from .invariants import is_soluble

    p, D = params.p, params.D
    F = ExactField(p, params.level)
    exact = exp_series_exact(exact_tilde(P, p, D, F), D, F)
    main = etilde(P, params).series.coeffs
    for i, (x, y) in enumerate(zip(exact, main)):
        if not _agrees(x, y, F):
            raise ConsistencyError(f"main and exact e~ differ at degree {i}")
    sol_main = bool(is_soluble(P, params))
    sol_exact = all(c.valuation() >= 0 for c in exact)
    if sol_main != sol_exact:
        raise ConsistencyError(f"is_soluble={sol_main} but exact e~ integrality={sol_exact}")
    N = 3 * D if horizon is None else horizon
    probe = probe_integrality(P, p, N, params.level)
    if sol_main and not probe.integral:
        raise ConsistencyError(
            f"soluble, yet exp(P) has a non-integral coefficient at degree {probe.first_failure}")
    direct = "skipped: zero polynomial"
    Pt = tilde_transform(P, params)
    if not Pt.is_zero():
        try:
            d = truncated_exp_direct(Pt, params).coeffs
        except PrecisionError as exc:
            direct = f"skipped: {exc}"
        else:
            for i, (x, y) in enumerate(zip(d, main)):
                prec = min(x.value_prec, y.value_prec)
                if not (x - y).is_zero() and (x - y).valuation() < prec:
                    raise ConsistencyError(f"prepared and direct paths differ at degree {i}")
            direct = "match"
    return CrossCheck(D, sol_main, sol_exact, probe, direct)


def lift_main(y, F: ExactField) -> ExactCyc:
    """Embed a main-path element num * x^(-shift) into the exact field."""
    val = F.make(list(y.num.coeffs))
    if y.shift:
        val = val * F.x().inverse() ** y.shift
    return val


def _agrees(x: ExactCyc, y, F: ExactField) -> bool:
    diff = x - lift_main(y, F)
    return diff.is_zero() or diff.valuation() >= y.value_prec
