"""Arithmetic in the integers of Q_p(zeta), zeta of order p^(L+1), modulo p^A.

Elements are stored in the basis 1, pi, ..., pi^(e-1) of the uniformizer
pi = zeta - 1, whose minimal polynomial E(x) = Phi_{p^(L+1)}(1 + x) is
Eisenstein of degree e = p^L (p - 1).  In that basis the valuation is read off
the coefficients::

    v(sum c_j pi^j) = min_j (e * v_p(c_j) + j)

Every CycInt carries its absolute pi-adic precision ``prec``: the element is
known modulo pi^prec.  Precision is propagated through the ring operations
and never exceeds ``A * e`` (storage is modulo p^A).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

from .errors import ContextError, PrecisionError


class ZeroAtPrecision:
    """Valuation marker for an element that vanishes at its working precision.

    It is deliberately not ordered against integers: an integrality test that
    silently treated it as "large" would hide a precision shortfall.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"

    def _refuse(self, other):
        raise TypeError("valuation of a zero-at-precision element is not a number")

    __lt__ = __le__ = __gt__ = __ge__ = _refuse


ZERO = ZeroAtPrecision()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, math.isqrt(n) + 1):
        if n % q == 0:
            return False
    return True


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("v_p(0) is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_fraction(q: Fraction, p: int) -> int:
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


def floor_log(p: int, num: int, den: int = 1) -> int:
    """floor(log_p(num / den)) for num >= den >= 1, by integer comparison."""
    k = 0
    while p ** (k + 1) * den <= num:
        k += 1
    return k


@dataclass(frozen=True)
class Params:
    """Arithmetic context for an equation with degree bound D.

    ``level`` is the cyclotomic level of the ring (ring uniformizer pi_level,
    ramification e = p^level (p - 1)); it defaults to d = floor(log_p D) and
    may be larger so that several degree bounds can share one ring.
    """

    p: int
    D: int
    d: int
    dtable: tuple[int, ...]
    level: int
    e: int
    A: int
    margin: int

    def d_i(self, i: int) -> int:
        return self.dtable[i - 1]

    @property
    def ring(self) -> CycRing:
        return cyc_ring(self.p, self.level, self.A)

    def with_bound(self, D: int) -> Params:
        """Same ring, different degree bound (D must not need a higher level)."""
        d = floor_log(self.p, D)
        if d > self.level:
            raise ContextError(f"bound {D} needs level {d} > {self.level}")
        return Params(self.p, D, d, _dtable(self.p, D), self.level, self.e, self.A, self.margin)


def _dtable(p: int, D: int) -> tuple[int, ...]:
    return tuple(floor_log(p, D, i) for i in range(1, D + 1))


def required_precision(p: int, D: int) -> int:
    return -(-D * (p + 1) // (p - 1))


def make_params(p: int, D: int, margin: int = 8, level: int | None = None,
                A: int | None = None) -> Params:
    """Build the context for prime p and degree bound D.

    A defaults to ceil(D (p+1)/(p-1)) + margin p-adic digits.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    if D < 1:
        raise ValueError(f"degree bound must be >= 1, got {D}")
    if margin < 0:
        raise ValueError("margin must be >= 0")
    d = floor_log(p, D)
    if level is None:
        level = d
    elif level < d:
        raise ValueError(f"level {level} below floor(log_p D) = {d}")
    if A is None:
        A = required_precision(p, D) + margin
    e = p**level * (p - 1)
    return Params(p, D, d, _dtable(p, D), level, e, A, margin)


def eisenstein_poly(p: int, d: int) -> list[int]:
    """Coefficients (low to high) of Phi_{p^(d+1)}(1 + x).

    Phi_{p^(d+1)}(y) = sum_{j<p} y^(j p^d), so the x^k coefficient is
    sum_j binom(j p^d, k).
    """
    q = p**d
    e = q * (p - 1)
    return [sum(math.comb(j * q, k) for j in range(p)) for k in range(e + 1)]


def _pack(cs, nb):
    return int.from_bytes(b"".join(c.to_bytes(nb, "little") for c in cs), "little")


def _unpack(n, nb, count):
    bs = n.to_bytes(nb * count, "little")
    return [int.from_bytes(bs[i * nb:(i + 1) * nb], "little") for i in range(count)]


class CycRing:
    """Z_p[zeta]/(p^A) in the pi-power basis.  Obtain instances via cyc_ring."""

    def __init__(self, p: int, level: int, A: int):
        self.p = p
        self.level = level
        self.A = A
        self.E = eisenstein_poly(p, level)
        self.e = e = len(self.E) - 1
        self.cap = A * e
        self.modulus = p**A
        self.ppow = [p**k for k in range(A + 1)]
        m = self.modulus
        self._E_mod = [c % m for c in self.E]
        # 1/rev(E) mod x^(e-1), used to get the quotient in mul
        rev = self._E_mod[::-1]
        inv = [1] + [0] * (e - 2) if e > 1 else []
        for k in range(1, e - 1):
            inv[k] = -sum(rev[j] * inv[k - j] for j in range(1, k + 1)) % m
        self._Einvrev = inv
        width = 2 * m.bit_length() + e.bit_length() + 2
        self._nb = width // 8 + 1
        self._pi_pows = {}
        self._winv = None

    def __repr__(self):
        return f"CycRing(p={self.p}, level={self.level}, A={self.A})"

    def __reduce__(self):
        return (cyc_ring, (self.p, self.level, self.A))

    # construction

    def _make(self, coeffs, prec) -> CycInt:
        prec = min(prec, self.cap)
        if prec <= 0:
            return CycInt(self, (0,) * self.e, max(prec, 0))
        e, ppow = self.e, self.ppow
        out = []
        for j, c in enumerate(coeffs):
            n = -(-(prec - j) // e)
            out.append(c % ppow[n] if n > 0 else 0)
        return CycInt(self, tuple(out), prec)

    def const(self, n: int) -> CycInt:
        return self._make((n,) + (0,) * (self.e - 1), self.cap)

    @property
    def zero(self) -> CycInt:
        return self.const(0)

    @property
    def one(self) -> CycInt:
        return self.const(1)

    @property
    def pi(self) -> CycInt:
        """The ring uniformizer pi_level = zeta - 1."""
        if self.e == 1:
            # Q_2 with E = x + 2: pi = -2
            return self.const(-self.E[0])
        return self._make((0, 1) + (0,) * (self.e - 2), self.cap)

    def pi_power(self, m: int) -> CycInt:
        x = self._pi_pows.get(m)
        if x is None:
            if m == 0:
                x = self.one
            elif m == 1:
                x = self.pi
            else:
                h = self.pi_power(m // 2)
                x = h * h
                if m % 2:
                    x = x * self.pi
            self._pi_pows[m] = x
        return x

    def w_inverse(self) -> CycInt:
        """p / pi^e, a unit."""
        if self._winv is None:
            self._winv = unit_inverse(self.w())
        return self._winv

    def w(self) -> CycInt:
        """pi^e / p = -(1 + sum_{0<j<e} (E_j/p) pi^j), a unit with integer coordinates."""
        p = self.p
        return self._make([-1] + [-(c // p) for c in self.E[1:self.e]], self.cap)

    # raw coefficient arithmetic

    def _mul_raw(self, a, b):
        e, nb, m = self.e, self._nb, self.modulus
        if e == 1:
            return [a[0] * b[0] % m]
        c = _unpack(_pack(a, nb) * _pack(b, nb), nb, 2 * e - 1)
        high = [x % m for x in reversed(c[e:])]
        qrev = _unpack(_pack(high, nb) * _pack(self._Einvrev, nb), nb, 2 * e - 3 if e > 2 else 1)
        q = [x % m for x in reversed(qrev[:e - 1])]
        qE = _unpack(_pack(q, nb) * _pack(self._E_mod, nb), nb, 2 * e)
        return [(c[j] - qE[j]) % m for j in range(e)]


@cache
def cyc_ring(p: int, level: int, A: int) -> CycRing:
    return CycRing(p, level, A)


@dataclass(frozen=True, slots=True)
class CycInt:
    """An integer of Q_p(zeta) known modulo pi^prec."""

    ring: CycRing
    coeffs: tuple[int, ...]
    prec: int
    _val: object = field(default=None, compare=False, repr=False)

    def _check(self, other):
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.ring is not self.ring:
            raise ContextError(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        m = self.ring.modulus
        return self.ring._make([(a + b) % m for a, b in zip(self.coeffs, other.coeffs)],
                               min(self.prec, other.prec))

    def __neg__(self):
        return self.ring._make([-a for a in self.coeffs], self.prec)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        vx, vy = self.valuation_bound(), other.valuation_bound()
        prec = min(self.prec + vy, other.prec + vx)
        return self.ring._make(self.ring._mul_raw(self.coeffs, other.coeffs), prec)

    __rmul__ = __mul__

    def scale(self, n: int) -> CycInt:
        """Multiply by an ordinary integer."""
        if n == 0:
            return self.ring._make((0,) * self.ring.e, self.ring.cap)
        gain = self.ring.e * vp_int(n, self.ring.p)
        return self.ring._make([a * n for a in self.coeffs], self.prec + gain)

    def __pow__(self, n: int) -> CycInt:
        if n < 0:
            raise ValueError("negative power of a CycInt; use CycElem")
        out, base = self.ring.one, self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def valuation(self):
        """pi-adic valuation, or ZERO when the element vanishes at its precision."""
        v = self._val
        if v is None:
            v = ZERO
            e, p = self.ring.e, self.ring.p
            for j, c in enumerate(self.coeffs):
                if c:
                    cand = e * vp_int(c, p) + j
                    if v is ZERO or cand < v:
                        v = cand
            object.__setattr__(self, "_val", v)
        return v

    def valuation_bound(self) -> int:
        """Certified lower bound on the valuation."""
        v = self.valuation()
        return self.prec if v is ZERO else v

    def is_zero(self) -> bool:
        return self.valuation() is ZERO

    def residue(self) -> int:
        """Image in the residue field F_p."""
        if self.prec < 1:
            raise PrecisionError("no residue digit available")
        return self.coeffs[0] % self.ring.p

    def with_prec(self, prec: int) -> CycInt:
        return self.ring._make(self.coeffs, min(prec, self.prec))

    def equals(self, other: CycInt) -> bool:
        """Equality at the common precision."""
        return (self - other).is_zero()

    def __repr__(self):
        return f"CycInt({list(self.coeffs)}, prec={self.prec})"


def add(x: CycInt, y: CycInt) -> CycInt:
    return x + y


def mul(x: CycInt, y: CycInt) -> CycInt:
    return x * y


def neg(x: CycInt) -> CycInt:
    return -x


def valuation(x):
    return x.valuation()


def pi_uniformizer(i: int, params: Params) -> CycInt:
    """pi_i = zeta^(p^(L-i)) - 1 = (1 + pi_L)^(p^(L-i)) - 1, valuation p^(L-i)."""
    L = params.level
    if not 0 <= i <= L:
        raise ValueError(f"pi({i}) undefined at level {L}")
    ring = params.ring
    return _pi_uniformizer(ring, i)


@cache
def _pi_uniformizer(ring: CycRing, i: int) -> CycInt:
    y = ring.one + ring.pi
    for _ in range(ring.level - i):
        y = y ** ring.p
    return y - ring.one


def unit_inverse(x: CycInt) -> CycInt:
    """Inverse of a unit by Newton iteration y <- y (2 - x y).

    Each step doubles the pi-adic accuracy of the approximation; the result
    carries the precision of x.
    """
    ring = x.ring
    if x.prec < 1 or x.coeffs[0] % ring.p == 0:
        raise ValueError("unit_inverse of a non-unit")
    full = CycInt(ring, x.coeffs, ring.cap)
    y = ring.const(pow(x.coeffs[0], -1, ring.p))
    two = ring.const(2)
    good = 1
    while good < ring.cap:
        y = y * (two - full * y)
        good *= 2
    return y.with_prec(x.prec)


def div_by_pi(x: CycInt, m: int, floor: int | None = None) -> CycInt:
    """Exact quotient x / pi^m, valid modulo pi^(prec - m).

    Whole multiples of e are removed by dividing the coordinates by p and
    multiplying by the unit p/pi^e; the remaining steps use
    p/pi = -(pi^(e-1) + E_{e-1} pi^(e-2) + ... + E_1).
    """
    if m < 0:
        raise ValueError("negative division exponent")
    if m == 0:
        return x
    ring = x.ring
    v = x.valuation()
    newprec = x.prec - m
    if v is ZERO:
        if newprec < 0:
            raise PrecisionError("division by pi exhausts the precision")
        return ring._make((0,) * ring.e, newprec)
    if v < m:
        raise ValueError(f"valuation {v} < {m}")
    if floor is not None and newprec < floor:
        raise PrecisionError(f"precision {newprec} below floor {floor}")
    e, p = ring.e, ring.p
    q, r = divmod(m, e)
    cs = list(x.coeffs)
    if q:
        pq = p**q
        cs = [c // pq for c in cs]
        y = ring._make(cs, ring.cap) * (ring.w_inverse() ** q)
        cs = list(y.coeffs)
    E = ring.E
    rho = [-E[j] for j in range(1, e)] + [-1]   # p/pi in the basis
    mod = ring.modulus
    for _ in range(r):
        c0 = cs[0]
        t = c0 // p
        cs = [(cs[j + 1] + t * rho[j]) % mod for j in range(e - 1)] + [(t * rho[e - 1]) % mod]
    return ring._make(cs, newprec)


@dataclass(frozen=True, slots=True)
class CycElem:
    """A field element num * pi^(-shift), shift >= 0.

    Use ``elem`` to build values; it keeps the form canonical (shift is
    cleared as far as the valuation of num allows).  The value is known
    modulo pi^(num.prec - shift).
    """

    num: CycInt
    shift: int = 0

    @property
    def ring(self):
        return self.num.ring

    @property
    def value_prec(self) -> int:
        return self.num.prec - self.shift

    def valuation(self):
        v = self.num.valuation()
        return ZERO if v is ZERO else v - self.shift

    def valuation_bound(self) -> int:
        return self.num.valuation_bound() - self.shift

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        """True/False when certified; raises PrecisionError otherwise."""
        v = self.valuation()
        if v is ZERO:
            if self.value_prec >= 0:
                return True
            raise PrecisionError("integrality undecided at working precision")
        return v >= 0

    def to_int(self) -> CycInt:
        if self.shift:
            if self.num.is_zero() and self.value_prec >= 0:
                return self.num.ring._make((0,) * self.ring.e, self.value_prec)
            raise ValueError("element is not integral")
        return self.num

    def residue(self) -> int:
        if self.shift:
            v = self.valuation()
            if v is not ZERO and v < 0:
                raise ValueError("element is not integral")
            if self.value_prec < 1:
                raise PrecisionError("no residue digit available")
            return 0
        return self.num.residue()

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = from_fraction(self.ring, other)
        if not isinstance(other, CycElem):
            return NotImplemented
        s = max(self.shift, other.shift)
        a = self.num if self.shift == s else self.num * self.ring.pi_power(s - self.shift)
        b = other.num if other.shift == s else other.num * self.ring.pi_power(s - other.shift)
        return elem(a + b, s)

    __radd__ = __add__

    def __neg__(self):
        return CycElem(-self.num, self.shift)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return elem(self.num.scale(other), self.shift)
        if isinstance(other, Fraction):
            other = from_fraction(self.ring, other)
        if not isinstance(other, CycElem):
            return NotImplemented
        return elem(self.num * other.num, self.shift + other.shift)

    __rmul__ = __mul__

    def inverse(self) -> CycElem:
        v = self.num.valuation()
        if v is ZERO:
            raise PrecisionError("inverse of an element that is zero at working precision")
        u = unit_inverse(div_by_pi(self.num, v))
        k = self.shift - v
        if k >= 0:
            return elem(u * self.num.ring.pi_power(k), 0)
        return elem(u, -k)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = from_fraction(self.ring, other)
        return self * other.inverse()

    def __pow__(self, n: int) -> CycElem:
        if n < 0:
            return self.inverse() ** (-n)
        out = from_int(self.ring, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def times_pi_power(self, m: int) -> CycElem:
        """Multiply by pi^m for any integer m (a shift when m < 0)."""
        if m >= 0:
            return elem(self.num * self.ring.pi_power(m), self.shift)
        return elem(self.num, self.shift - m)

    def equals(self, other: CycElem) -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        if self.shift:
            return f"CycElem({list(self.num.coeffs)} / pi^{self.shift}, prec={self.num.prec})"
        return f"CycElem({list(self.num.coeffs)}, prec={self.num.prec})"


def elem(num: CycInt, shift: int = 0) -> CycElem:
    """Canonical CycElem for num * pi^(-shift)."""
    if shift < 0:
        return CycElem(num * num.ring.pi_power(-shift), 0)
    if shift == 0:
        return CycElem(num, 0)
    v = num.valuation()
    if v is ZERO:
        if num.prec >= shift:
            return CycElem(num.ring._make((0,) * num.ring.e, num.prec - shift), 0)
        return CycElem(num, shift)
    t = min(v, shift)
    return CycElem(div_by_pi(num, t) if t else num, shift - t)


def from_int(ring: CycRing, n: int) -> CycElem:
    return CycElem(ring.const(n), 0)


def from_fraction(ring: CycRing, q) -> CycElem:
    """Embed a rational number; denominators divisible by p become shifts."""
    q = Fraction(q)
    num, den = q.numerator, q.denominator
    if num == 0:
        return from_int(ring, 0)
    t = 0
    while den % ring.p == 0:
        den //= ring.p
        t += 1
    base = ring.const(num * pow(den, -1, ring.modulus))
    if t == 0:
        return CycElem(base, 0)
    return elem(base * ring.w() ** t, ring.e * t)


def pi_elem(i: int, params: Params) -> CycElem:
    return CycElem(pi_uniformizer(i, params), 0)
