"""Exact symbolic coefficients and the polynomial input language.

A coefficient is a Laurent polynomial over Q in the symbols pi(0), pi(1), ...
kept in a canonical normal form, so printing is canonical and
``print(parse(print(x))) == print(x)``.  Relations between the pi(i) (for
instance pi(0) = (1 + pi(1))^p - 1) are *not* applied symbolically; they are
honoured when a coefficient is evaluated in a ring.

Grammar (whitespace insensitive)::

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' ['-'] INT)?
    atom   := INT | 'pi' '(' INT ')' | 'T' | '(' poly ')'

``T`` may only occur as a top-level multiplicative factor of a term.
Division and negative powers are restricted to monomial divisors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import ParseError

Monomial = tuple[int, ...]   # exponent of pi(i) at index i, trailing zeros trimmed


def _trim(m: Iterable[int]) -> Monomial:
    m = list(m)
    while m and m[-1] == 0:
        m.pop()
    return tuple(m)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


@dataclass(frozen=True)
class Coeff:
    terms: tuple[tuple[Monomial, Fraction], ...] = ()

    @classmethod
    def from_dict(cls, d: dict) -> Coeff:
        return cls(tuple(sorted((m, q) for m, q in d.items() if q != 0)))

    @classmethod
    def const(cls, q) -> Coeff:
        return cls.from_dict({(): Fraction(q)})

    @classmethod
    def pi(cls, i: int, k: int = 1) -> Coeff:
        return cls.from_dict({_trim([0] * i + [k]): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def max_pi_index(self) -> int:
        return max((len(m) - 1 for m, _ in self.terms), default=-1)

    def __add__(self, other):
        if not isinstance(other, Coeff):
            other = Coeff.const(other)
        d = dict(self.terms)
        for m, q in other.terms:
            d[m] = d.get(m, 0) + q
        return Coeff.from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return Coeff(tuple((m, -q) for m, q in self.terms))

    def __sub__(self, other):
        if not isinstance(other, Coeff):
            other = Coeff.const(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Coeff):
            other = Coeff.const(other)
        d = {}
        for m1, q1 in self.terms:
            for m2, q2 in other.terms:
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, 0) + q1 * q2
        return Coeff.from_dict(d)

    __rmul__ = __mul__

    def inverse(self) -> Coeff:
        if not self.is_monomial():
            raise ZeroDivisionError("only monomial coefficients can be inverted")
        (m, q), = self.terms
        return Coeff.from_dict({tuple(-k for k in m): 1 / q})

    def __truediv__(self, other):
        if not isinstance(other, Coeff):
            other = Coeff.const(other)
        return self * other.inverse()

    def __pow__(self, n: int) -> Coeff:
        if n < 0:
            return self.inverse() ** (-n)
        out = Coeff.const(1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, const: Callable, pi_power: Callable):
        """Value in a ring: ``const(q)`` embeds rationals, ``pi_power(i, k)`` gives pi(i)^k."""
        total = None
        for m, q in self.terms:
            t = const(q)
            for i, k in enumerate(m):
                if k:
                    t = t * pi_power(i, k)
            total = t if total is None else total + t
        return const(Fraction(0)) if total is None else total

    def __str__(self):
        return format_coeff(self)


def _format_term(m: Monomial, q: Fraction, leading: bool) -> str:
    sign = "-" if q < 0 else "+"
    q = abs(q)
    factors = [f"pi({i})" + (f"^{k}" if k != 1 else "") for i, k in enumerate(m) if k]
    if q != 1 or not factors:
        factors.insert(0, str(q))
    body = "*".join(factors)
    if leading:
        return ("-" if sign == "-" else "") + body
    return f" {sign} {body}"


def format_coeff(c: Coeff) -> str:
    if c.is_zero():
        return "0"
    return "".join(_format_term(m, q, i == 0) for i, (m, q) in enumerate(c.terms))


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(pi)|(T)|(\*\*|[-+*/^()]))")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(i):
        ln = max(k for k, s in enumerate(line_starts) if s <= i)
        return ln + 1, i - line_starts[ln] + 1

    while True:
        m = _TOKEN.match(text, pos)
        if not m:
            rest = text[pos:]
            if rest.strip() == "":
                break
            i = pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {text[i]!r}", *where(i))
        start = m.start(m.lastindex)
        kind = ("int", "pi", "T", "op")[m.lastindex - 1]
        tok = m.group(m.lastindex)
        if tok == "**":
            tok = "^"
        toks.append(_Tok(kind, tok, *where(start)))
        pos = m.end()
    eol = where(len(text))
    toks.append(_Tok("end", "", *eol))
    return toks


class _Parser:
    """Recursive descent; values are dicts degree -> Coeff."""

    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.take()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def error(self, msg, t=None):
        t = t or self.peek()
        return ParseError(msg, t.line, t.col)

    def parse(self, top=True):
        out = {}
        sign = 1
        t = self.peek()
        if t.text in "+-" and t.kind == "op":
            self.take()
            sign = -1 if t.text == "-" else 1
        while True:
            term = self.term(top)
            for deg, c in term.items():
                out[deg] = out.get(deg, Coeff()) + (c if sign > 0 else -c)
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.take()
                sign = -1 if t.text == "-" else 1
                continue
            break
        return {k: v for k, v in out.items() if not v.is_zero()}

    def term(self, top):
        deg, coeff = self.factor(top)
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "*/":
                self.take()
                nt = self.peek()
                d2, c2 = self.factor(top)
                if t.text == "*":
                    deg += d2
                    coeff = coeff * c2
                else:
                    if d2:
                        raise self.error("division by T", nt)
                    try:
                        coeff = coeff / c2
                    except ZeroDivisionError:
                        raise self.error("divisor must be a nonzero monomial", nt) from None
            else:
                return {deg: coeff}

    def factor(self, top):
        start = self.peek()
        deg, coeff = self.atom(top)
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            neg = False
            if self.peek().text == "-":
                self.take()
                neg = True
            n = self.take()
            if n.kind != "int":
                raise self.error("expected an integer exponent", n)
            k = -int(n.text) if neg else int(n.text)
            if deg:
                if k < 0:
                    raise self.error("negative power of T", n)
                return deg * k, coeff
            try:
                return 0, coeff ** k
            except ZeroDivisionError:
                raise self.error("negative power of a non-monomial", start) from None
        return deg, coeff

    def atom(self, top):
        t = self.take()
        if t.kind == "int":
            return 0, Coeff.const(int(t.text))
        if t.kind == "pi":
            self.expect("(")
            n = self.take()
            if n.kind != "int":
                raise self.error("expected an integer index", n)
            self.expect(")")
            return 0, Coeff.pi(int(n.text))
        if t.kind == "T":
            if not top:
                raise self.error("T inside parentheses", t)
            return 1, Coeff.const(1)
        if t.text == "(":
            inner = self.parse(top=False)
            self.expect(")")
            return 0, inner.get(0, Coeff())
        raise self.error(f"unexpected {t.text or 'end of input'!r}", t)


def parse_terms(text: str) -> dict[int, Coeff]:
    """Parse a polynomial in T into ``{degree: Coeff}`` (zero terms dropped)."""
    p = _Parser(text)
    out = p.parse()
    t = p.peek()
    if t.kind != "end":
        raise ParseError(f"unexpected {t.text!r}", t.line, t.col)
    return out


def parse_coeff(text: str) -> Coeff:
    terms = parse_terms(text)
    if any(k for k in terms):
        raise ParseError("coefficient may not contain T")
    return terms.get(0, Coeff())


def format_terms(terms: dict[int, Coeff]) -> str:
    if not terms:
        return "0"
    parts = []
    for n, deg in enumerate(sorted(terms)):
        c = terms[deg]
        mono = "" if deg == 0 else ("T" if deg == 1 else f"T^{deg}")
        if c.is_monomial():
            (m, q), = c.terms
            neg = q < 0
            body = format_coeff(-c if neg else c)
        else:
            neg = False
            body = f"({format_coeff(c)})"
        if mono:
            body = mono if body == "1" else f"{body}*{mono}"
        if n == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
