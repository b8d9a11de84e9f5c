"""Reading and printing equations P(T) in the CLI input language."""

from __future__ import annotations

from .errors import ParseError
from .expr import _tokenize, format_terms, parse_terms
from .numbertheory import floor_log
from .series import InputPoly


def _check_pi_indices(text: str, level: int) -> None:
    toks = _tokenize(text)
    for k, t in enumerate(toks):
        if t.kind == "pi" and k + 2 < len(toks) and toks[k + 2].kind == "int":
            n = toks[k + 2]
            if int(n.text) > level:
                raise ParseError(f"pi({n.text}) is undefined: indices run up to {level}",
                                 n.line, n.col)


def parse_poly(text: str, p: int, D: int | None = None) -> InputPoly:
    """Parse ``text`` into an InputPoly with degree bound D (default: its degree).

    pi(i) is accepted for i <= floor(log_p D).
    """
    terms = parse_terms(text)
    if 0 in terms:
        raise ParseError("constant term present; P(0) must vanish")
    deg = max(terms, default=0)
    if D is None:
        D = max(deg, 1)
    if D < 1:
        raise ParseError(f"degree bound must be >= 1, got {D}")
    if deg > D:
        raise ParseError(f"degree {deg} exceeds the bound {D}")
    _check_pi_indices(text, floor_log(p, D))
    return InputPoly.from_terms(terms, D)


def format_poly(P: InputPoly) -> str:
    return format_terms(P.as_dict())
