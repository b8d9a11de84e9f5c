"""Command-line front end.

Every command prints a report: an ordered list of key/value pairs.  With
``--format machine`` each pair is a line ``key=value``; the default text
format aligns the same pairs for reading.  Exit codes: 0 ok, 2 parse or
usage error, 3 insoluble input, 4 precision exhausted, 5 internal check failed.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from .errors import ParseError, RankOneError
from .expr import parse_terms
from .invariants import (
    ResidueSeries,
    analyze,
    comparison_iso,
    equivalent,
    is_soluble,
    lift,
    reduce_comparison,
    residue_invariant,
    vT,
)
from .numbertheory import ZERO, make_params
from .oracle import crosscheck_pipeline
from .parser import format_poly, parse_poly
from .witt import index_via_witt, witt_factorize

Report = list[tuple[str, str]]


def _fmt(v) -> str:
    if v is None:
        return "na"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v == math.inf:
        return "inf"
    return str(v)


def _coeff_list(s: ResidueSeries) -> str:
    return ",".join(map(str, s.coeffs))


def _context(params, P=None) -> Report:
    out = [("p", params.p), ("D", params.D), ("d", params.d), ("level", params.level),
           ("e", params.e), ("A", params.A), ("margin", params.margin)]
    if P is not None:
        out.append(("poly", format_poly(P)))
        bad = []
        for i, a in P.coeffs(params).items():
            v = a.valuation()
            if v is not ZERO and v < 0:
                bad.append(str(i))
        out.append(("nonintegral_coeffs", ",".join(bad) or "none"))
    return out


def _solubility(P, params) -> Report:
    sol = is_soluble(P, params)
    out = [("soluble", bool(sol))]
    if not sol:
        out += [("witness_degree", sol.degree), ("witness_deficit", sol.deficit)]
    return out


def _probe(args, P, params) -> Report:
    if not args.probe:
        return []
    cc = crosscheck_pipeline(P, params, args.horizon)
    return [("oracle", "match"), ("oracle_horizon", cc.probe.horizon),
            ("oracle_probe_integral", cc.probe.integral),
            ("oracle_probe_first_failure", cc.probe.first_failure),
            ("oracle_probe_tail_divisible", cc.probe.tail_divisible),
            ("oracle_direct_path", cc.direct_path)]


def _read_input(args, name="poly") -> str:
    text = getattr(args, name)
    if text is None or text == "-":
        if getattr(args, "file", None):
            with open(args.file) as fh:
                return fh.read()
        return sys.stdin.read()
    return text


def _params(args, P_text):
    terms = parse_terms(P_text)
    D = args.degree_bound or max(max(terms, default=1), 1)
    params = make_params(args.p, D, args.margin)
    return parse_poly(P_text, args.p, D), params


def cmd_analyze(args) -> Report:
    P, params = _params(args, _read_input(args))
    rep = analyze(P, params)
    out = _context(params, P) + [("k", rep.k), ("mults", rep.mults)]
    out += _solubility(P, params)
    if rep.soluble:
        out += [("trivial", rep.trivial), ("ehat", rep.ehat), ("ehat_coeffs", _coeff_list(rep.ehat)),
                ("vT", rep.vT), ("chi", rep.chi), ("delta", rep.delta),
                ("comparison_iso", rep.comparison_iso),
                ("witt", _witt_str(rep.witt))]
        for m, c in rep.per_component.items():
            out += [(f"component.{m}.ehat", _coeff_list(c.ehat)),
                    (f"component.{m}.vT", c.vT), (f"component.{m}.chi", c.chi),
                    (f"component.{m}.weight", c.weight)]
    return out + _probe(args, P, params)


def _witt_str(factors: dict[int, int]) -> str:
    return ",".join(f"{n}:{u}" for n, u in sorted(factors.items())) or "none"


def cmd_index(args) -> Report:
    P, params = _params(args, _read_input(args))
    rep = analyze(P, params)
    if not rep.soluble:
        from .errors import InsolubleError
        raise InsolubleError(f"insoluble: coefficient {rep.witness.degree} of e~ has "
                             f"valuation -{rep.witness.deficit}")
    out = _context(params, P) + [("soluble", True), ("trivial", rep.trivial),
                                  ("ehat", rep.ehat), ("vT", rep.vT), ("chi", rep.chi),
                                  ("delta", rep.delta)]
    for m, c in rep.per_component.items():
        out += [(f"component.{m}.vT", c.vT), (f"component.{m}.weight", c.weight)]
    return out + _probe(args, P, params)


def cmd_equiv(args) -> Report:
    D = args.degree_bound or max(max(parse_terms(t), default=1) for t in (args.poly, args.other))
    params = make_params(args.p, max(D, 1), args.margin)
    P1 = parse_poly(args.poly, args.p, params.D)
    P2 = parse_poly(args.other, args.p, params.D)
    out = _context(params)
    out += [("poly", format_poly(P1)), ("other", format_poly(P2)),
            ("equivalent", equivalent(P1, P2, params))]
    for name, P in (("poly", P1), ("other", P2)):
        sol = bool(is_soluble(P, params))
        out.append((f"{name}.soluble", sol))
        if sol:
            out.append((f"{name}.ehat", residue_invariant(P, params)))
    return out


def cmd_compare(args) -> Report:
    P, params = _params(args, _read_input(args))
    c = comparison_iso(P, params)
    return _context(params, P) + [
        ("comparison_iso", c.iso), ("chi", c.chi), ("by_index", c.by_index),
        ("by_derivative", c.by_derivative), ("by_innocuous", c.by_innocuous)]


def cmd_reduce(args) -> Report:
    P, params = _params(args, _read_input(args))
    Pstar, steps = reduce_comparison(P, params)
    out = _context(params, P) + [("steps", len(steps))]
    for n, s in enumerate(steps, start=1):
        out += [(f"step.{n}.degree", s.degree), (f"step.{n}.factor", format_poly(s.F)),
                (f"step.{n}.factor_trivial", True)]
    out += [("reduced", format_poly(Pstar)), ("equivalent", equivalent(P, Pstar, params))]
    if not Pstar.is_zero():
        pd = params.with_bound(Pstar.degree)
        out.append(("reduced_comparison_iso",
                    comparison_iso(Pstar.with_bound(Pstar.degree), pd).iso))
    return out


def cmd_witt(args) -> Report:
    P, params = _params(args, _read_input(args))
    eh = residue_invariant(P, params)
    w = witt_factorize(eh, params)
    return _context(params, P) + [("ehat", eh), ("witt", _witt_str(w.factors)),
                                  ("chi", index_via_witt(P, params))]


def cmd_lift(args) -> Report:
    text = _read_input(args, "series")
    terms = parse_terms(text)
    coeffs = {}
    for deg, c in terms.items():
        if not (c.is_monomial() and c.terms[0][0] == () and c.terms[0][1].denominator == 1):
            raise ParseError(f"coefficient of T^{deg} must be an integer")
        coeffs[deg] = int(c.terms[0][1])
    D = args.degree_bound or max(max(coeffs, default=1), 1)
    if max(coeffs, default=0) > D:
        raise ParseError(f"degree {max(coeffs)} exceeds the bound {D}")
    if coeffs.get(0, 0) % args.p != 1:
        raise ParseError("the series must have constant term 1")
    params = make_params(args.p, D, args.margin)
    eh = ResidueSeries(args.p, tuple(coeffs.get(i, 0) for i in range(D + 1)))
    P = lift(eh, params)
    back = residue_invariant(P, params)
    return _context(params) + [("ehat", eh), ("lift", format_poly(P)),
                               ("roundtrip", back == eh), ("vT", vT(eh))]


def cmd_bench(args) -> Report:
    from .bench import run_bench

    grid = tuple(int(x) for x in args.grid.split(","))
    res = run_bench(args.p, grid, args.margin)
    out: Report = [("p", res.p), ("grid", ",".join(map(str, grid)))]
    for pt in res.points:
        out += [(f"D.{pt.D}.mults", pt.mults), (f"D.{pt.D}.bound", pt.bound),
                (f"D.{pt.D}.within_bound", pt.mults <= pt.bound)]
        if args.timing:
            out.append((f"D.{pt.D}.seconds", f"{pt.seconds:.6f}"))
    out.append(("count_exponent", f"{res.count_exponent:.4f}"))
    if args.timing:
        out.append(("time_exponent", f"{res.time_exponent:.4f}"))
    return out


def render(report: Report, fmt: str) -> str:
    pairs = [(k, _fmt(v)) for k, v in report]
    if fmt == "machine":
        return "".join(f"{k}={v}\n" for k, v in pairs)
    width = max((len(k) for k, _ in pairs), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="the prime p")
    common.add_argument("--degree-bound", "-D", type=int, default=None,
                        help="degree bound D (default: degree of the input)")
    common.add_argument("--margin", type=int, default=8, help="extra p-adic digits of precision")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--probe", action="store_true", help="cross-check with the exact oracle")
    common.add_argument("--horizon", type=int, default=None, help="oracle probe horizon (default 3D)")
    common.add_argument("--timing", action="store_true", help="append wall-clock time")

    parser = argparse.ArgumentParser(prog="rankone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in [
        ("analyze", cmd_analyze, "full report for y' = P'(T) y"),
        ("index", cmd_index, "index chi and L-function degree"),
        ("compare", cmd_compare, "comparison criterion (needs D = deg P)"),
        ("reduce", cmd_reduce, "strip superfluous factors"),
        ("witt", cmd_witt, "Witt coordinates of e^"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("poly", nargs="?", help="P(T); read from --file or stdin when omitted")
        sp.add_argument("--file", "-f", help="read P(T) from this file")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("equiv", parents=[common], help="equivalence of two equations")
    sp.add_argument("poly")
    sp.add_argument("other")
    sp.set_defaults(func=cmd_equiv)
    sp = sub.add_parser("lift", parents=[common], help="an equation with prescribed e^")
    sp.add_argument("series", nargs="?", help="e^(T) with integer coefficients, e.g. '1 + T^2'")
    sp.add_argument("--file", "-f")
    sp.set_defaults(func=cmd_lift)
    sp = sub.add_parser("bench", parents=[common], help="multiplication counts over a D grid")
    sp.add_argument("--grid", default="8,16,32,64")
    sp.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report = args.func(args)
    except RankOneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # anything else is a bug
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 5
    if args.timing and args.command != "bench":
        report.append(("seconds", f"{time.perf_counter() - t0:.6f}"))
    sys.stdout.write(render([("command", args.command)] + report, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
