"""Operation counts of the truncated exponential over a grid of degree bounds."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass

from .expr import Coeff
from .numbertheory import make_params
from .series import InputPoly, derivative, prepare, tilde_transform, truncated_exp


def dense_poly(p: int, D: int) -> InputPoly:
    """sum_i pi(d_i) T^i: every tilde coefficient is 1."""
    params = make_params(p, D)
    return InputPoly.from_terms({i: Coeff.pi(params.d_i(i)) for i in range(1, D + 1)}, D)


@dataclass(frozen=True)
class BenchPoint:
    D: int
    mults: int
    bound: int          # D(D-1)/2 + D
    seconds: float


@dataclass(frozen=True)
class BenchResult:
    p: int
    points: tuple[BenchPoint, ...]
    count_exponent: float
    time_exponent: float


def loglog_slope(xs, ys) -> float:
    fit = statistics.linear_regression([math.log(x) for x in xs], [math.log(y) for y in ys])
    return fit.slope


def run_bench(p: int = 2, grid=(8, 16, 32, 64), margin: int = 8) -> BenchResult:
    points = []
    for D in grid:
        params = make_params(p, D, margin)
        P = dense_poly(p, D)
        prepared, _ = prepare(tilde_transform(P, params), params)
        lt = derivative(prepared, params)
        t0 = time.perf_counter()
        series = truncated_exp(lt, params)
        dt = time.perf_counter() - t0
        points.append(BenchPoint(D, series.mults, D * (D - 1) // 2 + D, dt))
    Ds = [pt.D for pt in points]
    return BenchResult(
        p, tuple(points),
        loglog_slope(Ds, [pt.mults for pt in points]),
        loglog_slope(Ds, [max(pt.seconds, 1e-9) for pt in points]))
