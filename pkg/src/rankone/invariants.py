"""Solubility, the residue invariant e^(T), indices, equivalence and comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConsistencyError, InsolubleError, PrecisionError
from .expr import Coeff
from .numbertheory import ZERO, Params, floor_log
from .series import InputPoly, etilde


@dataclass(frozen=True)
class ResidueSeries:
    """A truncated series over F_p with constant term 1."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(c % self.p for c in self.coeffs))
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("residue series must start with 1")

    @classmethod
    def one(cls, p: int, D: int) -> ResidueSeries:
        return cls(p, (1,) + (0,) * D)

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    def is_one(self) -> bool:
        return not any(self.coeffs[1:])

    def __mul__(self, other: ResidueSeries) -> ResidueSeries:
        p, D = self.p, min(self.D, other.D)
        out = [0] * (D + 1)
        for i, a in enumerate(self.coeffs[:D + 1]):
            if a:
                for j in range(D + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return ResidueSeries(p, tuple(out))

    def inverse(self) -> ResidueSeries:
        p, D = self.p, self.D
        inv = [1] + [0] * D
        for n in range(1, D + 1):
            inv[n] = -sum(self.coeffs[k] * inv[n - k] for k in range(1, n + 1)) % p
        return ResidueSeries(p, tuple(inv))

    def substitute_power(self, m: int, D: int) -> ResidueSeries:
        """s(T^m) mod T^(D+1)."""
        out = [0] * (D + 1)
        for i, c in enumerate(self.coeffs):
            if i * m > D:
                break
            out[i * m] = c
        return ResidueSeries(self.p, tuple(out))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
                parts.append(mono if (c == 1 and mono) else (f"{c}*{mono}" if mono else str(c)))
        return " + ".join(parts)


@dataclass(frozen=True)
class Solubility:
    soluble: bool
    degree: int | None = None      # first degree where e~ has a negative valuation
    deficit: int | None = None     # minus that valuation, in units of the ring uniformizer

    def __bool__(self):
        return self.soluble


def is_soluble(P: InputPoly, params: Params) -> Solubility:
    """Integrality of every coefficient of e~(T)."""
    run = etilde(P, params)
    undecided = None
    for i, c in enumerate(run.series.coeffs):
        v = c.valuation()
        if v is ZERO:
            if c.value_prec < 0 and undecided is None:
                undecided = i
        elif v < 0:
            return Solubility(False, i, -v)
    if undecided is not None:
        raise PrecisionError(f"cannot certify integrality of coefficient {undecided}; raise the margin")
    return Solubility(True)


def residue_invariant(P: InputPoly, params: Params) -> ResidueSeries:
    """e^(T): reduction of e~(T) to F_p[T]/(T^(D+1))."""
    if not is_soluble(P, params):
        raise InsolubleError("residue invariant of an insoluble equation")
    coeffs = tuple(c.residue() for c in etilde(P, params).series.coeffs)
    return ResidueSeries(params.p, coeffs)


def vT(ehat: ResidueSeries):
    """T-adic valuation of e^ - 1; math.inf when e^ = 1."""
    for n, c in enumerate(ehat.coeffs[1:], start=1):
        if c:
            return n
    return math.inf


def is_trivial(P: InputPoly, params: Params) -> bool:
    return residue_invariant(P, params).is_one()


def is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def prime_to_p_part(n: int, p: int) -> tuple[int, int]:
    """n = m p^k with p not dividing m; returns (m, k)."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return n, k


@dataclass(frozen=True)
class PTypDecomp:
    """P(T) = sum_m P_m(T^m) with each P_m supported on powers of p."""

    p: int
    components: dict[int, InputPoly] = field(hash=False)

    def recompose(self) -> InputPoly:
        total = None
        for m, Pm in sorted(self.components.items()):
            t = Pm.compose_power(m)
            total = t if total is None else total + t
        return total


def ptypical_decompose(P: InputPoly, params: Params) -> PTypDecomp:
    p, D = params.p, params.D
    groups: dict[int, dict[int, Coeff]] = {}
    for i, c in P.terms:
        m, k = prime_to_p_part(i, p)
        groups.setdefault(m, {})[p**k] = c
    comps = {m: InputPoly.from_terms(t, D // m) for m, t in sorted(groups.items())}
    return PTypDecomp(p, comps)


def is_p_typical(P: InputPoly, p: int) -> bool:
    return all(is_power_of(i, p) for i in P.support())


def index_p_typical(P: InputPoly, params: Params) -> int:
    """chi = 1 - p^d / v_T(e^ - 1) for P supported on powers of p."""
    if not is_p_typical(P, params.p):
        raise ValueError("support is not contained in the powers of p")
    v = vT(residue_invariant(P, params))
    if v == math.inf:
        return 1
    if not is_power_of(v, params.p):
        raise ConsistencyError(f"v_T(e^ - 1) = {v} is not a power of {params.p}")
    return 1 - params.p**params.d // v


@dataclass(frozen=True)
class Component:
    m: int
    ehat: ResidueSeries
    vT: object
    weight: int        # m p^(d_m) / v_T, 0 for a trivial component
    chi: int           # index of the equation P_m(T^m)


def component_analysis(P: InputPoly, params: Params) -> dict[int, Component]:
    """Per-component e^_m at degree bound floor(D/m), sharing the ring of params."""
    p = params.p
    out = {}
    for m, Pm in ptypical_decompose(P, params).components.items():
        pm_params = params.with_bound(params.D // m)
        eh = residue_invariant(Pm, pm_params)
        v = vT(eh)
        if v == math.inf:
            out[m] = Component(m, eh, v, 0, 1)
            continue
        if not is_power_of(v, p):
            raise ConsistencyError(f"component {m}: v_T = {v} is not a power of {p}")
        weight = m * p ** params.d_i(m) // v
        out[m] = Component(m, eh, v, weight, 1 - weight)
    return out


def index(P: InputPoly, params: Params) -> int:
    """chi = 1 - max_m m p^(d_m) / v_T(e^_m - 1), trivial components omitted."""
    if not is_soluble(P, params):
        raise InsolubleError("index of an insoluble equation")
    comps = component_analysis(P, params)
    return 1 - max((c.weight for c in comps.values()), default=0)


def equivalent(P1: InputPoly, P2: InputPoly, params: Params) -> bool:
    s1, s2 = bool(is_soluble(P1, params)), bool(is_soluble(P2, params))
    if not (s1 or s2):
        raise InsolubleError("neither equation is soluble")
    if s1 != s2:
        return False
    return residue_invariant(P1, params) == residue_invariant(P2, params)


def lift(ehat: ResidueSeries, params: Params) -> InputPoly:
    """An equation with the given e^: digits lifted to {0..p-1}, then log, then times pi(d_i)."""
    D = params.D
    if ehat.D != D:
        raise ValueError(f"series length {ehat.D + 1} does not match D = {D}")
    X = [Fraction(0)] + [Fraction(c) for c in ehat.coeffs[1:]]
    logs = [Fraction(0)] * (D + 1)
    power = [Fraction(1)] + [Fraction(0)] * D
    for j in range(1, D + 1):
        nxt = [Fraction(0)] * (D + 1)
        for a, x in enumerate(power):
            if x:
                for b in range(1, D + 1 - a):
                    if X[b]:
                        nxt[a + b] += x * X[b]
        power = nxt
        sign = 1 if j % 2 else -1
        for i in range(D + 1):
            logs[i] += sign * power[i] / j
    terms = {i: Coeff.const(q) * Coeff.pi(params.d_i(i)) for i, q in enumerate(logs) if i and q}
    return InputPoly.from_terms(terms, D)


def lfunction_degree(P: InputPoly, params: Params) -> int:
    chi = index(P, params)
    return 0 if chi == 1 else -chi


@dataclass(frozen=True)
class Comparison:
    iso: bool
    chi: int
    by_index: bool
    by_derivative: bool
    by_innocuous: bool | None     # only evaluated when p does not divide D


def comparison_iso(P: InputPoly, params: Params) -> Comparison:
    """Is rational cohomology isomorphic to Dwork cohomology?  Needs D = deg P."""
    if P.degree != params.D:
        raise ValueError(f"comparison needs D = deg P ({params.D} != {P.degree})")
    if not is_soluble(P, params):
        raise InsolubleError("comparison for an insoluble equation")
    p, D = params.p, params.D
    m, _ = prime_to_p_part(D, p)
    comps = component_analysis(P, params)
    chi = 1 - max((c.weight for c in comps.values()), default=0)
    by_index = chi == 1 - D
    by_derivative = comps[m].ehat.coeffs[1] != 0
    by_innocuous = None
    if m == D:
        a_D = P.coeffs(params)[D]
        v = a_D.valuation()
        if v is ZERO:
            raise PrecisionError("leading coefficient vanishes at working precision")
        by_innocuous = v == p**params.level     # |a_D| = |pi_0|
    if by_index != by_derivative or (by_innocuous is not None and by_innocuous != by_index):
        raise ConsistencyError(
            f"comparison criteria disagree: index={by_index} derivative={by_derivative} "
            f"innocuous={by_innocuous}")
    return Comparison(by_index, chi, by_index, by_derivative, by_innocuous)


def shift_V(Pm: InputPoly, p: int) -> InputPoly:
    """V(sum a_{p^j} T^(p^j)) = sum a_{p^(j+1)} T^(p^j)."""
    if not is_p_typical(Pm, p):
        raise ValueError("shift_V needs support in the powers of p")
    terms = {i // p: c for i, c in Pm.terms if i > 1}
    return InputPoly.from_terms(terms, max(Pm.degree_bound // p, 1))


@dataclass(frozen=True)
class ReductionStep:
    degree: int             # degree of P before the step
    F: InputPoly            # superfluous factor removed
    result: InputPoly


def reduce_comparison(P: InputPoly, params: Params) -> tuple[InputPoly, list[ReductionStep]]:
    """Strip superfluous factors until the comparison map is an isomorphism.

    Each step writes deg P = m p^n, sets F = P_m(T^m) - (V P_m)(T^m), checks
    that F defines a trivial equation and replaces P by P - F, whose degree
    is below m p^n.
    """
    if not is_soluble(P, params):
        raise InsolubleError("reduction of an insoluble equation")
    p = params.p
    current = P
    steps = []
    while not current.is_zero():
        Dc = current.degree
        pc = params.with_bound(Dc)
        if comparison_iso(current.with_bound(Dc), pc).iso:
            break
        m, _ = prime_to_p_part(Dc, p)
        Pm = ptypical_decompose(current.with_bound(Dc), pc).components[m]
        F = (Pm.compose_power(m) - shift_V(Pm, p).compose_power(m)).with_bound(Dc)
        if not residue_invariant(F, pc).is_one():
            raise ConsistencyError(f"superfluous factor {F} is not trivial")
        nxt = (current.with_bound(Dc) - F).with_bound(P.degree_bound)
        if nxt.degree >= Dc:
            raise ConsistencyError("reduction step did not lower the degree")
        steps.append(ReductionStep(Dc, F, nxt))
        current = nxt
    return current, steps


@dataclass
class AnalysisReport:
    soluble: bool
    trivial: bool | None = None
    ehat: ResidueSeries | None = None
    vT: object = None
    chi: int | None = None
    delta: int | None = None
    comparison_iso: bool | None = None
    witt: dict[int, int] = field(default_factory=dict)
    per_component: dict[int, Component] = field(default_factory=dict)
    witness: Solubility | None = None
    k: int | None = None
    mults: int | None = None


def analyze(P: InputPoly, params: Params) -> AnalysisReport:
    from .witt import index_from_factors, witt_factorize

    sol = is_soluble(P, params)
    run = etilde(P, params)
    if not sol:
        return AnalysisReport(False, witness=sol, k=run.k, mults=run.mults)
    eh = residue_invariant(P, params)
    comps = component_analysis(P, params)
    recomposed = ResidueSeries.one(params.p, params.D)
    for m, c in comps.items():
        recomposed = recomposed * c.ehat.substitute_power(m, params.D)
    if recomposed != eh:
        raise ConsistencyError("e^ differs from the product of its p-typical components")
    chi = 1 - max((c.weight for c in comps.values()), default=0)
    factors = witt_factorize(eh, params).factors
    if index_from_factors(factors, params) != chi:
        raise ConsistencyError("index formulas disagree")
    trivial = eh.is_one()
    if trivial != (chi == 1):
        raise ConsistencyError("chi = 1 must coincide with triviality")
    comp = None
    if P.degree == params.D:
        comp = comparison_iso(P, params).iso
    return AnalysisReport(
        True, trivial, eh, vT(eh), chi, 0 if trivial else -chi, comp, factors, comps,
        sol, run.k, run.mults)
