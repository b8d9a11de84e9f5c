import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rankone import make_params, parse_poly
from rankone.invariants import ResidueSeries, lift

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

PRIMES = (2, 3, 5)


def poly(text, p, D=None):
    return parse_poly(text, p, D)


def random_ehat(rng, p, D):
    return ResidueSeries(p, (1,) + tuple(rng.randrange(p) for _ in range(D)))


def random_soluble(rng, p, D):
    """A soluble equation with prescribed random e^, via the digit lift."""
    params = make_params(p, D)
    eh = random_ehat(rng, p, D)
    return lift(eh, params), params, eh


@st.composite
def soluble_cases(draw, max_D=8):
    p = draw(st.sampled_from(PRIMES))
    D = draw(st.integers(1, max_D))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_soluble(random.Random(seed), p, D)


@pytest.fixture
def rng():
    return random.Random(20261016)


# acceptance criteria report: one line per criterion, printed after the run

_ACCEPTANCE: dict[str, list] = {}


@pytest.fixture
def accept(request):
    """Record a criterion verdict; the test itself still asserts."""
    def record(criterion: str, ok: bool, detail: str = ""):
        _ACCEPTANCE.setdefault(criterion, []).append((ok, detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE, key=lambda c: (int(c.split()[0]), c)):
        rows = _ACCEPTANCE[crit]
        ok = all(r[0] for r in rows)
        bad = [d for good, d in rows if not good]
        info = ("; ".join(bad[:4]) if bad else rows[-1][1])
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}  {info}".rstrip())
