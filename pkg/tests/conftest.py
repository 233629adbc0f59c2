import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lichnerowicz.formcalc import FormTensor
from lichnerowicz.qpoly import HomoPoly, monomials
from lichnerowicz.symcalc import SymTensor
from lichnerowicz.tensorcalc import GenTensor, random_tensor

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def homo_polys(draw, nvars=None, degree=None):
    nvars = draw(st.integers(2, 4)) if nvars is None else nvars
    degree = draw(st.integers(0, 3)) if degree is None else degree
    monos = monomials(nvars, degree)
    coeffs = draw(st.lists(small_fractions, min_size=len(monos), max_size=len(monos)))
    return HomoPoly(nvars, degree, dict(zip(monos, coeffs)))


@st.composite
def tensors(draw, cls=SymTensor, n=None, p=None, k=None, max_p=3, max_k=3):
    """Random tensors driven by a hypothesis-chosen seed (keeps shrinking cheap)."""
    n = draw(st.integers(1, 3)) if n is None else n
    p = draw(st.integers(0, max_p)) if p is None else p
    k = draw(st.integers(0, max_k)) if k is None else k
    if cls is FormTensor:
        p = min(p, n + 1)
    seed = draw(st.integers(0, 2**32 - 1))
    density = draw(st.sampled_from([0.2, 0.5, 1.0]))
    return random_tensor(cls, n, p, k, random.Random(seed), density=density)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for the acceptance summary."""
    lines = request.config._acceptance_lines

    def record(number, ok, detail=""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
