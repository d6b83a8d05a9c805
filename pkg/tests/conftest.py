import numpy as np
import pytest
from fractions import Fraction
from hypothesis import settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

from fundtriples import camera, smallalg as sa  # noqa: E402

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def mat3(elements=rationals):
    return st.lists(elements, min_size=9, max_size=9).map(
        lambda xs: np.array(xs, dtype=object).reshape(3, 3))


def vec3(elements=rationals):
    return st.lists(elements, min_size=3, max_size=3).map(lambda xs: np.array(xs, dtype=object))


def random_rational_matrix(rng, lo=-5, hi=5, den=4):
    return np.array([[Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, den + 1)))
                      for _ in range(3)] for _ in range(3)], dtype=object)


def random_rational_triple(rng):
    return camera.FundamentalTriple(*(random_rational_matrix(rng) for _ in range(3)))


def random_rank2_rational(rng):
    """Exact rank-2 matrix ``a b^T + c d^T``."""
    while True:
        a, b, c, d = (np.array([Fraction(int(rng.integers(-4, 5))) for _ in range(3)], dtype=object)
                      for _ in range(4))
        M = np.outer(a, b) + np.outer(c, d)
        if sa.exact_rank(M) == 2:
            return M


def nonzero_rational(rng):
    while True:
        x = Fraction(int(rng.integers(-7, 8)), int(rng.integers(1, 5)))
        if x:
            return x


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def discovery_report():
    """One default discovery run shared by every test that needs it."""
    from fundtriples.syminterp.discovery import run_discovery
    return run_discovery()


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = []


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.append((criterion, bool(ok), detail))
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
