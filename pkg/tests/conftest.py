import random

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings

from derivkit.scalar import Scalar

settings.register_profile(
    "derivkit", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("derivkit")


def to_sympy(z: Scalar):
    """Exact sympy value of a Scalar (used by the independent oracles)."""
    re_ = sp.Rational(int(z.re.numerator), int(z.re.denominator))
    im_ = sp.Rational(int(z.im.numerator), int(z.im.denominator))
    return re_ + sp.I * im_


def sympy_matrix(m):
    return sp.Matrix([[to_sympy(x) for x in row] for row in m])


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k].line())
