import math

import pytest
from hypothesis import settings

from polyweight.weights import CompositeWeight, omega

settings.register_profile("default", max_examples=50, deadline=None)
settings.load_profile("default")

# criterion number -> (passed, detail), filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def sin_weight():
    """exp(-1/|sin t|)"""
    return omega("power", 1, "sin")


@pytest.fixture
def sin2_weight():
    """exp(-1/sin^2 t)"""
    return omega("power", 2, "sin")


@pytest.fixture
def mixed_weight():
    """exp(-1/sin^2 t) exp(-1/cos^4 t)"""
    return CompositeWeight((omega("power", 2, "sin"), omega("power", 4, "cos")))


def close_log(a: float, b: float, tol: float) -> bool:
    return (a == b) or abs(a - b) <= tol or (math.isinf(a) and math.isinf(b) and a == b)
