import math

import pytest

from qlink.extinction import ExtinctionCurve
from qlink.units import CONSTANTS

PC = CONSTANTS.parsec


@pytest.fixture
def transparent_curve():
    return ExtinctionCurve((1e-13, 1e3), (0.0, 0.0), name="transparent")


@pytest.fixture
def flat_curve():
    """sigma = 1e-26 m^2 everywhere."""
    return ExtinctionCurve((1e-13, 1e3), (1e-26, 1e-26), name="flat")


def rel(a, b):
    return abs(a - b) / abs(b)


__all__ = ["PC", "rel", "math"]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
