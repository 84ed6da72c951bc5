import math

import pytest

from dichromatic import DichromaticSpec, PlanarSpec

BASE = DichromaticSpec(1.0, 0.5, math.pi / 2, 0.0)
PLANE = PlanarSpec(1.0, 0.5, 0.0, math.pi / 2, math.pi / 2)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def base():
    return BASE


@pytest.fixture
def plane():
    return PLANE


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
