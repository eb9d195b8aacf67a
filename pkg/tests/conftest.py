import numpy as np
import pytest

from wsndct.deployment import AreaGeometry, Deployment, Position

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def make_deployment():
    """Deployment with hand-placed nodes in a generous square, BS at (L_i, L/2)."""

    def _make(points, side=100.0, bs=(0.0, 0.0)):
        return Deployment(AreaGeometry.square(side), np.asarray(points, dtype=float), Position(*bs), seed=0)

    return _make
