import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from boundapprox.geometry import UNIT_BOX, SensorLayout, delaunay, random_layout, voronoi  # noqa: E402

# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_layout(n: int, seed: int) -> SensorLayout:
    return random_layout(n, UNIT_BOX, np.random.default_rng(seed))


@pytest.fixture(scope="session")
def layout100():
    return make_layout(100, 2024)


@pytest.fixture(scope="session")
def net100(layout100):
    tri = delaunay(layout100)
    return layout100, tri, voronoi(tri)
