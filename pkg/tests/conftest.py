import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from iotnet import IONetwork  # noqa: E402


@pytest.fixture
def two_cycle():
    # edges 1->2 (w=1), 2->1 (w=2)
    return IONetwork.from_matrix(["1", "2"], [[0, 1], [2, 0]])


@pytest.fixture
def four_node():
    return IONetwork.from_edges(
        ["1", "2", "3", "4"], [("1", "2", 1), ("3", "2", 1), ("3", "4", 2), ("2", "4", 1)]
    )


W6 = np.array([
    [0, 3, 0, 1, 0, 2],
    [1, 0, 4, 0, 0, 0],
    [0, 2, 0, 5, 1, 0],
    [2, 0, 0, 0, 3, 1],
    [0, 1, 2, 0, 0, 4],
    [3, 0, 1, 2, 0, 0],
], dtype=float)


@pytest.fixture
def six_node():
    return IONetwork.from_matrix([f"{i:02d}" for i in range(1, 7)], W6)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
