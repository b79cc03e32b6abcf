import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from linkassess.graph import Network


def net(edges, directed=False, id="G", nodes=()):
    return Network.from_edges(edges, directed=directed, id=id, nodes=nodes)


@pytest.fixture
def p3():
    return net([("a", "b"), ("b", "c")], id="P3")


@pytest.fixture
def k4():
    return net([(u, v) for i, u in enumerate("abcd") for v in "abcd"[i + 1:]], id="K4")


@pytest.fixture
def star():
    return net([("c", "x"), ("c", "y"), ("c", "z")], id="star")


@pytest.fixture
def tri_dir():
    return net([("a", "b"), ("c", "b"), ("a", "c")], directed=True, id="D")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
