import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from wlpa import _backend  # noqa: E402
from wlpa.graph import Graph  # noqa: E402

BACKENDS = ["python"] + (["compiled"] if _backend.compiled_available() else [])

TRIANGLE = [(0, 1), (0, 2), (1, 2)]
# a-b-c triangle, bridge c-d, d-e-f triangle
TWO_TRIANGLES_BRIDGE = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
TWO_TRIANGLES = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
PATH3 = [(0, 1), (1, 2)]
STAR3 = [(0, 1), (0, 2), (0, 3)]


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def karate():
    import wlpa

    return wlpa.load_dataset("karate")


def make(edges, n=None):
    return Graph.from_edges(edges, n=n)


def random_graph(rng, n, p):
    """G(n, p) edge list over dense ids."""
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return [(int(a), int(b)) for a, b in zip(iu[keep], ju[keep])]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
