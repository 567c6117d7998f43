import math

import numpy as np
import pytest

from momd.graph import Graph, Metric


def planar(coords, edges, ids=None):
    ids = range(len(coords)) if ids is None else ids
    return Graph.from_edges(list(ids), coords, edges, Metric.PLANAR)


def grid(side, spacing=100.0):
    coords = [((i % side) * spacing, (i // side) * spacing) for i in range(side * side)]
    edges = []
    for i in range(side * side):
        r, c = divmod(i, side)
        if c + 1 < side:
            edges.append((i, i + 1, None))
        if r + 1 < side:
            edges.append((i, i + side, None))
    return planar(coords, edges)


@pytest.fixture
def comp_conexo():
    """Two components {1,2,4,5} and {3,6}."""
    coords = [(0, 0), (100, 0), (200, 0), (0, 100), (100, 100), (200, 100)]
    edges = [(1, 2, None), (1, 4, None), (2, 5, None), (4, 5, None), (3, 6, None)]
    return planar(coords, edges, ids=[1, 2, 3, 4, 5, 6])


@pytest.fixture
def path3():
    return planar([(0, 0), (1, 0), (3, 0)], [(0, 1, 1.0), (1, 2, 2.0)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_geometric_graph(n, m, seed, spacing=1000.0):
    """Random planar graph with straight-line edge weights."""
    r = np.random.default_rng(seed)
    coords = r.uniform(0, spacing, size=(n, 2))
    edges = set()
    while len(edges) < m:
        a, b = (int(x) for x in r.integers(0, n, 2))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return planar(coords, [(a, b, None) for a, b in sorted(edges)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
