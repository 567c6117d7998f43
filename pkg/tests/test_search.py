import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse import csgraph

from momd.errors import GraphTooLarge, UnknownVertex
from momd.search import (
    FOUND,
    UNREACHABLE,
    astar,
    astar_traced,
    dijkstra,
    floyd_warshall,
    floyd_warshall_region,
    path_length,
)

from conftest import grid, planar, random_geometric_graph

H_TABLE = {1: 10.0, 2: 8.0, 3: 7.0, 4: 3.0, 5: 0.0}


@pytest.fixture
def five():
    coords = [(0, 0), (0, 0), (1, 1), (2, 2), (3, 3), (4, 4)][1:]
    edges = [(1, 2, 4.0), (1, 3, 5.0), (2, 4, 6.0), (3, 5, 10.0), (4, 5, 3.0)]
    return planar(coords, edges, ids=[1, 2, 3, 4, 5])


def test_traced_f_value_of_v3(five):
    r = astar_traced(five, 1, 5, heuristic=lambda v, goal: H_TABLE[v])
    by_vertex = {n.vertex: n for n in r.trace}
    assert by_vertex[3].g == 5.0 and by_vertex[3].h == 7.0
    assert by_vertex[3].f == 12.0
    assert [n.vertex for n in r.trace] == [1, 2, 3, 4, 5]
    assert r.path == (1, 2, 4, 5) and r.distance == 13.0


def test_tie_prefers_smaller_g(five):
    # v2 and v3 both sit at f = 12; v2 has the smaller g
    r = astar_traced(five, 1, 5, heuristic=lambda v, goal: H_TABLE[v])
    assert [n.vertex for n in r.trace][1:3] == [2, 3]


def test_kernel_matches_traced_on_table_heuristic(five):
    h = lambda v, goal: H_TABLE[v]
    a, b = astar(five, 1, 5, heuristic=h), astar_traced(five, 1, 5, heuristic=h)
    assert (a.path, a.distance, a.expansions) == (b.path, b.distance, b.expansions)


def test_origin_equals_goal(five):
    r = astar(five, 3, 3)
    assert r.status == FOUND
    assert r.path == (3,) and r.distance == 0.0 and r.hops == 0 and r.expansions == 1


def test_unreachable(comp_conexo):
    r = astar(comp_conexo, 1, 6)
    assert r.status == UNREACHABLE and not r.found
    assert r.path == () and r.distance == float("inf")


def test_unknown_vertex(five):
    with pytest.raises(UnknownVertex):
        astar(five, 1, 99)


def test_grid_astar_matches_dijkstra_and_expands_less():
    g = grid(50)
    rng = np.random.default_rng(0)
    for _ in range(50):
        o, d = (int(x) for x in rng.integers(0, 2500, 2))
        a, b = astar(g, o, d), dijkstra(g, o, d)
        assert a.distance == pytest.approx(b.distance, rel=1e-12)
        assert a.expansions <= b.expansions
        assert path_length(g, a.path) == pytest.approx(a.distance)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(10, 80))
def test_astar_optimal_and_consistent(seed, n):
    g = random_geometric_graph(n, 3 * n, seed)
    dist = csgraph.dijkstra(g.to_scipy(), directed=False)
    rng = np.random.default_rng(seed)
    o, d = (int(x) for x in rng.integers(0, n, 2))
    a = astar(g, o, d)
    if np.isfinite(dist[o, d]):
        assert a.status == FOUND
        assert a.distance == pytest.approx(dist[o, d], rel=1e-9, abs=1e-9)
        assert a.path[0] == o and a.path[-1] == d
        assert path_length(g, a.path) == pytest.approx(a.distance, rel=1e-12)
        t = astar_traced(g, o, d)
        # consistent heuristic: f never decreases along the expansion order
        fs = [node.f for node in t.trace]
        assert all(y >= x - 1e-9 for x, y in zip(fs, fs[1:]))
        assert (t.path, t.expansions) == (a.path, a.expansions)
        assert a.expansions <= dijkstra(g, o, d).expansions
    else:
        assert a.status == UNREACHABLE


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_reopen_never_hurts_with_inflated_heuristic(seed):
    g = random_geometric_graph(60, 180, seed)
    rng = np.random.default_rng(seed)
    o, d = (int(x) for x in rng.integers(0, 60, 2))
    pos = g.coords
    inflated = lambda v, goal: 3.0 * float(np.hypot(*(pos[v] - pos[goal])))
    plain = astar(g, o, d, heuristic=inflated)
    reopen = astar(g, o, d, heuristic=inflated, reopen=True)
    assert reopen.distance <= plain.distance + 1e-9
    traced = astar_traced(g, o, d, heuristic=inflated, reopen=True)
    assert (traced.path, traced.expansions) == (reopen.path, reopen.expansions)


def test_floyd_warshall_matches_scipy_and_dijkstra():
    g = random_geometric_graph(120, 300, 4)
    fw = floyd_warshall(g)
    ref = csgraph.floyd_warshall(g.to_scipy(), directed=False)
    assert np.allclose(fw, ref, equal_nan=False)
    for o, d in [(0, 5), (17, 90), (3, 3)]:
        r = dijkstra(g, o, d)
        assert fw[o, d] == pytest.approx(r.distance) if r.found else np.isinf(fw[o, d])


def test_floyd_warshall_region_submatrix():
    g = grid(6)
    sub = floyd_warshall_region(g, [0, 1], [34, 35, 29])
    assert sub.shape == (2, 3)
    assert sub[0, 1] == pytest.approx(1000.0)
    assert sub[1, 0] == pytest.approx(800.0)


def test_floyd_warshall_guard():
    g = planar(np.zeros((2001, 2)) + np.arange(2001)[:, None], [])
    with pytest.raises(GraphTooLarge):
        floyd_warshall(g)


def test_path_length_missing_edge(five):
    with pytest.raises(ValueError):
        path_length(five, [1, 5])
    assert path_length(five, [1, 2, 4]) == 10.0
