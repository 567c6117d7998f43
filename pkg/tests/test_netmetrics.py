import math

import networkx as nx
import numpy as np
import pytest

from momd import netmetrics
from momd.errors import Disconnected, EmptyGraph
from momd.synth import SynthSpec, generate

from conftest import grid, planar, random_geometric_graph


def ring(n):
    pts = [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]
    return planar(pts, [(k, (k + 1) % n, None) for k in range(n)])


def complete(n):
    pts = [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]
    return planar(pts, [(a, b, None) for a in range(n) for b in range(a + 1, n)])


def star(leaves):
    pts = [(0.0, 0.0)] + [(math.cos(k), math.sin(k)) for k in range(leaves)]
    return planar(pts, [(0, k, None) for k in range(1, leaves + 1)])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertex_ids())
    h.add_edges_from((u, v) for u, v, _ in g.edges())
    return h


def test_triangle_clustering_one():
    assert netmetrics.clustering_coefficient(ring(3)) == 1.0
    assert netmetrics.clustering_coefficient(complete(6)) == 1.0


def test_star_and_square_clustering_zero():
    assert netmetrics.clustering_coefficient(star(5)) == 0.0
    assert netmetrics.clustering_coefficient(ring(4)) == 0.0


def test_path_of_four_mean_length():
    g = planar([(i, 0) for i in range(4)], [(i, i + 1, None) for i in range(3)])
    # pair distances 1,1,1,2,2,3
    assert netmetrics.mean_path_length(g) == pytest.approx(10 / 6)
    assert netmetrics.mean_path_length(complete(5)) == 1.0


def test_entropy_examples():
    assert netmetrics.degree_entropy(ring(10)) == 0.0
    # star(3): degrees 3,1,1,1
    p = np.array([0.25, 0.75])
    assert netmetrics.degree_entropy(star(3)) == pytest.approx(-(p * np.log(p)).sum() / math.log(2))
    with pytest.raises(EmptyGraph):
        netmetrics.degree_entropy(planar(np.zeros((0, 2)), []))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_clustering_matches_networkx(seed):
    g = random_geometric_graph(150, 500, seed)
    ours = netmetrics.local_clustering(g)
    ref = nx.clustering(to_nx(g))
    assert np.allclose(ours, [ref[v] for v in g.vertex_ids()])


def test_mean_path_length_matches_networkx():
    g = generate(SynthSpec("small_world", 400, p=0.2, rng_seed=4))
    h = to_nx(g)
    if nx.is_connected(h):
        assert netmetrics.mean_path_length(g) == pytest.approx(nx.average_shortest_path_length(h))


def test_sampled_path_length_against_exact():
    g = grid(15)
    exact = netmetrics.mean_path_length(g)
    sampled = netmetrics.mean_path_length_sampled(g, 4000, rng_seed=1)
    assert sampled == pytest.approx(exact, rel=0.05)
    assert sampled == netmetrics.mean_path_length_sampled(g, 4000, rng_seed=1)


def test_sampled_path_length_disconnected(comp_conexo):
    with pytest.raises(Disconnected):
        netmetrics.mean_path_length_sampled(comp_conexo, 200, rng_seed=0)


def test_profile_row():
    prof = netmetrics.profile(star(4), "star", pairs=10, rng_seed=0)
    assert (prof.n, prof.m, prof.max_degree, prof.median_degree) == (5, 4, 4, 1.0)
    assert prof.hub_ratio == 4.0
    assert len(prof.csv_row()) == len(prof.csv_header())
    assert netmetrics.profile(ring(5)).csv_row()[8] == ""
