import math

import numpy as np
import pytest

from momd import synth
from momd.errors import ConfigInvalid
from momd.graph import connected_components
from momd.netmetrics import degree_entropy
from momd.synth import SynthSpec


def test_regular_3x3():
    g = synth.gen_regular(SynthSpec("regular", 9))
    assert (g.n_vertices, g.n_edges) == (9, 12)
    assert g.position(4) == (100.0, 100.0)
    g.check_invariants()


def test_regular_10k_edges():
    g = synth.gen_regular(SynthSpec("regular", 10_000))
    assert g.n_edges == 2 * 100 * 99 == 19_800


def test_regular_interior_entropy_is_zero():
    g = synth.gen_regular(SynthSpec("regular", 100))
    interior = [v for v in g.vertex_ids() if 0 < v % 10 < 9 and 0 < v // 10 < 9]
    assert degree_entropy(g, interior) == 0.0
    assert degree_entropy(g) > 0.0


def test_random_matches_edge_count_and_has_entropy():
    g = synth.gen_random(SynthSpec("random", 10_000, rng_seed=1))
    assert g.n_edges == 19_800
    assert degree_entropy(g) > 0.5


def test_small_world_p0_is_lattice():
    reg = synth.gen_regular(SynthSpec("regular", 400))
    sw = synth.gen_small_world(SynthSpec("small_world", 400, p=0.0, rng_seed=5))
    assert list(sw.edges()) == list(reg.edges())


@pytest.mark.parametrize("p", [0.1, 0.5])
def test_small_world_rewired_fraction_within_three_sigma(p):
    spec = SynthSpec("small_world", 10_000, p=p, rng_seed=11)
    edges, rewired = synth.small_world_edges(spec)
    e = len(edges)
    assert e == 19_800
    sigma = math.sqrt(e * p * (1 - p))
    assert abs(rewired - p * e) <= 3 * sigma


def test_small_world_p1_graph_is_valid():
    g = synth.gen_small_world(SynthSpec("small_world", 400, p=1.0, rng_seed=2))
    g.check_invariants()
    assert g.n_edges == synth.gen_regular(SynthSpec("regular", 400)).n_edges


def test_scale_free_tiny():
    g = synth.gen_scale_free(SynthSpec("scale_free", 5, m=1, rng_seed=0))
    assert g.n_edges == 4
    assert connected_components(g).count == 1


def test_scale_free_hubs():
    sf = synth.gen_scale_free(SynthSpec("scale_free", 10_000, m=2, rng_seed=3))
    rnd = synth.gen_random(SynthSpec("random", 10_000, rng_seed=3))
    deg = sf.degrees()
    assert deg.max() >= 5 * np.median(deg)
    assert deg.max() > rnd.degrees().max()


@pytest.mark.parametrize("topology", synth.TOPOLOGIES)
def test_determinism_and_grid_positions(topology):
    spec = SynthSpec(topology, 400, p=0.2, rng_seed=9)
    a, b = synth.generate(spec), synth.generate(spec)
    assert list(a.edges()) == list(b.edges())
    assert np.array_equal(a.coords, synth.grid_positions(400, 100.0))
    a.check_invariants()


def test_non_square_n():
    g = synth.gen_regular(SynthSpec("regular", 10))
    # side 4: rows of 4, 4, 2
    assert g.n_vertices == 10
    assert g.n_edges == len(synth.lattice_edges(10))
    assert g.n_edges == 3 + 3 + 1 + 4 + 2


def test_eight_neighbourhood():
    g = synth.gen_regular(SynthSpec("regular", 9, neighborhood=8))
    assert g.n_edges == 12 + 8
    assert g.edge_weight(0, 4) == pytest.approx(100 * math.sqrt(2))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(topology="hexagonal", n=100),
        dict(topology="regular", n=2),
        dict(topology="small_world", n=100, p=1.5),
        dict(topology="scale_free", n=100, m=0),
        dict(topology="regular", n=100, neighborhood=6),
        dict(topology="regular", n=100, spacing=0),
    ],
)
def test_config_invalid(kwargs):
    with pytest.raises(ConfigInvalid):
        SynthSpec(**kwargs)
