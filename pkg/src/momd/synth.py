"""Synthetic benchmark networks laid out on a square grid.

Four topologies: a regular lattice, an edge-count-matched uniform random
graph, a rewired small-world lattice and a preferential-attachment scale-free
graph. All use planar coordinates with euclidean edge weights and are
deterministic for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from momd.errors import ConfigInvalid
from momd.graph import Graph, Metric

REGULAR = "regular"
RANDOM = "random"
SMALL_WORLD = "small_world"
SCALE_FREE = "scale_free"
TOPOLOGIES = (REGULAR, RANDOM, SMALL_WORLD, SCALE_FREE)


@dataclass(frozen=True)
class SynthSpec:
    topology: str
    n: int
    p: float = 0.0
    m: int = 2
    spacing: float = 100.0
    rng_seed: int = 0
    neighborhood: int = 4

    def __post_init__(self) -> None:
        if self.topology not in TOPOLOGIES:
            raise ConfigInvalid(f"unknown topology {self.topology!r}")
        if self.n < 4:
            raise ConfigInvalid("n must be at least 4")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigInvalid("p must lie in [0, 1]")
        if self.m < 1 or self.m >= self.n:
            raise ConfigInvalid("m must satisfy 1 <= m < n")
        if self.neighborhood not in (4, 8):
            raise ConfigInvalid("neighborhood must be 4 or 8")
        if not self.spacing > 0:
            raise ConfigInvalid("spacing must be positive")

    @property
    def side(self) -> int:
        return math.isqrt(self.n - 1) + 1


def grid_positions(n: int, spacing: float) -> np.ndarray:
    side = math.isqrt(n - 1) + 1
    i = np.arange(n)
    return np.column_stack([(i % side) * spacing, (i // side) * spacing]).astype(np.float64)


def lattice_edges(n: int, neighborhood: int = 4) -> list[tuple[int, int]]:
    """Grid lattice edges as ascending ``(u, v)`` pairs, ``u < v``."""
    side = math.isqrt(n - 1) + 1
    out = []
    for u in range(n):
        r, c = divmod(u, side)
        if c + 1 < side and u + 1 < n:
            out.append((u, u + 1))
        if u + side < n:
            out.append((u, u + side))
        if neighborhood == 8:
            if c + 1 < side and u + side + 1 < n:
                out.append((u, u + side + 1))
            if c > 0 and u + side - 1 < n:
                out.append((u, u + side - 1))
    out.sort()
    return out


def _build(spec: SynthSpec, edges) -> Graph:
    coords = grid_positions(spec.n, spec.spacing)
    if edges:
        u, v = (np.array(x, dtype=np.int64) for x in zip(*edges))
    else:
        u = v = np.zeros(0, dtype=np.int64)
    return Graph.from_edges(np.arange(spec.n), coords, (u, v, None), Metric.PLANAR)


def gen_regular(spec: SynthSpec) -> Graph:
    return _build(spec, lattice_edges(spec.n, spec.neighborhood))


def gen_random(spec: SynthSpec) -> Graph:
    """Uniform random pairs, drawn until the edge count matches the lattice's."""
    rng = np.random.default_rng(spec.rng_seed)
    target = len(lattice_edges(spec.n, spec.neighborhood))
    target = min(target, spec.n * (spec.n - 1) // 2)
    seen: set[tuple[int, int]] = set()
    edges = []
    while len(edges) < target:
        for a, b in rng.integers(0, spec.n, size=(max(64, target - len(edges)), 2)).tolist():
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            if key in seen:
                continue
            seen.add(key)
            edges.append(key)
            if len(edges) == target:
                break
    return _build(spec, edges)


def small_world_edges(spec: SynthSpec) -> tuple[list[tuple[int, int]], int]:
    """Rewired lattice edges and the number of rewirings performed.

    Each lattice edge ``(u, v)`` is visited once in ascending order and, with
    probability ``p``, ``v`` is swapped for a uniformly drawn vertex not
    already adjacent to ``u``. Draws that would give a self-loop or duplicate
    are repeated.
    """
    rng = np.random.default_rng(spec.rng_seed)
    lattice = lattice_edges(spec.n, spec.neighborhood)
    adj: list[set[int]] = [set() for _ in range(spec.n)]
    for u, v in lattice:
        adj[u].add(v)
        adj[v].add(u)
    rewired = 0
    for u, v in lattice:
        if rng.random() >= spec.p or len(adj[u]) >= spec.n - 1:
            continue
        while True:
            w = int(rng.integers(spec.n))
            if w != u and w not in adj[u]:
                break
        adj[u].discard(v)
        adj[v].discard(u)
        adj[u].add(w)
        adj[w].add(u)
        rewired += 1
    edges = sorted((u, v) for u in range(spec.n) for v in adj[u] if u < v)
    return edges, rewired


def gen_small_world(spec: SynthSpec) -> Graph:
    return _build(spec, small_world_edges(spec)[0])


def gen_scale_free(spec: SynthSpec) -> Graph:
    """Growth with preferential attachment from an ``(m+1)``-clique seed.

    Vertices take grid slots in insertion order.
    """
    rng = np.random.default_rng(spec.rng_seed)
    m = spec.m
    edges = [(a, b) for a in range(m + 1) for b in range(a + 1, m + 1)]
    # each vertex appears once per incident edge, so uniform draws are degree-proportional
    pool = [x for e in edges for x in e]
    for v in range(m + 1, spec.n):
        chosen: list[int] = []
        while len(chosen) < m:
            t = pool[int(rng.integers(len(pool)))]
            if t not in chosen:
                chosen.append(t)
        for t in chosen:
            edges.append((t, v))
            pool.append(t)
            pool.append(v)
    return _build(spec, edges)


def generate(spec: SynthSpec) -> Graph:
    return {
        REGULAR: gen_regular,
        RANDOM: gen_random,
        SMALL_WORLD: gen_small_world,
        SCALE_FREE: gen_scale_free,
    }[spec.topology](spec)
