"""Complex-network measurements used to tell topologies apart."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np
from scipy.sparse import csgraph

from momd.errors import Disconnected, EmptyGraph
from momd.graph import Graph

_BFS_BATCH = 256


def degree_entropy(g: Graph, vertices=None) -> float:
    """Shannon entropy of the degree distribution, normalised to [0, 1].

    The normaliser is ``log`` of the number of distinct degree values seen, so
    a single degree value gives 0. ``vertices`` restricts the distribution to
    a subset (degrees are still measured in the full graph).
    """
    if g.n_vertices == 0:
        raise EmptyGraph("degree entropy of an empty graph")
    deg = g.degrees()
    if vertices is not None:
        deg = deg[[g.index(v) for v in vertices]]
        if deg.size == 0:
            raise EmptyGraph("no vertices selected")
    _, counts = np.unique(deg, return_counts=True)
    if counts.size == 1:
        return 0.0
    p = counts / counts.sum()
    return float(-(p * np.log(p)).sum() / math.log(counts.size))


def local_clustering(g: Graph) -> np.ndarray:
    """Per-vertex 2n/(k(k-1)); zero where k < 2."""
    a = g.to_scipy(unweighted=True)
    closed = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    k = g.degrees().astype(np.float64)
    out = np.zeros(g.n_vertices)
    ok = k >= 2
    out[ok] = 2.0 * closed[ok] / (k[ok] * (k[ok] - 1.0))
    return out


def clustering_coefficient(g: Graph) -> float:
    if g.n_vertices == 0:
        raise EmptyGraph("clustering of an empty graph")
    return float(local_clustering(g).mean())


def hop_distances(g: Graph, sources: np.ndarray) -> np.ndarray:
    """Unweighted BFS distances, one row per source index."""
    return csgraph.shortest_path(g.to_scipy(unweighted=True), directed=False, unweighted=True, indices=sources)


def _mean_hops(g: Graph, src: np.ndarray, dst: np.ndarray) -> float:
    total = 0.0
    order = np.argsort(src, kind="stable")
    src, dst = src[order], dst[order]
    uniq, start = np.unique(src, return_index=True)
    bounds = list(start) + [src.size]
    for b in range(0, uniq.size, _BFS_BATCH):
        rows = hop_distances(g, uniq[b:b + _BFS_BATCH])
        for r, k in enumerate(range(b, min(b + _BFS_BATCH, uniq.size))):
            d = rows[r, dst[bounds[k]:bounds[k + 1]]]
            if not np.all(np.isfinite(d)):
                raise Disconnected(f"vertex {int(g.ids[uniq[k]])} cannot reach a sampled partner")
            total += float(d.sum())
    return total / src.size


def mean_path_length_sampled(g: Graph, pairs: int, rng_seed: int = 0) -> float:
    """Mean shortest-path hop count over ``pairs`` uniformly drawn distinct vertex pairs."""
    n = g.n_vertices
    if n < 2:
        raise EmptyGraph("need at least two vertices")
    if pairs < 1:
        raise ValueError("pairs must be >= 1")
    rng = np.random.default_rng(rng_seed)
    src = rng.integers(0, n, size=pairs)
    dst = (src + rng.integers(1, n, size=pairs)) % n
    return _mean_hops(g, src, dst)


def mean_path_length(g: Graph) -> float:
    """Exact mean hop count over all unordered vertex pairs (small graphs only)."""
    n = g.n_vertices
    if n < 2:
        raise EmptyGraph("need at least two vertices")
    d = hop_distances(g, np.arange(n))
    iu = np.triu_indices(n, k=1)
    vals = d[iu]
    if not np.all(np.isfinite(vals)):
        raise Disconnected("graph is not connected")
    return float(vals.mean())


@dataclass(frozen=True)
class TopologyProfile:
    name: str
    n: int
    m: int
    entropy: float
    clustering: float
    max_degree: int
    median_degree: float
    hub_ratio: float
    mean_path_length: float | None = None
    sample_size: int = 0

    @classmethod
    def csv_header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def csv_row(self) -> list[str]:
        out = []
        for v in astuple(self):
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        return out


def profile(g: Graph, name: str = "", *, pairs: int = 0, rng_seed: int = 0) -> TopologyProfile:
    """All metrics for one graph; path length is sampled only when ``pairs`` > 0."""
    if g.n_vertices == 0:
        raise EmptyGraph("cannot profile an empty graph")
    deg = g.degrees()
    med = float(np.median(deg))
    mx = int(deg.max())
    return TopologyProfile(
        name=name,
        n=g.n_vertices,
        m=g.n_edges,
        entropy=degree_entropy(g),
        clustering=clustering_coefficient(g),
        max_degree=mx,
        median_degree=med,
        hub_ratio=mx / med if med > 0 else math.inf,
        mean_path_length=mean_path_length_sampled(g, pairs, rng_seed) if pairs > 0 else None,
        sample_size=pairs,
    )
