"""Undirected weighted graph with vertex positions, plus connectivity helpers.

Vertices carry opaque non-negative integer ids kept in ascending order; the
adjacency is stored as CSR arrays over the *internal* index of each vertex so
the search kernels can walk it without Python objects. Base graphs produced by
the generators and by cleaning use dense ids (id == index); collapsed graphs
keep the original ids of untouched vertices and append a fresh id for the
super-vertex, so ids stay ascending without being dense.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from momd import geo
from momd.errors import EmptyGraph, InvalidGraph, UnknownVertex


class Metric(str, enum.Enum):
    GEOGRAPHIC = "geographic"
    PLANAR = "planar"

    def distance(self, a, b) -> float:
        if self is Metric.GEOGRAPHIC:
            return geo.haversine(a, b)
        return geo.euclidean(a, b)

    def distance_many(self, origin, coords: np.ndarray) -> np.ndarray:
        if self is Metric.GEOGRAPHIC:
            return geo.haversine_many(origin, coords)
        return geo.euclidean_many(origin, coords)

    def valid_positions(self, coords: np.ndarray) -> np.ndarray:
        finite = np.isfinite(coords).all(axis=1)
        if self is Metric.PLANAR:
            return finite
        with np.errstate(invalid="ignore"):
            return (
                finite
                & (np.abs(coords[:, 0]) <= 90.0)
                & (np.abs(coords[:, 1]) <= 180.0)
            )


class Graph:
    """Immutable undirected graph; many searches may read one instance concurrently."""

    __slots__ = ("ids", "coords", "indptr", "indices", "weights", "metric", "source_ids", "_lookup")

    def __init__(
        self,
        ids: np.ndarray,
        coords: np.ndarray,
        indptr: np.ndarray,
        indices: np.ndarray,
        weights: np.ndarray,
        metric: Metric | str,
        source_ids: np.ndarray | None = None,
    ) -> None:
        self.ids = np.asarray(ids, dtype=np.int64)
        self.coords = np.asarray(coords, dtype=np.float64).reshape(-1, 2)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.metric = Metric(metric)
        self.source_ids = None if source_ids is None else np.asarray(source_ids, dtype=np.int64)
        n = self.ids.size
        if self.coords.shape[0] != n or self.indptr.size != n + 1:
            raise InvalidGraph("ids, coords and indptr disagree on vertex count")
        if n and np.any(np.diff(self.ids) <= 0):
            raise InvalidGraph("vertex ids must be strictly increasing")
        dense = n == 0 or (self.ids[0] == 0 and self.ids[-1] == n - 1)
        self._lookup = None if dense else {int(v): i for i, v in enumerate(self.ids)}
        for arr in (self.ids, self.coords, self.indptr, self.indices, self.weights):
            arr.setflags(write=False)

    @classmethod
    def from_edges(
        cls,
        ids: Iterable[int],
        coords,
        edges: Iterable[tuple[int, int, float | None]] | tuple[np.ndarray, np.ndarray, np.ndarray | None],
        metric: Metric | str,
        *,
        source_ids=None,
    ) -> "Graph":
        """Build a graph from vertex ids, positions and an undirected edge list.

        ``edges`` is either an iterable of ``(u, v, w)`` triples or a tuple of
        three arrays. A ``None`` weight (or weight array) means "use the
        straight-line distance between the endpoints". Duplicate edges keep
        their minimum weight.
        """
        metric = Metric(metric)
        ids = np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64)
        coords = np.asarray(coords, dtype=np.float64).reshape(-1, 2)
        if ids.size != coords.shape[0]:
            raise InvalidGraph("ids and coords lengths differ")
        if ids.size and ids.min() < 0:
            raise InvalidGraph("vertex ids must be non-negative")
        order = np.argsort(ids, kind="stable")
        ids = ids[order]
        coords = coords[order]
        if source_ids is not None:
            source_ids = np.asarray(source_ids, dtype=np.int64)[order]
        if ids.size > 1 and np.any(np.diff(ids) == 0):
            raise InvalidGraph("duplicate vertex ids")

        if isinstance(edges, tuple) and len(edges) == 3 and isinstance(edges[0], np.ndarray):
            eu, ev, ew = edges
            eu = np.asarray(eu, dtype=np.int64)
            ev = np.asarray(ev, dtype=np.int64)
            ew = None if ew is None else np.asarray(ew, dtype=np.float64)
        else:
            triples = list(edges)
            eu = np.fromiter((t[0] for t in triples), dtype=np.int64, count=len(triples))
            ev = np.fromiter((t[1] for t in triples), dtype=np.int64, count=len(triples))
            raw = [t[2] if len(t) > 2 else None for t in triples]
            if any(w is None for w in raw):
                ew = np.array([np.nan if w is None else w for w in raw], dtype=np.float64)
            else:
                ew = np.asarray(raw, dtype=np.float64)

        a = _to_index(ids, eu)
        b = _to_index(ids, ev)
        if np.any(a == b):
            raise InvalidGraph("self-loops are not allowed")
        if ew is None:
            ew = np.full(a.size, np.nan)
        missing = np.isnan(ew)
        if missing.any():
            ew = ew.copy()
            ew[missing] = _segment_lengths(metric, coords, a[missing], b[missing])
        if np.any(~np.isfinite(ew)) or np.any(ew <= 0):
            raise InvalidGraph("edge weights must be positive and finite")
        indptr, indices, weights = _symmetric_csr(ids.size, a, b, ew)
        return cls(ids, coords, indptr, indices, weights, metric, source_ids)

    # ------------------------------------------------------------------ access

    @property
    def n_vertices(self) -> int:
        return int(self.ids.size)

    @property
    def n_edges(self) -> int:
        return int(self.indices.size // 2)

    def __len__(self) -> int:
        return self.n_vertices

    def __contains__(self, v) -> bool:
        try:
            self.index(v)
        except UnknownVertex:
            return False
        return True

    def __repr__(self) -> str:
        return f"Graph(n={self.n_vertices}, m={self.n_edges}, metric={self.metric.value})"

    def index(self, v) -> int:
        """Internal array index of vertex id ``v``."""
        if self._lookup is None:
            try:
                iv = int(v)
            except (TypeError, ValueError):
                raise UnknownVertex(v) from None
            if 0 <= iv < self.ids.size:
                return iv
            raise UnknownVertex(v)
        try:
            return self._lookup[int(v)]
        except (KeyError, TypeError, ValueError):
            raise UnknownVertex(v) from None

    def vertex_ids(self) -> list[int]:
        return self.ids.tolist()

    def position(self, v) -> tuple[float, float]:
        i = self.index(v)
        return (float(self.coords[i, 0]), float(self.coords[i, 1]))

    def neighbors(self, v) -> list[tuple[int, float]]:
        i = self.index(v)
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return list(zip(self.ids[self.indices[lo:hi]].tolist(), self.weights[lo:hi].tolist()))

    def edge_weight(self, u, v) -> float | None:
        i, j = self.index(u), self.index(v)
        lo, hi = int(self.indptr[i]), int(self.indptr[i + 1])
        k = lo + int(np.searchsorted(self.indices[lo:hi], j))
        if k < hi and self.indices[k] == j:
            return float(self.weights[k])
        return None

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once, as ``(u, v, w)`` with ``u < v``."""
        src, dst, w = self.edge_arrays()
        yield from zip(src.tolist(), dst.tolist(), w.tolist())

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        src = np.repeat(np.arange(self.n_vertices), np.diff(self.indptr))
        keep = src < self.indices
        return self.ids[src[keep]], self.ids[self.indices[keep]], self.weights[keep]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def to_scipy(self, unweighted: bool = False) -> sparse.csr_matrix:
        data = np.ones_like(self.weights) if unweighted else self.weights
        n = self.n_vertices
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def copy(self) -> "Graph":
        return Graph(
            self.ids.copy(),
            self.coords.copy(),
            self.indptr.copy(),
            self.indices.copy(),
            self.weights.copy(),
            self.metric,
            None if self.source_ids is None else self.source_ids.copy(),
        )

    def check_invariants(self, geometric: bool = True, rel_tol: float = 1e-9) -> None:
        """Raise InvalidGraph if symmetry, weight or self-loop invariants fail.

        With ``geometric`` set, also require every edge weight to be at least the
        straight-line distance between its endpoints.
        """
        n = self.n_vertices
        src = np.repeat(np.arange(n), np.diff(self.indptr))
        if np.any(src == self.indices):
            raise InvalidGraph("self-loop present")
        if np.any(~np.isfinite(self.weights)) or np.any(self.weights <= 0):
            raise InvalidGraph("non-positive or non-finite weight")
        fwd = self.to_scipy()
        if (fwd != fwd.T).nnz:
            raise InvalidGraph("adjacency is not symmetric")
        for i in range(n):
            row = self.indices[self.indptr[i]:self.indptr[i + 1]]
            if row.size > 1 and np.any(np.diff(row) <= 0):
                raise InvalidGraph("parallel edges present")
        if geometric and self.indices.size:
            straight = _segment_lengths(self.metric, self.coords, src, self.indices)
            if np.any(self.weights < straight * (1 - rel_tol) - 1e-9):
                raise InvalidGraph("edge shorter than straight-line distance")


def _to_index(ids: np.ndarray, vs: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(ids, vs)
    pos_c = np.minimum(pos, max(ids.size - 1, 0))
    if vs.size and (ids.size == 0 or np.any(ids[pos_c] != vs)):
        bad = vs[(pos >= ids.size) | (ids[pos_c] != vs)] if ids.size else vs
        raise InvalidGraph(f"edge endpoint {int(bad[0])} is not a declared vertex")
    return pos_c


def _segment_lengths(metric: Metric, coords: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    pa, pb = coords[a], coords[b]
    if metric is Metric.PLANAR:
        return np.hypot(pb[:, 0] - pa[:, 0], pb[:, 1] - pa[:, 1])
    lat1, lat2 = np.radians(pa[:, 0]), np.radians(pb[:, 0])
    s_dlat = np.sin((lat2 - lat1) * 0.5)
    s_dlon = np.sin(np.radians(pb[:, 1] - pa[:, 1]) * 0.5)
    h = s_dlat * s_dlat + np.cos(lat1) * np.cos(lat2) * s_dlon * s_dlon
    return 2.0 * geo.EARTH_RADIUS_M * np.arcsin(np.sqrt(np.minimum(1.0, h)))


def _symmetric_csr(n: int, a: np.ndarray, b: np.ndarray, w: np.ndarray):
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    order = np.lexsort((w, hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    if lo.size:
        first = np.ones(lo.size, dtype=bool)
        first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
        lo, hi, w = lo[first], hi[first], w[first]
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    ww = np.concatenate([w, w])
    order = np.lexsort((dst, src))
    src, dst, ww = src[order], dst[order], ww[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst, ww


@dataclass(frozen=True)
class ComponentLabeling:
    """Component index per vertex; index 0 is the largest component."""

    ids: np.ndarray
    labels: np.ndarray
    sizes: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.sizes)

    def label(self, v: int) -> int:
        i = int(np.searchsorted(self.ids, v))
        if i >= self.ids.size or self.ids[i] != v:
            raise UnknownVertex(v)
        return int(self.labels[i])

    def members(self, component: int) -> list[int]:
        return self.ids[self.labels == component].tolist()


def connected_components(g: Graph) -> ComponentLabeling:
    """Label components, ordered by descending size then by smallest vertex id."""
    n = g.n_vertices
    if n == 0:
        return ComponentLabeling(g.ids, np.zeros(0, dtype=np.int64), ())
    _, raw = csgraph.connected_components(g.to_scipy(), directed=False)
    sizes = np.bincount(raw)
    # first occurrence of each raw label is its smallest id, since ids ascend
    first_seen = np.full(sizes.size, n, dtype=np.int64)
    np.minimum.at(first_seen, raw, np.arange(n))
    rank = np.lexsort((first_seen, -sizes))
    relabel = np.empty_like(rank)
    relabel[rank] = np.arange(rank.size)
    return ComponentLabeling(g.ids, relabel[raw], tuple(int(s) for s in sizes[rank]))


def induced_subgraph(g: Graph, keep: np.ndarray, relabel: bool = True) -> Graph:
    """Subgraph on the vertices where boolean mask ``keep`` is set.

    With ``relabel`` the result gets dense ids and ``source_ids`` records the
    id each vertex had in ``g`` (composed with ``g.source_ids`` when present).
    """
    keep = np.asarray(keep, dtype=bool)
    new_index = np.full(g.n_vertices, -1, dtype=np.int64)
    new_index[keep] = np.arange(int(keep.sum()))
    src = np.repeat(np.arange(g.n_vertices), np.diff(g.indptr))
    sel = keep[src] & keep[g.indices] & (src < g.indices)
    a, b, w = new_index[src[sel]], new_index[g.indices[sel]], g.weights[sel]
    old_ids = g.ids[keep]
    if relabel:
        ids = np.arange(old_ids.size, dtype=np.int64)
        source = old_ids if g.source_ids is None else g.source_ids[keep]
    else:
        ids = old_ids
        source = None if g.source_ids is None else g.source_ids[keep]
    indptr, indices, weights = _symmetric_csr(ids.size, a, b, w)
    return Graph(ids, g.coords[keep], indptr, indices, weights, g.metric, source)


def giant_component(g: Graph) -> Graph:
    """Largest connected component, re-indexed densely.

    The returned graph's ``source_ids[i]`` is the id that vertex ``i`` had in
    the input (or in whatever the input was itself derived from).
    """
    if g.n_vertices == 0:
        raise EmptyGraph("graph has no vertices")
    comps = connected_components(g)
    return induced_subgraph(g, comps.labels == 0)


def degree(g: Graph, v: int) -> int:
    i = g.index(v)
    return int(g.indptr[i + 1] - g.indptr[i])
