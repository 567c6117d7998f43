"""Point-to-point search: A*, Dijkstra, and a dense Floyd-Warshall oracle."""

from __future__ import annotations

import heapq
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from momd import _kernel
from momd.errors import GraphTooLarge
from momd.graph import Graph, Metric

FOUND = "found"
UNREACHABLE = "unreachable"
ERROR = "error"
DEGENERATE = "degenerate"

FLOYD_WARSHALL_MAX_VERTICES = 2000

Heuristic = Callable[[int, int], float]
"""Maps ``(vertex, goal)`` to an estimate in meters."""


@dataclass(frozen=True)
class SearchNode:
    vertex: int
    g: float
    h: float
    parent: int | None = None

    @property
    def f(self) -> float:
        return self.g + self.h


@dataclass(frozen=True)
class SearchResult:
    status: str
    path: tuple[int, ...] = ()
    expansions: int = 0
    elapsed: float = 0.0
    distance: float = float("inf")
    trace: tuple[SearchNode, ...] = field(default=(), repr=False, compare=False)

    @property
    def hops(self) -> int:
        return max(len(self.path) - 1, 0)

    @property
    def found(self) -> bool:
        return self.status in (FOUND, DEGENERATE)


def _heuristic_args(g: Graph, goal_index: int, heuristic):
    """Translate a heuristic spec into kernel (mode, tx, ty, harr)."""
    empty = np.zeros(0)
    if heuristic is None or heuristic == "zero":
        return _kernel.H_ZERO, 0.0, 0.0, empty
    if heuristic == "straight_line":
        tx, ty = g.coords[goal_index]
        mode = _kernel.H_HAVERSINE if g.metric is Metric.GEOGRAPHIC else _kernel.H_PLANAR
        return mode, float(tx), float(ty), empty
    if callable(heuristic):
        goal = int(g.ids[goal_index])
        harr = np.array([heuristic(v, goal) for v in g.ids.tolist()], dtype=np.float64)
        return _kernel.H_ARRAY, 0.0, 0.0, harr
    raise ValueError(f"unsupported heuristic {heuristic!r}")


def astar(
    g: Graph,
    origin: int,
    goal: int,
    heuristic: str | Heuristic | None = "straight_line",
    *,
    reopen: bool = False,
) -> SearchResult:
    """A* from ``origin`` to ``goal``.

    ``heuristic`` is ``"straight_line"`` (distance to the goal's position under
    the graph's metric), ``None``/``"zero"``, or a callable ``h(vertex, goal)``.
    With ``reopen`` a closed vertex re-enters the frontier whenever a strictly
    shorter route to it turns up, which keeps results sensible when the
    heuristic overestimates.
    """
    t0 = time.perf_counter()
    oi, gi = g.index(origin), g.index(goal)
    mode, tx, ty, harr = _heuristic_args(g, gi, heuristic)
    dist, expansions, path = _kernel.best_first(
        g.indptr, g.indices, g.weights, g.coords, oi, gi, mode, tx, ty, harr, reopen
    )
    elapsed = time.perf_counter() - t0
    if path.size == 0:
        return SearchResult(UNREACHABLE, (), int(expansions), elapsed)
    return SearchResult(FOUND, tuple(g.ids[path].tolist()), int(expansions), elapsed, float(dist))


def dijkstra(g: Graph, origin: int, goal: int) -> SearchResult:
    return astar(g, origin, goal, heuristic=None)


def astar_traced(
    g: Graph,
    origin: int,
    goal: int,
    heuristic: str | Heuristic | None = "straight_line",
    *,
    reopen: bool = False,
) -> SearchResult:
    """Interpreted A* with the same ordering rules, recording each expanded node.

    Slow; meant for inspection and as a cross-check of the compiled kernel.
    """
    t0 = time.perf_counter()
    oi, gi = g.index(origin), g.index(goal)
    mode, tx, ty, harr = _heuristic_args(g, gi, heuristic)
    n = g.n_vertices

    def h(i: int) -> float:
        return float(_kernel._h.py_func(mode, g.coords, i, tx, ty, harr))

    best = [float("inf")] * n
    parent = [-1] * n
    closed = [False] * n
    best[oi] = 0.0
    frontier = [(h(oi), 0.0, oi)]
    trace: list[SearchNode] = []
    indptr, indices, weights = g.indptr.tolist(), g.indices.tolist(), g.weights.tolist()
    while frontier:
        f, gv, v = heapq.heappop(frontier)
        if closed[v] or gv > best[v]:
            continue
        closed[v] = True
        trace.append(
            SearchNode(int(g.ids[v]), gv, f - gv, None if parent[v] < 0 else int(g.ids[parent[v]]))
        )
        if v == gi:
            path = [v]
            while path[-1] != oi:
                path.append(parent[path[-1]])
            path.reverse()
            return SearchResult(
                FOUND, tuple(g.ids[path].tolist()), len(trace), time.perf_counter() - t0, gv, tuple(trace)
            )
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            ng = gv + weights[e]
            if ng < best[u]:
                if closed[u]:
                    if not reopen:
                        continue
                    closed[u] = False
                best[u] = ng
                parent[u] = v
                heapq.heappush(frontier, (ng + h(u), ng, u))
    return SearchResult(UNREACHABLE, (), len(trace), time.perf_counter() - t0, trace=tuple(trace))


def path_length(g: Graph, path: Sequence[int]) -> float:
    """Sum of edge weights along ``path``; raises ValueError on a missing edge."""
    total = 0.0
    for u, v in zip(path, path[1:]):
        w = g.edge_weight(u, v)
        if w is None:
            raise ValueError(f"no edge between {u} and {v}")
        total += w
    return total


def floyd_warshall(g: Graph) -> np.ndarray:
    """All-pairs shortest distances as a dense ``(n, n)`` matrix indexed by internal index."""
    n = g.n_vertices
    if n > FLOYD_WARSHALL_MAX_VERTICES:
        raise GraphTooLarge(f"{n} vertices exceeds the dense limit of {FLOYD_WARSHALL_MAX_VERTICES}")
    dist = np.full((n, n), np.inf)
    src = np.repeat(np.arange(n), np.diff(g.indptr))
    dist[src, g.indices] = g.weights
    np.fill_diagonal(dist, 0.0)
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    return dist


def floyd_warshall_region(g: Graph, origins: Sequence[int], destinations: Sequence[int]) -> np.ndarray:
    """Distances from each origin (rows) to each destination (columns); ``inf`` if unreachable."""
    dist = floyd_warshall(g)
    rows = [g.index(v) for v in origins]
    cols = [g.index(v) for v in destinations]
    return dist[np.ix_(rows, cols)]
