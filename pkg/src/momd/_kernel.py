"""Compiled best-first search over CSR adjacency.

Heuristic modes: 0 zero, 1 planar straight line to (tx, ty), 2 haversine to
(tx, ty), 3 precomputed per-vertex array. Frontier entries are (f, g, index)
tuples so ties resolve on smaller g, then smaller vertex index.
"""

import heapq
import math

import numpy as np
from numba import njit

from momd.geo import EARTH_RADIUS_M

H_ZERO = 0
H_PLANAR = 1
H_HAVERSINE = 2
H_ARRAY = 3


@njit(cache=True, nogil=True)
def _h(mode, coords, v, tx, ty, harr):
    if mode == 1:
        return math.hypot(tx - coords[v, 0], ty - coords[v, 1])
    if mode == 2:
        lat1 = math.radians(coords[v, 0])
        lat2 = math.radians(tx)
        s_dlat = math.sin((lat2 - lat1) * 0.5)
        s_dlon = math.sin(math.radians(ty - coords[v, 1]) * 0.5)
        h = s_dlat * s_dlat + math.cos(lat1) * math.cos(lat2) * s_dlon * s_dlon
        return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(min(1.0, h)))
    if mode == 3:
        return harr[v]
    return 0.0


@njit(cache=True, nogil=True)
def best_first(indptr, indices, weights, coords, origin, goal, mode, tx, ty, harr, reopen):
    """Return (distance, expansions, path as index array); path is empty if unreachable."""
    n = indptr.size - 1
    g = np.full(n, np.inf)
    parent = np.full(n, -1, np.int64)
    closed = np.zeros(n, np.bool_)
    g[origin] = 0.0
    heap = [(_h(mode, coords, origin, tx, ty, harr), 0.0, origin)]
    expansions = 0
    while len(heap) > 0:
        entry = heapq.heappop(heap)
        gv = entry[1]
        v = entry[2]
        if closed[v] or gv > g[v]:
            continue
        closed[v] = True
        expansions += 1
        if v == goal:
            hops = 0
            u = v
            while u != origin:
                u = parent[u]
                hops += 1
            path = np.empty(hops + 1, np.int64)
            u = v
            for k in range(hops, -1, -1):
                path[k] = u
                u = parent[u]
            return gv, expansions, path
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            ng = gv + weights[e]
            if ng < g[u]:
                if closed[u]:
                    if not reopen:
                        continue
                    closed[u] = False
                g[u] = ng
                parent[u] = v
                heapq.heappush(heap, (ng + _h(mode, coords, u, tx, ty, harr), ng, u))
    return np.inf, expansions, np.empty(0, np.int64)
