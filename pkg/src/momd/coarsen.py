"""Region construction and reversible contraction of a region into one super-vertex."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csgraph

from momd.errors import DegeneratePath
from momd.graph import Graph, _symmetric_csr


@dataclass(frozen=True)
class Region:
    seed: int
    radius: float
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v) -> bool:
        return v in self.members

    def intersects(self, other: "Region") -> bool:
        return not set(self.members).isdisjoint(other.members)


@dataclass(frozen=True)
class CollapseMap:
    """Everything needed to undo a collapse.

    ``boundary_edges`` holds one ``(external, member, weight)`` triple per
    original edge leaving the region, even where the collapsed graph merged
    several of them into a single super-vertex edge.
    """

    super_id: int
    members: tuple[int, ...]
    center: int
    position: tuple[float, float]
    boundary_edges: tuple[tuple[int, int, float], ...]
    internal_edges: tuple[tuple[int, int, float], ...]
    member_positions: tuple[tuple[float, float], ...]

    def entry_member(self, external: int) -> int:
        """Member whose original edge to ``external`` is lightest (smaller id on ties)."""
        best = None
        for ext, member, w in self.boundary_edges:
            if ext == external and (best is None or (w, member) < best):
                best = (w, member)
        if best is None:
            raise KeyError(f"{external} is not adjacent to the collapsed region")
        return best[1]


def build_region(g: Graph, seed: int, radius: float, *, network: bool = False) -> Region:
    """Vertices within ``radius`` meters of ``seed``.

    Distance is straight-line under the graph's metric, or shortest-path
    distance over the edges when ``network`` is set.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    i = g.index(seed)
    if network:
        d = csgraph.dijkstra(g.to_scipy(), directed=False, indices=i, limit=radius)
        inside = d <= radius
    else:
        d = g.metric.distance_many(g.coords[i], g.coords)
        inside = d <= radius
        inside[i] = True
    return Region(int(seed), float(radius), tuple(g.ids[inside].tolist()))


def select_center(g: Graph, region: Region) -> int:
    """Member minimising the summed straight-line distance to the other members."""
    members = region.members
    if not members:
        raise ValueError("empty region")
    if len(members) == 1:
        return members[0]
    pts = g.coords[[g.index(m) for m in members]]
    sums = np.empty(len(members))
    for k in range(len(members)):
        sums[k] = g.metric.distance_many(pts[k], pts).sum()
    # members are ascending, so argmin's first-hit rule breaks ties on smaller id
    return members[int(np.argmin(sums))]


def collapse(g: Graph, region: Region, center: int | None = None) -> tuple[Graph, CollapseMap]:
    """Replace the region's members by one fresh vertex placed at the center member.

    Untouched vertices keep their ids; the super-vertex id is one past the
    largest id in ``g``. Edges from members to outside vertices are moved onto
    the super-vertex with unchanged weights (parallel ones reduced to the
    lightest); edges inside the region disappear.
    """
    if center is None:
        center = select_center(g, region)
    n = g.n_vertices
    member_idx = np.array([g.index(m) for m in region.members], dtype=np.int64)
    inside = np.zeros(n, dtype=bool)
    inside[member_idx] = True
    center_i = g.index(center)

    src = np.repeat(np.arange(n), np.diff(g.indptr))
    dst, w = g.indices, g.weights
    internal = inside[src] & inside[dst] & (src < dst)
    leaving = inside[src] & ~inside[dst]
    untouched = ~inside[src] & ~inside[dst] & (src < dst)

    keep = ~inside
    new_index = np.full(n, -1, dtype=np.int64)
    new_index[keep] = np.arange(int(keep.sum()))
    super_index = int(keep.sum())
    super_id = int(g.ids[-1]) + 1

    a = np.concatenate([new_index[src[untouched]], np.full(int(leaving.sum()), super_index)])
    b = np.concatenate([new_index[dst[untouched]], new_index[dst[leaving]]])
    ww = np.concatenate([w[untouched], w[leaving]])
    indptr, indices, weights = _symmetric_csr(super_index + 1, a, b, ww)
    ids = np.append(g.ids[keep], super_id)
    coords = np.vstack([g.coords[keep], g.coords[center_i]])
    collapsed = Graph(ids, coords, indptr, indices, weights, g.metric)

    cmap = CollapseMap(
        super_id=super_id,
        members=tuple(region.members),
        center=int(center),
        position=(float(g.coords[center_i, 0]), float(g.coords[center_i, 1])),
        boundary_edges=tuple(
            zip(g.ids[dst[leaving]].tolist(), g.ids[src[leaving]].tolist(), w[leaving].tolist())
        ),
        internal_edges=tuple(
            zip(g.ids[src[internal]].tolist(), g.ids[dst[internal]].tolist(), w[internal].tolist())
        ),
        member_positions=tuple(map(tuple, g.coords[member_idx].tolist())),
    )
    return collapsed, cmap


def uncollapse(collapsed: Graph, cmap: CollapseMap) -> Graph:
    """Rebuild the pre-collapse graph from a collapsed graph and its map."""
    su, sv, sw = collapsed.edge_arrays()
    keep = (su != cmap.super_id) & (sv != cmap.super_id)
    edges = list(zip(su[keep].tolist(), sv[keep].tolist(), sw[keep].tolist()))
    edges.extend(cmap.internal_edges)
    edges.extend(cmap.boundary_edges)
    others = collapsed.ids != cmap.super_id
    ids = np.concatenate([collapsed.ids[others], np.array(cmap.members, dtype=np.int64)])
    coords = np.vstack([collapsed.coords[others], np.array(cmap.member_positions).reshape(-1, 2)])
    return Graph.from_edges(ids, coords, edges, collapsed.metric)


def recover_endpoints(
    map_o: CollapseMap, map_d: CollapseMap, collapsed_path: Sequence[int]
) -> tuple[int, int]:
    """True origin and destination behind a path between two super-vertices.

    The origin is the member that originally touched the path's first edge,
    the destination the member that touched its last edge.
    """
    path = list(collapsed_path)
    if len(path) < 2 or path[0] != map_o.super_id or path[-1] != map_d.super_id:
        raise ValueError("path must run from the origin super-vertex to the destination super-vertex")
    if len(path) < 3 or map_o.super_id == map_d.super_id:
        raise DegeneratePath("super-vertices are identical or directly adjacent")
    return map_o.entry_member(path[1]), map_d.entry_member(path[-2])
