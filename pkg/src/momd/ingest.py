"""OSM XML to graph conversion, the compact text graph format, and OD pair files.

Compact graph file layout (space separated, one record per line)::

    V E metric
    id c1 c2        # V lines; lat lon for geographic graphs, x y for planar
    u v [w]         # E lines; w defaults to the straight-line length

Floats are written with ``repr`` so a read after a write gives back the
exact same bits.
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET
from collections.abc import Collection, Iterable
from typing import IO

import numpy as np

from momd.errors import FormatViolation, GraphTooSmall, InvalidGraph, MalformedXml, MissingNodeReference
from momd.graph import Graph, Metric, giant_component, induced_subgraph

PathLike = str | os.PathLike


def parse_osm(source: PathLike | IO[bytes], highways: Collection[str] | None = None) -> Graph:
    """Street graph from an OSM XML extract.

    Every way carrying a ``highway`` tag (restricted to ``highways`` when
    given) contributes an edge between each pair of consecutive nodes,
    weighted by haversine length. Vertex ids are the OSM node ids. Nodes with
    out-of-range coordinates are dropped together with their edges.
    """
    nodes: dict[int, tuple[float, float]] = {}
    ways: list[list[int]] = []
    try:
        for _, elem in ET.iterparse(source, events=("end",)):
            if elem.tag == "node":
                nodes[_osm_id(elem)] = _node_position(elem)
                elem.clear()
            elif elem.tag == "way":
                tags = {t.get("k"): t.get("v") for t in elem.iter("tag")}
                hw = tags.get("highway")
                if hw is not None and (highways is None or hw in highways):
                    ways.append([_osm_id(nd, "ref") for nd in elem.iter("nd")])
                elem.clear()
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from exc

    good = {k for k, (lat, lon) in nodes.items() if -90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0}
    used: set[int] = set()
    edges: list[tuple[int, int]] = []
    for refs in ways:
        for r in refs:
            if r not in nodes:
                raise MissingNodeReference(f"way references undeclared node {r}")
        for a, b in zip(refs, refs[1:]):
            if a == b:
                continue
            if a not in good or b not in good:
                continue
            edges.append((a, b))
            used.add(a)
            used.add(b)
    ids = np.array(sorted(used), dtype=np.int64)
    coords = np.array([nodes[i] for i in ids.tolist()], dtype=np.float64).reshape(-1, 2)
    if edges:
        u, v = (np.array(x, dtype=np.int64) for x in zip(*edges))
    else:
        u = v = np.zeros(0, dtype=np.int64)
    return Graph.from_edges(ids, coords, (u, v, None), Metric.GEOGRAPHIC)


def _osm_id(elem: ET.Element, attr: str = "id") -> int:
    raw = elem.get(attr)
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise MalformedXml(f"<{elem.tag}> has bad {attr}={raw!r}") from None
    if value < 0:
        raise MalformedXml(f"negative id {value} on <{elem.tag}>")
    return value


def _node_position(elem: ET.Element) -> tuple[float, float]:
    try:
        return float(elem.get("lat")), float(elem.get("lon"))
    except (TypeError, ValueError):
        return float("nan"), float("nan")


# --------------------------------------------------------------- compact format


def write_compact(g: Graph, path: PathLike) -> None:
    lines = [f"{g.n_vertices} {g.n_edges} {g.metric.value}"]
    for v, (a, b) in zip(g.ids.tolist(), g.coords.tolist()):
        lines.append(f"{v} {a!r} {b!r}")
    for u, v, w in g.edges():
        lines.append(f"{u} {v} {w!r}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_compact(path: PathLike) -> Graph:
    with open(path, encoding="ascii") as fh:
        lines = [ln.split() for ln in fh.read().splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines or len(lines[0]) != 3:
        raise FormatViolation(f"{path}: header must be 'V E metric'")
    try:
        nv, ne = int(lines[0][0]), int(lines[0][1])
        metric = Metric(lines[0][2])
    except ValueError as exc:
        raise FormatViolation(f"{path}: bad header: {exc}") from None
    body = lines[1:]
    if len(body) != nv + ne:
        raise FormatViolation(f"{path}: header declares {nv} vertices and {ne} edges, found {len(body)} records")
    try:
        vrec = body[:nv]
        if any(len(r) != 3 for r in vrec):
            raise FormatViolation(f"{path}: vertex records need 3 fields")
        ids = np.array([int(r[0]) for r in vrec], dtype=np.int64)
        coords = np.array([[float(r[1]), float(r[2])] for r in vrec], dtype=np.float64).reshape(-1, 2)
        erec = body[nv:]
        if any(len(r) not in (2, 3) for r in erec):
            raise FormatViolation(f"{path}: edge records need 2 or 3 fields")
        u = np.array([int(r[0]) for r in erec], dtype=np.int64)
        v = np.array([int(r[1]) for r in erec], dtype=np.int64)
        w = np.array([float(r[2]) if len(r) == 3 else np.nan for r in erec], dtype=np.float64)
    except ValueError as exc:
        raise FormatViolation(f"{path}: {exc}") from None
    try:
        g = Graph.from_edges(ids, coords, (u, v, w), metric)
    except InvalidGraph as exc:
        raise FormatViolation(f"{path}: {exc}") from None
    if g.n_edges != ne:
        raise FormatViolation(f"{path}: duplicate edge records")
    return g


def write_id_map(g: Graph, path: PathLike) -> None:
    """Persist ``new old`` id pairs for a re-indexed graph."""
    if g.source_ids is None:
        raise ValueError("graph carries no source id map")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for new, old in zip(g.ids.tolist(), g.source_ids.tolist()):
            fh.write(f"{new} {old}\n")


# --------------------------------------------------------------------- OD pairs


def sample_od_pairs(g: Graph, n: int, rng_seed: int) -> list[tuple[int, int]]:
    """``n`` ordered vertex pairs drawn uniformly with origin != destination."""
    if g.n_vertices < 2:
        raise GraphTooSmall("need at least two vertices to sample OD pairs")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(rng_seed)
    o = rng.integers(0, g.n_vertices, size=n)
    d = (o + rng.integers(1, g.n_vertices, size=n)) % g.n_vertices
    return list(zip(g.ids[o].tolist(), g.ids[d].tolist()))


def write_od(pairs: Iterable[tuple[int, int]], path: PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for o, d in pairs:
            fh.write(f"{o} {d}\n")


def read_od(path: PathLike, limit: int | None = None) -> list[tuple[int, int]]:
    pairs = []
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise FormatViolation(f"{path}:{lineno}: expected 'origin destination'")
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise FormatViolation(f"{path}:{lineno}: non-integer vertex id") from None
            if limit is not None and len(pairs) >= limit:
                break
    return pairs


def clean(g: Graph) -> Graph:
    """Drop invalid positions, then keep the largest connected component."""
    ok = g.metric.valid_positions(g.coords)
    if not ok.all():
        g = induced_subgraph(g, ok, relabel=False)
    return giant_component(g)
