"""Collapse and brute-force strategies for region-to-region routing, and their comparison."""

from __future__ import annotations

import math
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace

from momd.coarsen import CollapseMap, Region, build_region, collapse, recover_endpoints
from momd.graph import Graph
from momd.search import DEGENERATE, FOUND, UNREACHABLE, SearchResult, astar, dijkstra, path_length

COLLAPSE = "collapse"
BRUTE_FORCE = "brute_force"

OPTIMAL_TOL_M = 1e-6


@dataclass(frozen=True)
class MomdQuery:
    origin_seed: int
    destination_seed: int
    radius: float


@dataclass(frozen=True)
class MomdResult:
    strategy: str
    query: MomdQuery
    search: SearchResult
    searches_executed: int
    origin_size: int
    destination_size: int

    @property
    def collapsed_node_count(self) -> int:
        if self.strategy != COLLAPSE:
            return 0
        return self.origin_size + self.destination_size

    @property
    def true_endpoints(self) -> tuple[int, int] | None:
        if not self.search.path:
            return None
        return self.search.path[0], self.search.path[-1]


def _bridge(g: Graph, map_o: CollapseMap, destination: Region) -> tuple[int, int]:
    """Lightest original edge joining the two regions, as (origin member, destination member)."""
    dest = set(destination.members)
    w, o, d = min((w, member, ext) for ext, member, w in map_o.boundary_edges if ext in dest)
    return o, d


def run_collapse(g: Graph, q: MomdQuery, *, network_regions: bool = False) -> MomdResult:
    """One A* between the collapsed origin and destination regions.

    The returned path runs over the original graph from the recovered true
    origin to the recovered true destination, and its distance is re-measured
    on original edges. Overlapping regions fall back to Dijkstra between the
    seeds and are reported with status ``degenerate``. ``elapsed`` covers
    region building and contraction as well as the search.
    """
    t0 = time.perf_counter()
    ro = build_region(g, q.origin_seed, q.radius, network=network_regions)
    rd = build_region(g, q.destination_seed, q.radius, network=network_regions)
    sizes = (len(ro), len(rd))
    if ro.intersects(rd):
        s = dijkstra(g, q.origin_seed, q.destination_seed)
        status = DEGENERATE if s.status == FOUND else s.status
        s = replace(s, status=status, elapsed=time.perf_counter() - t0)
        return MomdResult(COLLAPSE, q, s, 1, *sizes)

    g1, map_o = collapse(g, ro)
    g2, map_d = collapse(g1, rd)
    s = astar(g2, map_o.super_id, map_d.super_id, reopen=True)
    if s.status != FOUND:
        return MomdResult(COLLAPSE, q, replace(s, elapsed=time.perf_counter() - t0), 1, *sizes)
    if len(s.path) == 2:
        path = _bridge(g, map_o, rd)
    else:
        o, d = recover_endpoints(map_o, map_d, s.path)
        path = (o, *s.path[1:-1], d)
    s = SearchResult(FOUND, tuple(path), s.expansions, time.perf_counter() - t0, path_length(g, path))
    return MomdResult(COLLAPSE, q, s, 1, *sizes)


def run_brute_force(g: Graph, q: MomdQuery, *, network_regions: bool = False) -> MomdResult:
    """Independent A* for every (origin member, destination member) pair; keep the shortest.

    Expansions and elapsed time are summed over all searches. Unreachable
    pairs are skipped; the result is unreachable only if every pair is.
    """
    t0 = time.perf_counter()
    ro = build_region(g, q.origin_seed, q.radius, network=network_regions)
    rd = build_region(g, q.destination_seed, q.radius, network=network_regions)
    best: SearchResult | None = None
    expansions = 0
    count = 0
    for o in ro.members:
        for d in rd.members:
            s = astar(g, o, d)
            expansions += s.expansions
            count += 1
            if s.status == FOUND and (best is None or s.distance < best.distance):
                best = s
    elapsed = time.perf_counter() - t0
    if best is None:
        result = SearchResult(UNREACHABLE, (), expansions, elapsed)
    else:
        result = replace(best, expansions=expansions, elapsed=elapsed)
    return MomdResult(BRUTE_FORCE, q, result, count, len(ro), len(rd))


@dataclass(frozen=True)
class ComparisonRecord:
    query: MomdQuery
    optimal_distance: float
    collapse_distance: float
    status: str = FOUND

    @property
    def error(self) -> float:
        return self.collapse_distance - self.optimal_distance

    @property
    def is_optimal(self) -> bool:
        return self.error <= OPTIMAL_TOL_M

    @property
    def included(self) -> bool:
        """Whether the record counts toward accuracy and error statistics."""
        return self.status == FOUND and math.isfinite(self.error)


@dataclass(frozen=True)
class ComparisonSummary:
    n_queries: int
    n_included: int
    excluded: int
    accuracy: float
    mean_error_all: float
    mean_error_nonoptimal: float
    max_error: float

    def as_dict(self) -> dict[str, float | int]:
        return dict(self.__dict__)


def compare_results(collapse_result: MomdResult, brute_result: MomdResult) -> ComparisonRecord:
    cs, bs = collapse_result.search, brute_result.search
    if cs.status == DEGENERATE:
        status = DEGENERATE
    elif cs.status == FOUND and bs.status == FOUND:
        status = FOUND
    else:
        status = cs.status if cs.status != FOUND else bs.status
    return ComparisonRecord(collapse_result.query, bs.distance, cs.distance, status)


def summarize_errors(errors: Sequence[float], excluded: int = 0) -> ComparisonSummary:
    """Accuracy and error statistics over per-query errors (collapse minus optimum)."""
    n = len(errors)
    nonopt = [e for e in errors if e > OPTIMAL_TOL_M]
    return ComparisonSummary(
        n_queries=n + excluded,
        n_included=n,
        excluded=excluded,
        accuracy=(n - len(nonopt)) / n if n else float("nan"),
        mean_error_all=sum(errors) / n if n else float("nan"),
        mean_error_nonoptimal=sum(nonopt) / len(nonopt) if nonopt else 0.0,
        max_error=max(errors) if n else float("nan"),
    )


def summarize(records: Sequence[ComparisonRecord]) -> ComparisonSummary:
    included = [r.error for r in records if r.included]
    return summarize_errors(included, excluded=len(records) - len(included))


def compare(
    g: Graph, queries: Iterable[tuple[int, int] | MomdQuery], radius: float
) -> tuple[list[ComparisonRecord], ComparisonSummary]:
    """Run both strategies on every query and score the collapse result against the optimum.

    Queries whose regions overlap (degenerate) or that are unreachable are kept
    in the record list but left out of the summary; ``summary.excluded`` counts them.
    """
    records = []
    for q in queries:
        if not isinstance(q, MomdQuery):
            q = MomdQuery(int(q[0]), int(q[1]), radius)
        records.append(compare_results(run_collapse(g, q), run_brute_force(g, q)))
    return records, summarize(records)
