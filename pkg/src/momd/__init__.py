"""Multiple-origin / multiple-destination routing by region collapse."""

from momd.coarsen import CollapseMap, Region, build_region, collapse, recover_endpoints, select_center, uncollapse
from momd.errors import MomdError
from momd.geo import GeoPoint, PlanarPoint, euclidean, haversine
from momd.graph import ComponentLabeling, Graph, Metric, connected_components, degree, giant_component
from momd.search import SearchResult, astar, dijkstra, floyd_warshall_region
from momd.strategy import ComparisonRecord, MomdQuery, MomdResult, compare, run_brute_force, run_collapse

__all__ = [
    "CollapseMap",
    "ComparisonRecord",
    "ComponentLabeling",
    "GeoPoint",
    "Graph",
    "Metric",
    "MomdError",
    "MomdQuery",
    "MomdResult",
    "PlanarPoint",
    "Region",
    "SearchResult",
    "astar",
    "build_region",
    "collapse",
    "compare",
    "connected_components",
    "degree",
    "dijkstra",
    "euclidean",
    "floyd_warshall_region",
    "giant_component",
    "haversine",
    "recover_endpoints",
    "run_brute_force",
    "run_collapse",
    "select_center",
    "uncollapse",
]
