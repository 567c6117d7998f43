"""Distance primitives: haversine for lat/lon graphs, euclidean for planar ones.

Both come in a scalar flavour (``haversine``/``euclidean``) and a vectorised
flavour operating on ``(n, 2)`` coordinate arrays, used by region building
and center selection.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

EARTH_RADIUS_M = 6_371_000.0


class GeoPoint(NamedTuple):
    lat: float
    lon: float

    def is_valid(self) -> bool:
        return -90.0 <= self.lat <= 90.0 and -180.0 <= self.lon <= 180.0


class PlanarPoint(NamedTuple):
    x: float
    y: float

    def is_valid(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


def haversine(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in meters between two ``(lat, lon)`` pairs in degrees."""
    lat1 = math.radians(a[0])
    lat2 = math.radians(b[0])
    s_dlat = math.sin((lat2 - lat1) * 0.5)
    s_dlon = math.sin(math.radians(b[1] - a[1]) * 0.5)
    h = s_dlat * s_dlat + math.cos(lat1) * math.cos(lat2) * s_dlon * s_dlon
    return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(min(1.0, h)))


def euclidean(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def haversine_many(origin: tuple[float, float], coords: np.ndarray) -> np.ndarray:
    lat1 = math.radians(origin[0])
    lat2 = np.radians(coords[:, 0])
    s_dlat = np.sin((lat2 - lat1) * 0.5)
    s_dlon = np.sin(np.radians(coords[:, 1] - origin[1]) * 0.5)
    h = s_dlat * s_dlat + math.cos(lat1) * np.cos(lat2) * s_dlon * s_dlon
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.minimum(1.0, h)))


def euclidean_many(origin: tuple[float, float], coords: np.ndarray) -> np.ndarray:
    return np.hypot(coords[:, 0] - origin[0], coords[:, 1] - origin[1])
