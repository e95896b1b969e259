"""Geodesy helpers: haversine distance, canvas projection, path interpolation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DegenerateBounds

EARTH_RADIUS_KM = 6371.0

# slack for ceil() so that float noise on exact multiples does not add a point
_CEIL_SLACK = 1e-10


class GeoPoint(NamedTuple):
    lat: float
    lon: float


def geodesic_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Great-circle distance in km between two ``(lat, lon)`` points.

    Spherical earth, radius 6371.0 km.
    """
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    h = (math.sin((lat2 - lat1) / 2.0) ** 2
         + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2.0) ** 2)
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


@dataclass(frozen=True)
class ProjectionSpec:
    """Linear map from geographic coordinates onto a (height, width) canvas.

    ``translation`` holds the geographic coordinate landing on canvas (0, 0),
    i.e. the north-west corner, so y grows southwards.
    """
    translation: tuple[float, float]
    scale: tuple[float, float]
    canvas: tuple[float, float]


def make_projection(bounds, canvas) -> ProjectionSpec:
    min_lat, min_lon, max_lat, max_lon = bounds
    height, width = canvas
    if not (max_lat > min_lat and max_lon > min_lon):
        raise DegenerateBounds(f"bounds have zero extent: {tuple(bounds)}")
    if height <= 0 or width <= 0:
        raise DegenerateBounds(f"canvas must be positive: {tuple(canvas)}")
    return ProjectionSpec(
        translation=(max_lat, min_lon),
        scale=(height / (max_lat - min_lat), width / (max_lon - min_lon)),
        canvas=(height, width),
    )


def geo_to_projected(p, spec: ProjectionSpec) -> tuple[float, float]:
    y = (spec.translation[0] - p[0]) * spec.scale[0]
    x = (p[1] - spec.translation[1]) * spec.scale[1]
    return (y, x)


def projected_to_geo(yx, spec: ProjectionSpec) -> GeoPoint:
    y, x = yx
    return GeoPoint(spec.translation[0] - y / spec.scale[0],
                    spec.translation[1] + x / spec.scale[1])


def _to_vector(p):
    lat, lon = math.radians(p[0]), math.radians(p[1])
    return (math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat))


def _slerp(a, b, fractions):
    """Points at the given arc-length fractions along the great circle a->b."""
    va, vb = _to_vector(a), _to_vector(b)
    dot = max(-1.0, min(1.0, sum(x * y for x, y in zip(va, vb))))
    omega = math.acos(dot)
    sin_omega = math.sin(omega)
    out = []
    for f in fractions:
        if sin_omega < 1e-15:
            # nearly coincident endpoints: plain linear blend is exact enough
            out.append(GeoPoint(a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f))
            continue
        wa = math.sin((1.0 - f) * omega) / sin_omega
        wb = math.sin(f * omega) / sin_omega
        x, y, z = (wa * p + wb * q for p, q in zip(va, vb))
        lat = math.degrees(math.atan2(z, math.hypot(x, y)))
        lon = math.degrees(math.atan2(y, x))
        out.append(GeoPoint(lat, lon))
    return out


def interpolate_path(waypoints, step_km: float) -> list[GeoPoint]:
    """Resample a polyline so consecutive points are at most ``step_km`` apart.

    Every original waypoint is kept (consecutive duplicates collapse to one)
    and each leg is cut into equal great-circle pieces.
    """
    if step_km <= 0:
        raise ValueError("step_km must be positive")
    if len(waypoints) < 2:
        raise ValueError("need at least two waypoints")
    out = [GeoPoint(*waypoints[0])]
    for a, b in zip(waypoints, waypoints[1:]):
        leg = geodesic_distance(a, b)
        if leg == 0.0:
            continue
        pieces = max(1, math.ceil(leg / step_km - _CEIL_SLACK))
        out.extend(_slerp(a, b, [k / pieces for k in range(1, pieces)]))
        out.append(GeoPoint(*b))
    return out


def delay_padding(delay_s: float, tick_s: float) -> int:
    """Number of repeated terminal points needed to hold an agent ``delay_s``."""
    if tick_s <= 0:
        raise ValueError("tick_s must be positive")
    if delay_s <= 0:
        return 0
    return math.ceil(delay_s / tick_s - _CEIL_SLACK)
