"""Geodesic primitives on a spherical Earth model.

All distances are meters on a sphere of radius ``EARTH_RADIUS_M``; the
ellipsoidal error is irrelevant at the city scale this package targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationFailed

EARTH_RADIUS_M = 6_371_000.0


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84-style latitude/longitude pair in decimal degrees.

    The dataclass itself is a plain carrier: out-of-range values are
    representable so that validators can report them as data rather than
    faults. Use :func:`validate_point` before trusting a point.
    """

    lat: float
    lon: float


def validate_point(p: GeoPoint, prefix: str = "") -> list[str]:
    """Return every coordinate-range violation for ``p`` (empty if valid)."""
    tag = f"{prefix}." if prefix else ""
    violations = []
    if not (isinstance(p.lat, (int, float)) and math.isfinite(p.lat)):
        violations.append(f"{tag}lat not finite")
    elif not -90.0 <= p.lat <= 90.0:
        violations.append(f"{tag}lat out of range: {p.lat}")
    if not (isinstance(p.lon, (int, float)) and math.isfinite(p.lon)):
        violations.append(f"{tag}lon not finite")
    elif not -180.0 <= p.lon <= 180.0:
        violations.append(f"{tag}lon out of range: {p.lon}")
    return violations


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points in meters.

    Raises ValidationFailed if either point is out of range.
    """
    bad = validate_point(a, "a") + validate_point(b, "b")
    if bad:
        raise ValidationFailed(bad)
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def destination_point(start: GeoPoint, bearing_deg: float, distance_m: float) -> GeoPoint:
    """Point reached by travelling ``distance_m`` from ``start`` at ``bearing_deg``.

    Exact on the sphere, so ``haversine_distance(start, dest)`` reproduces
    ``distance_m`` up to float rounding.
    """
    bad = validate_point(start)
    if bad:
        raise ValidationFailed(bad)
    if distance_m < 0:
        raise ValidationFailed([f"distance must be non-negative: {distance_m}"])
    delta = distance_m / EARTH_RADIUS_M
    theta = math.radians(bearing_deg)
    phi1 = math.radians(start.lat)
    lam1 = math.radians(start.lon)
    phi2 = math.asin(
        math.sin(phi1) * math.cos(delta) + math.cos(phi1) * math.sin(delta) * math.cos(theta)
    )
    lam2 = lam1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(phi1),
        math.cos(delta) - math.sin(phi1) * math.sin(phi2),
    )
    lon = math.degrees(lam2)
    # normalize to [-180, 180]
    lon = (lon + 540.0) % 360.0 - 180.0
    return GeoPoint(lat=math.degrees(phi2), lon=lon)


@dataclass(frozen=True)
class BoundingBox:
    """Closed lat/lon box: boundary points count as inside."""

    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float

    def validate(self) -> list[str]:
        violations = validate_point(GeoPoint(self.min_lat, self.min_lon), "min")
        violations += validate_point(GeoPoint(self.max_lat, self.max_lon), "max")
        if not violations:
            if self.min_lat > self.max_lat:
                violations.append("bbox inverted: min_lat > max_lat")
            if self.min_lon > self.max_lon:
                violations.append("bbox inverted: min_lon > max_lon")
        return violations

    def contains(self, p: GeoPoint) -> bool:
        return (
            self.min_lat <= p.lat <= self.max_lat
            and self.min_lon <= p.lon <= self.max_lon
        )


# -- polygon primitives ------------------------------------------------
#
# A ring is a sequence of vertices (implicitly closed; a repeated final
# vertex is tolerated). Containment uses the even-odd rule with boundary
# points counting as inside.


def normalize_ring(vertices: "list[GeoPoint]") -> "list[GeoPoint]":
    """Drop a repeated closing vertex; require at least three distinct ones."""
    ring = list(vertices)
    if len(ring) >= 2 and ring[0] == ring[-1]:
        ring = ring[:-1]
    if len(ring) < 3:
        raise ValidationFailed(["polygon needs at least 3 distinct vertices"])
    return ring


def _on_segment(p: GeoPoint, a: GeoPoint, b: GeoPoint) -> bool:
    cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon)
    if cross != 0.0:
        return False
    return (
        min(a.lat, b.lat) <= p.lat <= max(a.lat, b.lat)
        and min(a.lon, b.lon) <= p.lon <= max(a.lon, b.lon)
    )


def point_in_ring(p: GeoPoint, vertices: "list[GeoPoint]") -> bool:
    """Even-odd containment test; boundary points count as inside."""
    ring = normalize_ring(vertices)
    n = len(ring)
    for i in range(n):
        if _on_segment(p, ring[i], ring[(i + 1) % n]):
            return True
    inside = False
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if (a.lat > p.lat) != (b.lat > p.lat):
            x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat)
            if p.lon < x:
                inside = not inside
    return inside


def _segments_cross(a1: GeoPoint, a2: GeoPoint, b1: GeoPoint, b2: GeoPoint) -> bool:
    """Proper intersection of two open segments."""

    def orient(p: GeoPoint, q: GeoPoint, r: GeoPoint) -> float:
        return (q.lon - p.lon) * (r.lat - p.lat) - (q.lat - p.lat) * (r.lon - p.lon)

    d1 = orient(b1, b2, a1)
    d2 = orient(b1, b2, a2)
    d3 = orient(a1, a2, b1)
    d4 = orient(a1, a2, b2)
    return d1 * d2 < 0 and d3 * d4 < 0


def validate_ring(vertices: "list[GeoPoint]") -> list[str]:
    """Check closure and self-intersection; returns violations."""
    try:
        ring = normalize_ring(vertices)
    except ValidationFailed as exc:
        return list(exc.violations)
    violations = []
    for v in ring:
        violations += validate_point(v)
    if violations:
        return violations
    n = len(ring)
    for i in range(n):
        a1, a2 = ring[i], ring[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent edges share a vertex
            b1, b2 = ring[j], ring[(j + 1) % n]
            if _segments_cross(a1, a2, b1, b2):
                violations.append(f"polygon self-intersects between edges {i} and {j}")
    return violations


def ring_bbox(vertices: "list[GeoPoint]") -> BoundingBox:
    ring = normalize_ring(vertices)
    return BoundingBox(
        min_lat=min(v.lat for v in ring),
        min_lon=min(v.lon for v in ring),
        max_lat=max(v.lat for v in ring),
        max_lon=max(v.lon for v in ring),
    )
