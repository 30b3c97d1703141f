"""Named region polygons and per-region report coverage counts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from ..core.errors import ValidationFailed
from ..core.geo import GeoPoint, point_in_ring, validate_ring
from ..core.types import HazardReport

UNASSIGNED = "unassigned"


@dataclass(frozen=True)
class Region:
    name: str
    ring: tuple[GeoPoint, ...]


class RegionSet:
    """Ordered collection of named polygons, validated on construction.

    Overlaps are resolved by order: a point belongs to the first region
    that contains it.
    """

    def __init__(self, regions: Iterable[Region]):
        self.regions = list(regions)
        violations: list[str] = []
        seen: set[str] = set()
        for region in self.regions:
            if region.name in seen:
                violations.append(f"duplicate region name: {region.name}")
            seen.add(region.name)
            violations += [f"{region.name}: {v}" for v in validate_ring(list(region.ring))]
        if violations:
            raise ValidationFailed(violations)

    def __len__(self) -> int:
        return len(self.regions)

    def names(self) -> list[str]:
        return [r.name for r in self.regions]

    def locate(self, p: GeoPoint) -> str | None:
        for region in self.regions:
            if point_in_ring(p, list(region.ring)):
                return region.name
        return None

    @classmethod
    def from_geojson(cls, doc: Mapping) -> "RegionSet":
        """Load from a FeatureCollection of named Polygon features."""
        if doc.get("type") != "FeatureCollection":
            raise ValidationFailed(["regions: expected a FeatureCollection"])
        regions = []
        for i, feature in enumerate(doc.get("features", [])):
            geometry = feature.get("geometry") or {}
            if geometry.get("type") != "Polygon":
                raise ValidationFailed([f"regions[{i}]: only Polygon features are supported"])
            rings = geometry.get("coordinates") or []
            if len(rings) != 1:
                raise ValidationFailed([f"regions[{i}]: polygons with holes are not supported"])
            name = (feature.get("properties") or {}).get("name") or f"region-{i}"
            ring = tuple(GeoPoint(lat=float(lat), lon=float(lon)) for lon, lat in rings[0])
            regions.append(Region(name=str(name), ring=ring))
        return cls(regions)

    @classmethod
    def from_file(cls, path: str | Path) -> "RegionSet":
        return cls.from_geojson(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_geojson(self) -> dict:
        features = []
        for region in self.regions:
            ring = [[v.lon, v.lat] for v in region.ring]
            if ring and ring[0] != ring[-1]:
                ring.append(ring[0])
            features.append(
                {
                    "type": "Feature",
                    "geometry": {"type": "Polygon", "coordinates": [ring]},
                    "properties": {"name": region.name},
                }
            )
        return {"type": "FeatureCollection", "features": features}


def region_coverage(reports: Iterable[HazardReport], regions: RegionSet) -> dict[str, int]:
    """Count reports per region (corrected location, first containing region).

    Every region appears in the result, so uncovered regions show 0; reports
    outside all polygons land under ``unassigned``.
    """
    counts = {name: 0 for name in regions.names()}
    counts[UNASSIGNED] = 0
    for report in reports:
        name = regions.locate(report.corrected_location)
        counts[name if name is not None else UNASSIGNED] += 1
    return counts
