"""GeoJSON point-layer export of stored reports and pins."""

from __future__ import annotations

from datetime import datetime
from typing import Iterable, Mapping

from ..core import codec
from ..core.types import HazardReport, HazardType, MapItPin, PotholeAttrs


def export_layer(
    reports: Iterable[HazardReport],
    name: str = "hazards",
    hazard_type: HazardType | None = None,
    severity_min: int | None = None,
    since: datetime | None = None,
    verdict_matches: Mapping[str, bool] | None = None,
) -> dict:
    """Build a FeatureCollection of filtered reports at their corrected
    locations.

    Features are ordered by (created_at, report_id) so identical stores
    always serialize to identical bytes. ``verdict_matches`` marks each
    feature's ``verified`` property; reports without a verdict get null.
    """
    selected = []
    for report in reports:
        if hazard_type is not None and report.hazard_type is not hazard_type:
            continue
        if severity_min is not None:
            if not isinstance(report.attrs, PotholeAttrs) or report.attrs.severity < severity_min:
                continue
        if since is not None and report.created_at < since:
            continue
        selected.append(report)
    selected.sort(key=lambda r: (r.created_at, r.report_id))

    features = []
    for report in selected:
        severity = report.attrs.severity if isinstance(report.attrs, PotholeAttrs) else None
        verified = None
        if verdict_matches is not None:
            verified = verdict_matches.get(report.report_id)
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Point",
                    "coordinates": [report.corrected_location.lon, report.corrected_location.lat],
                },
                "properties": {
                    "report_id": report.report_id,
                    "hazard_type": report.hazard_type.value,
                    "severity": severity,
                    "verified": verified,
                    "created_at": codec.format_timestamp(report.created_at),
                },
            }
        )
    return {"type": "FeatureCollection", "name": name, "features": features}


def export_pin_layer(pins: Iterable[MapItPin], name: str = "mapit") -> dict:
    """FeatureCollection of quick map pins."""
    ordered = sorted(pins, key=lambda p: (p.created_at, p.pin_id))
    features = [
        {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [p.location.lon, p.location.lat]},
            "properties": {
                "pin_id": p.pin_id,
                "hazard_type": p.hazard_type.value,
                "created_at": codec.format_timestamp(p.created_at),
            },
        }
        for p in ordered
    ]
    return {"type": "FeatureCollection", "name": name, "features": features}


def layer_to_json(layer: dict) -> str:
    """Deterministic serialization of a feature collection."""
    return codec.canonical_dumps(layer)
