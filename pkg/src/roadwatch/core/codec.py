"""Canonical JSON wire format for every domain type.

This schema (snake_case field names, UTC ISO-8601 timestamps) is both the
HTTP body format and the storage format, so encoding must be deterministic:
identical values always serialize to identical bytes.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any, Mapping

from .errors import ValidationFailed
from .geo import GeoPoint
from .types import (
    HazardAttrs,
    HazardReport,
    HazardType,
    ImagePayload,
    MapItPin,
    Orientation,
    PotholeAttrs,
    SpeedBumpAttrs,
    UserIdentity,
)


def canonical_dumps(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, compact separators, ASCII only."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def format_timestamp(ts: datetime) -> str:
    """UTC ISO-8601 with trailing Z, second precision."""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    ts = ts.astimezone(timezone.utc)
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    if not isinstance(text, str):
        raise ValidationFailed(["created_at must be an ISO-8601 string"])
    try:
        ts = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        raise ValidationFailed([f"bad timestamp: {text!r}"]) from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _require(d: Mapping[str, Any], key: str, kind: str) -> Any:
    if not isinstance(d, Mapping):
        raise ValidationFailed([f"{kind}: expected an object"])
    if key not in d:
        raise ValidationFailed([f"{kind}.{key}: missing"])
    return d[key]


def point_to_dict(p: GeoPoint) -> dict[str, float]:
    return {"lat": p.lat, "lon": p.lon}


def point_from_dict(d: Mapping[str, Any], kind: str = "point") -> GeoPoint:
    lat = _require(d, "lat", kind)
    lon = _require(d, "lon", kind)
    if not isinstance(lat, (int, float)) or isinstance(lat, bool):
        raise ValidationFailed([f"{kind}.lat: expected a number"])
    if not isinstance(lon, (int, float)) or isinstance(lon, bool):
        raise ValidationFailed([f"{kind}.lon: expected a number"])
    return GeoPoint(lat=float(lat), lon=float(lon))


def attrs_to_dict(attrs: HazardAttrs) -> dict[str, Any]:
    if isinstance(attrs, PotholeAttrs):
        return {"size": attrs.size, "severity": attrs.severity}
    return {"size": attrs.size, "bump_count": attrs.bump_count, "labeled": attrs.labeled}


def attrs_from_dict(d: Mapping[str, Any]) -> HazardAttrs:
    """Parse attributes by shape so a variant/type mismatch stays representable
    (validation reports it as a violation instead of a parse failure)."""
    if not isinstance(d, Mapping):
        raise ValidationFailed(["attrs: expected an object"])
    keys = set(d)
    if keys == {"size", "severity"}:
        return PotholeAttrs(size=int(d["size"]), severity=int(d["severity"]))
    if keys == {"size", "bump_count", "labeled"}:
        return SpeedBumpAttrs(
            size=int(d["size"]), bump_count=int(d["bump_count"]), labeled=bool(d["labeled"])
        )
    raise ValidationFailed([f"attrs: unrecognized field set {sorted(keys)}"])


def image_to_dict(img: ImagePayload) -> dict[str, Any]:
    return {
        "width": img.width,
        "height": img.height,
        "orientation": img.orientation.value,
        "quality": img.quality,
        "encoded_bytes": img.encoded_bytes,
        "source_digest": img.source_digest,
    }


def image_from_dict(d: Mapping[str, Any]) -> ImagePayload:
    try:
        orientation = Orientation(_require(d, "orientation", "image"))
    except ValueError:
        raise ValidationFailed([f"image.orientation: unknown value {d.get('orientation')!r}"]) from None
    return ImagePayload(
        width=int(_require(d, "width", "image")),
        height=int(_require(d, "height", "image")),
        orientation=orientation,
        quality=int(_require(d, "quality", "image")),
        encoded_bytes=str(_require(d, "encoded_bytes", "image")),
        source_digest=str(_require(d, "source_digest", "image")),
    )


def hazard_type_from_value(value: Any, kind: str = "hazard_type") -> HazardType:
    try:
        return HazardType(value)
    except ValueError:
        raise ValidationFailed([f"{kind}: unknown value {value!r}"]) from None


def report_to_dict(r: HazardReport) -> dict[str, Any]:
    return {
        "report_id": r.report_id,
        "idempotency_key": r.idempotency_key,
        "user_id": r.user_id,
        "hazard_type": r.hazard_type.value,
        "attrs": attrs_to_dict(r.attrs),
        "road_type": r.road_type,
        "gps_location": point_to_dict(r.gps_location),
        "corrected_location": point_to_dict(r.corrected_location),
        "image": image_to_dict(r.image),
        "created_at": format_timestamp(r.created_at),
    }


def report_from_dict(d: Mapping[str, Any]) -> HazardReport:
    return HazardReport(
        report_id=str(_require(d, "report_id", "report")),
        idempotency_key=str(_require(d, "idempotency_key", "report")),
        user_id=str(_require(d, "user_id", "report")),
        hazard_type=hazard_type_from_value(_require(d, "hazard_type", "report")),
        attrs=attrs_from_dict(_require(d, "attrs", "report")),
        road_type=str(_require(d, "road_type", "report")),
        gps_location=point_from_dict(_require(d, "gps_location", "report"), "gps_location"),
        corrected_location=point_from_dict(
            _require(d, "corrected_location", "report"), "corrected_location"
        ),
        image=image_from_dict(_require(d, "image", "report")),
        created_at=parse_timestamp(_require(d, "created_at", "report")),
    )


def pin_to_dict(p: MapItPin) -> dict[str, Any]:
    return {
        "pin_id": p.pin_id,
        "user_id": p.user_id,
        "hazard_type": p.hazard_type.value,
        "location": point_to_dict(p.location),
        "created_at": format_timestamp(p.created_at),
    }


def pin_from_dict(d: Mapping[str, Any]) -> MapItPin:
    return MapItPin(
        pin_id=str(_require(d, "pin_id", "pin")),
        user_id=str(_require(d, "user_id", "pin")),
        hazard_type=hazard_type_from_value(_require(d, "hazard_type", "pin")),
        location=point_from_dict(_require(d, "location", "pin"), "location"),
        created_at=parse_timestamp(_require(d, "created_at", "pin")),
    )


def identity_to_dict(u: UserIdentity) -> dict[str, Any]:
    return {
        "user_id": u.user_id,
        "phone_digest": u.phone_digest,
        "enrolled_at": format_timestamp(u.enrolled_at),
    }


def identity_from_dict(d: Mapping[str, Any]) -> UserIdentity:
    return UserIdentity(
        user_id=str(_require(d, "user_id", "user")),
        phone_digest=str(_require(d, "phone_digest", "user")),
        enrolled_at=parse_timestamp(_require(d, "enrolled_at", "user")),
    )
