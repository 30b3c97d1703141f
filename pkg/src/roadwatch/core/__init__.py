"""Shared domain types, validation, and geodesic utilities."""

from .errors import (
    ConcurrentSyncError,
    ConfigError,
    DecodeError,
    DomainError,
    DuplicateKey,
    UnknownUser,
    ValidationFailed,
)
from .geo import (
    EARTH_RADIUS_M,
    BoundingBox,
    GeoPoint,
    destination_point,
    haversine_distance,
    validate_point,
)
from .identity import derive_identity, normalize_phone, phone_digest
from .types import (
    HazardAttrs,
    HazardReport,
    HazardType,
    ImageCategory,
    ImagePayload,
    MapItPin,
    Orientation,
    PotholeAttrs,
    SEVERITY_LABELS,
    SEVERITY_SCALE,
    SIZE_LABELS,
    SIZE_SCALE,
    SpeedBumpAttrs,
    UserIdentity,
    attrs_match_type,
)
from .validation import validate_attrs, validate_image_payload, validate_pin, validate_report

__all__ = [
    "BoundingBox",
    "ConcurrentSyncError",
    "ConfigError",
    "DecodeError",
    "DomainError",
    "DuplicateKey",
    "EARTH_RADIUS_M",
    "GeoPoint",
    "HazardAttrs",
    "HazardReport",
    "HazardType",
    "ImageCategory",
    "ImagePayload",
    "MapItPin",
    "Orientation",
    "PotholeAttrs",
    "SEVERITY_LABELS",
    "SEVERITY_SCALE",
    "SIZE_LABELS",
    "SIZE_SCALE",
    "SpeedBumpAttrs",
    "UnknownUser",
    "UserIdentity",
    "ValidationFailed",
    "attrs_match_type",
    "derive_identity",
    "destination_point",
    "haversine_distance",
    "normalize_phone",
    "phone_digest",
    "validate_attrs",
    "validate_image_payload",
    "validate_pin",
    "validate_point",
    "validate_report",
]
