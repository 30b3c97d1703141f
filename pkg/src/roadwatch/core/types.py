"""Domain value types for hazard reports, pins, images, and identities."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Union

from .geo import GeoPoint


class HazardType(str, Enum):
    """The two hazard classes a field report may claim."""

    POTHOLE = "pothole"
    SPEED_BUMP = "speed_bump"


class ImageCategory(str, Enum):
    """Closed five-way category an image annotator may choose.

    The first two values mirror :class:`HazardType` so a consensus can be
    compared directly against a field label.
    """

    POTHOLE = "pothole"
    SPEED_BUMP = "speed_bump"
    BOTH = "both"
    UNEVEN_OR_CRACKED = "uneven_or_cracked"
    SMOOTH = "smooth"


class Orientation(str, Enum):
    PORTRAIT = "portrait"
    LANDSCAPE = "landscape"


# Ordinal scales. Codes are inclusive [lo, hi] integer ranges.
SIZE_SCALE = (1, 3)       # small=1, medium=2, large=3
SEVERITY_SCALE = (1, 4)   # minor=1, moderate=2, major=3, severe=4

SIZE_LABELS = {1: "small", 2: "medium", 3: "large"}
SEVERITY_LABELS = {1: "minor", 2: "moderate", 3: "major", 4: "severe"}


@dataclass(frozen=True)
class PotholeAttrs:
    """Ordinal description of a pothole: size 1-3, severity 1-4."""

    size: int
    severity: int


@dataclass(frozen=True)
class SpeedBumpAttrs:
    """Description of a speed bump: size 1-3, bump count, painted/signed flag."""

    size: int
    bump_count: int
    labeled: bool


HazardAttrs = Union[PotholeAttrs, SpeedBumpAttrs]


@dataclass(frozen=True)
class ImagePayload:
    """A re-encoded hazard photo ready for transport.

    ``encoded_bytes`` is the base64 text of the lossy re-encode;
    ``source_digest`` is the content hash of the original capture.
    """

    width: int
    height: int
    orientation: Orientation
    quality: int
    encoded_bytes: str
    source_digest: str


@dataclass(frozen=True)
class HazardReport:
    """A full field report: type, attributes, photo, and both locations.

    ``corrected_location`` equals ``gps_location`` unless the submitter
    dragged the map marker to fix a bad GPS fix.
    """

    report_id: str
    idempotency_key: str
    user_id: str
    hazard_type: HazardType
    attrs: HazardAttrs
    road_type: str
    gps_location: GeoPoint
    corrected_location: GeoPoint
    image: ImagePayload
    created_at: datetime


@dataclass(frozen=True)
class MapItPin:
    """A lightweight location-only hazard claim."""

    pin_id: str
    user_id: str
    hazard_type: HazardType
    location: GeoPoint
    created_at: datetime


@dataclass(frozen=True)
class UserIdentity:
    """Anonymized submitter identity; the raw phone number is never kept."""

    user_id: str
    phone_digest: str
    enrolled_at: datetime


def attrs_match_type(hazard_type: HazardType, attrs: HazardAttrs) -> bool:
    if hazard_type is HazardType.POTHOLE:
        return isinstance(attrs, PotholeAttrs)
    return isinstance(attrs, SpeedBumpAttrs)
