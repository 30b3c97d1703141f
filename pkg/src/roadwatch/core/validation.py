"""Invariant checks for reports, pins, and image payloads.

Validators return a list of violation messages rather than raising:
violations are data. Service layers wrap non-empty results into
:class:`~roadwatch.core.errors.ValidationFailed`.
"""

from __future__ import annotations

import base64
import binascii
import io

from .geo import validate_point
from .types import (
    HazardReport,
    HazardType,
    ImagePayload,
    MapItPin,
    Orientation,
    PotholeAttrs,
    SEVERITY_SCALE,
    SIZE_SCALE,
    SpeedBumpAttrs,
    attrs_match_type,
)


def _check_ordinal(value: int, scale: tuple[int, int], name: str) -> list[str]:
    lo, hi = scale
    if not isinstance(value, int) or isinstance(value, bool) or not lo <= value <= hi:
        return [f"{name} out of range [{lo}, {hi}]: {value!r}"]
    return []


def validate_attrs(attrs: object) -> list[str]:
    violations: list[str] = []
    if isinstance(attrs, PotholeAttrs):
        violations += _check_ordinal(attrs.size, SIZE_SCALE, "attrs.size")
        violations += _check_ordinal(attrs.severity, SEVERITY_SCALE, "attrs.severity")
    elif isinstance(attrs, SpeedBumpAttrs):
        violations += _check_ordinal(attrs.size, SIZE_SCALE, "attrs.size")
        if not isinstance(attrs.bump_count, int) or isinstance(attrs.bump_count, bool) or attrs.bump_count < 1:
            violations.append(f"attrs.bump_count must be >= 1: {attrs.bump_count!r}")
        if not isinstance(attrs.labeled, bool):
            violations.append("attrs.labeled must be a boolean")
    else:
        violations.append(f"attrs: unrecognized type {type(attrs).__name__}")
    return violations


def validate_image_payload(img: ImagePayload, check_bytes: bool = True) -> list[str]:
    """Check payload invariants; with ``check_bytes`` the base64 content is
    decoded and must be an image of the declared dimensions."""
    violations: list[str] = []
    if img.width < 1 or img.height < 1:
        violations.append(f"image dimensions must be positive: {img.width}x{img.height}")
    if not 1 <= img.quality <= 100:
        violations.append(f"image.quality out of range [1, 100]: {img.quality}")
    expected = Orientation.LANDSCAPE if img.width >= img.height else Orientation.PORTRAIT
    if img.orientation is not expected:
        violations.append(
            f"image.orientation inconsistent with dimensions: "
            f"{img.orientation.value} for {img.width}x{img.height}"
        )
    if not img.source_digest:
        violations.append("image.source_digest empty")
    if check_bytes:
        violations += _check_encoded_bytes(img)
    return violations


def _check_encoded_bytes(img: ImagePayload) -> list[str]:
    try:
        data = base64.b64decode(img.encoded_bytes.encode("ascii"), validate=True)
    except (binascii.Error, ValueError, UnicodeEncodeError):
        return ["image.encoded_bytes is not valid base64"]
    try:
        from PIL import Image, UnidentifiedImageError
    except ImportError:  # pragma: no cover - Pillow is a hard dependency
        return []
    try:
        with Image.open(io.BytesIO(data)) as decoded:
            if decoded.size != (img.width, img.height):
                return [
                    f"image.encoded_bytes decodes to {decoded.size[0]}x{decoded.size[1]}, "
                    f"declared {img.width}x{img.height}"
                ]
    except UnidentifiedImageError:
        return ["image.encoded_bytes does not decode to an image"]
    return []


def validate_report(r: HazardReport, check_image_bytes: bool = True) -> list[str]:
    """Return every invariant violation in ``r``; an empty list means valid."""
    violations: list[str] = []
    if not r.report_id:
        violations.append("report_id empty")
    if not r.idempotency_key:
        violations.append("idempotency_key empty")
    if not r.user_id:
        violations.append("user_id empty")
    if not isinstance(r.hazard_type, HazardType):
        violations.append(f"hazard_type: unknown value {r.hazard_type!r}")
    elif not attrs_match_type(r.hazard_type, r.attrs):
        violations.append(
            f"attrs/type mismatch: {type(r.attrs).__name__} for {r.hazard_type.value}"
        )
    violations += validate_attrs(r.attrs)
    violations += validate_point(r.gps_location, "gps_location")
    violations += validate_point(r.corrected_location, "corrected_location")
    violations += validate_image_payload(r.image, check_bytes=check_image_bytes)
    return violations


def validate_pin(p: MapItPin) -> list[str]:
    violations: list[str] = []
    if not p.pin_id:
        violations.append("pin_id empty")
    if not p.user_id:
        violations.append("user_id empty")
    if not isinstance(p.hazard_type, HazardType):
        violations.append(f"hazard_type: unknown value {p.hazard_type!r}")
    violations += validate_point(p.location, "location")
    return violations
