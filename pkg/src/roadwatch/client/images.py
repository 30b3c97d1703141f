"""Client-side image preparation: downscale, lossy re-encode, base64 transport.

Base64 is transport encoding, not compression; the byte savings come from
the lossy JPEG re-encode at a reduced dimension budget.
"""

from __future__ import annotations

import base64
import hashlib
import io
from dataclasses import dataclass

from PIL import Image, UnidentifiedImageError

from ..core.errors import DecodeError
from ..core.types import ImagePayload, Orientation

DEFAULT_MAX_DIMENSION = 1280
DEFAULT_QUALITY = 70


@dataclass(frozen=True)
class RawImage:
    """An image as captured on the device, before preparation."""

    width: int
    height: int
    orientation: Orientation
    data: bytes


def _round_half_up(x: float) -> int:
    return int(x + 0.5)


def prepare_image(
    raw: RawImage,
    max_dimension: int = DEFAULT_MAX_DIMENSION,
    quality: int = DEFAULT_QUALITY,
) -> ImagePayload:
    """Downscale ``raw`` so its longest side fits ``max_dimension``, re-encode
    as JPEG at ``quality``, and wrap as a transport-ready payload.

    Aspect ratio is preserved (round half-up); dimensions never increase.
    The payload's orientation is derived from the output dimensions, and
    ``source_digest`` fingerprints the original bytes.
    """
    if max_dimension < 16:
        raise ValueError(f"max_dimension must be >= 16, got {max_dimension}")
    if not 1 <= quality <= 100:
        raise ValueError(f"quality must be in [1, 100], got {quality}")
    try:
        img = Image.open(io.BytesIO(raw.data))
        img.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"cannot decode image: {exc}") from exc

    width, height = img.size
    longest = max(width, height)
    if longest > max_dimension:
        scale = max_dimension / longest
        width = max(1, _round_half_up(img.size[0] * scale))
        height = max(1, _round_half_up(img.size[1] * scale))
        img = img.resize((width, height), Image.LANCZOS)

    if img.mode != "RGB":
        img = img.convert("RGB")
    buf = io.BytesIO()
    img.save(buf, format="JPEG", quality=quality)
    encoded = base64.b64encode(buf.getvalue()).decode("ascii")

    orientation = Orientation.LANDSCAPE if width >= height else Orientation.PORTRAIT
    return ImagePayload(
        width=width,
        height=height,
        orientation=orientation,
        quality=quality,
        encoded_bytes=encoded,
        source_digest=hashlib.sha256(raw.data).hexdigest(),
    )


def make_test_image(width: int, height: int, color: tuple[int, int, int] = (120, 120, 120)) -> bytes:
    """Small solid-color JPEG for simulators and tests."""
    img = Image.new("RGB", (width, height), color)
    buf = io.BytesIO()
    img.save(buf, format="JPEG", quality=90)
    return buf.getvalue()
