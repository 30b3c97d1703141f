"""Phone-number anonymization and deterministic user identity derivation."""

from __future__ import annotations

import hashlib
import hmac
from datetime import datetime

from .errors import ValidationFailed
from .types import UserIdentity


def normalize_phone(phone: str) -> str:
    """Strip formatting from a phone number, keeping digits and a leading +.

    Raises ValidationFailed when nothing usable is left.
    """
    if not isinstance(phone, str):
        raise ValidationFailed(["phone must be a string"])
    stripped = phone.strip()
    plus = stripped.startswith("+")
    digits = "".join(c for c in stripped if c.isdigit())
    if not digits:
        raise ValidationFailed([f"phone has no digits: {phone!r}"])
    return ("+" if plus else "") + digits


def phone_digest(phone: str, salt: str) -> str:
    """Keyed one-way digest of a normalized phone number.

    Same phone + same salt always yields the same digest; the raw number
    cannot be recovered from it.
    """
    normalized = normalize_phone(phone)
    return hmac.new(salt.encode("utf-8"), normalized.encode("utf-8"), hashlib.sha256).hexdigest()


def derive_identity(phone: str, salt: str, enrolled_at: datetime) -> UserIdentity:
    """Build the deterministic identity record for a phone number."""
    digest = phone_digest(phone, salt)
    return UserIdentity(user_id="u" + digest[:16], phone_digest=digest, enrolled_at=enrolled_at)
