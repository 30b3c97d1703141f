"""Exception types shared across the package."""

from __future__ import annotations

from typing import Iterable


class DomainError(Exception):
    """Base class for every domain-level failure."""


class ValidationFailed(DomainError):
    """Raised when input data violates one or more invariants.

    ``violations`` holds one human-readable message per broken rule.
    """

    def __init__(self, violations: Iterable[str] | str):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DuplicateKey(DomainError):
    """An idempotency key is already present in the target collection."""


class UnknownUser(DomainError):
    """Submission references a user that was never registered."""


class ConfigError(DomainError):
    """A configuration object is internally inconsistent."""


class DecodeError(DomainError):
    """Raw image bytes could not be decoded."""


class ConcurrentSyncError(DomainError):
    """A second sync was started on a queue that is already syncing."""
