"""Verification-specific failures."""

from __future__ import annotations

from ..core.errors import DomainError


class SampleError(DomainError):
    """Batch sample size exceeds the available report pool."""


class UnknownTask(DomainError):
    """Annotation references a task id that does not exist."""


class DuplicateWorker(DomainError):
    """A worker tried to annotate the same task twice."""


class TaskFull(DomainError):
    """The task already holds its required number of annotations."""


class DurationExceeded(DomainError):
    """Annotation took longer than the task's time cap."""


class IneligibleWorker(DomainError):
    """Worker is flagged ineligible for annotation work."""


class EmptyAnnotations(DomainError):
    """Vote aggregation needs at least one annotation."""


class EmptyRatings(DomainError):
    """Median aggregation needs at least one rating."""


class ScaleMismatch(DomainError):
    """Ratings from different ordinal scales cannot be aggregated together."""


class EmptyBatch(DomainError):
    """Batch-level statistics need at least one element."""


class DegenerateRatings(DomainError):
    """Rating matrix has no variance to apportion (ICC undefined)."""


class ShapeError(DomainError):
    """Rating matrix is ragged or too small."""
