"""Offline-first client logic: image prep, outbox queue, sync, field simulator."""

from .images import DEFAULT_MAX_DIMENSION, DEFAULT_QUALITY, RawImage, make_test_image, prepare_image
from .outbox import OutboxEntry, OutboxQueue, SyncReport, TransportModel, item_key
from .simulate import (
    DEFAULT_EXTENT,
    FieldStudyConfig,
    FieldStudySample,
    largest_remainder,
    simulate_field_study,
    summarize_sample,
)

__all__ = [
    "DEFAULT_EXTENT",
    "DEFAULT_MAX_DIMENSION",
    "DEFAULT_QUALITY",
    "FieldStudyConfig",
    "FieldStudySample",
    "OutboxEntry",
    "OutboxQueue",
    "RawImage",
    "SyncReport",
    "TransportModel",
    "item_key",
    "largest_remainder",
    "make_test_image",
    "prepare_image",
    "simulate_field_study",
    "summarize_sample",
]
