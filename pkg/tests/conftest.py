from __future__ import annotations

import itertools
from datetime import datetime, timedelta, timezone

import pytest

from roadwatch.client.images import RawImage, make_test_image, prepare_image
from roadwatch.core.geo import GeoPoint
from roadwatch.core.types import (
    HazardReport,
    HazardType,
    MapItPin,
    Orientation,
    PotholeAttrs,
    SpeedBumpAttrs,
)

BASE_TIME = datetime(2015, 3, 2, 8, 0, 0, tzinfo=timezone.utc)
_seq = itertools.count(1)


@pytest.fixture(scope="session")
def tiny_payload():
    raw = RawImage(32, 24, Orientation.LANDSCAPE, make_test_image(32, 24))
    return prepare_image(raw, max_dimension=32, quality=70)


@pytest.fixture
def report_factory(tiny_payload):
    def build(
        lat=-1.30,
        lon=36.80,
        hazard_type=HazardType.POTHOLE,
        severity=2,
        user_id="user-1",
        created_at=None,
        report_id=None,
        idempotency_key=None,
        attrs=None,
        gps=None,
        image=None,
    ):
        n = next(_seq)
        if attrs is None:
            attrs = (
                PotholeAttrs(size=2, severity=severity)
                if hazard_type is HazardType.POTHOLE
                else SpeedBumpAttrs(size=2, bump_count=1, labeled=False)
            )
        corrected = GeoPoint(lat, lon)
        return HazardReport(
            report_id=report_id or f"r{n:05d}",
            idempotency_key=idempotency_key or f"key-{n:05d}",
            user_id=user_id,
            hazard_type=hazard_type,
            attrs=attrs,
            road_type="residential",
            gps_location=gps or corrected,
            corrected_location=corrected,
            image=image or tiny_payload,
            created_at=created_at or (BASE_TIME + timedelta(minutes=n)),
        )

    return build


@pytest.fixture
def pin_factory():
    def build(lat=-1.30, lon=36.80, hazard_type=HazardType.SPEED_BUMP, user_id="user-1"):
        n = next(_seq)
        return MapItPin(
            pin_id=f"p{n:05d}",
            user_id=user_id,
            hazard_type=hazard_type,
            location=GeoPoint(lat, lon),
            created_at=BASE_TIME + timedelta(minutes=n),
        )

    return build
