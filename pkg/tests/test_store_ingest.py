import json
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import pytest

from roadwatch.core import codec
from roadwatch.core.errors import UnknownUser, ValidationFailed
from roadwatch.core.geo import BoundingBox
from roadwatch.core.types import HazardType
from roadwatch.service import IngestionService, ReportStore


@pytest.fixture
def service(tmp_path):
    return IngestionService(ReportStore(tmp_path / "data"), salt="test-salt")


def _registered(service, report_factory, **kwargs):
    identity = service.register("+15550000001")
    return report_factory(user_id=identity.user_id, **kwargs)


def test_register_is_idempotent(service):
    a = service.register("+15550000001")
    b = service.register("+1 (555) 000-0001")
    assert a.user_id == b.user_id
    assert a.enrolled_at == b.enrolled_at  # first enrollment wins
    c = service.register("+15550000002")
    assert c.user_id != a.user_id


def test_register_rejects_empty():
    service = IngestionService(ReportStore(), salt="s")
    with pytest.raises(ValidationFailed):
        service.register("   ")


def test_stored_user_has_no_raw_phone(service, tmp_path):
    service.register("+15559876543")
    blob = (tmp_path / "data" / "store.json").read_text()
    assert "5559876543" not in blob
    assert "phone_digest" in blob


def test_submit_report_created_then_replayed(service, report_factory):
    report = _registered(service, report_factory)
    first = service.submit_report(report)
    assert first.created is True
    replay = service.submit_report(report)
    assert replay.created is False
    assert replay.id == first.id
    assert len(service.store.reports) == 1


def test_submit_requires_registration(service, report_factory):
    with pytest.raises(UnknownUser):
        service.submit_report(report_factory(user_id="ghost"))


def test_submit_validates(service, report_factory):
    report = _registered(service, report_factory, lat=95.0)
    with pytest.raises(ValidationFailed):
        service.submit_report(report)


def test_submit_accepts_wire_dict(service, report_factory):
    report = _registered(service, report_factory)
    ack = service.submit_report(codec.report_to_dict(report))
    assert ack.created is True


def test_shared_image_stored_once(service, report_factory, tiny_payload):
    identity = service.register("+15550000001")
    r1 = report_factory(user_id=identity.user_id, image=tiny_payload)
    r2 = report_factory(user_id=identity.user_id, image=tiny_payload)
    service.submit_report(r1)
    service.submit_report(r2)
    assert len(service.store.reports) == 2
    assert service.store.blob_count() == 1


def test_submit_mapit(service, pin_factory):
    identity = service.register("+15550000001")
    pin = pin_factory(user_id=identity.user_id)
    assert service.submit_mapit(pin).created is True
    assert service.submit_mapit(pin).created is False
    with pytest.raises(ValidationFailed):
        service.submit_mapit(pin_factory(lat=95.0, user_id=identity.user_id))


def test_query_reports_bbox_and_filters(service, report_factory):
    identity = service.register("+15550000001")
    inside = report_factory(user_id=identity.user_id, lat=-1.30, lon=36.80)
    boundary = report_factory(user_id=identity.user_id, lat=-1.40, lon=36.80)
    outside = report_factory(user_id=identity.user_id, lat=-0.5, lon=36.80)
    bump = report_factory(
        user_id=identity.user_id, lat=-1.31, lon=36.81, hazard_type=HazardType.SPEED_BUMP
    )
    severe = report_factory(user_id=identity.user_id, lat=-1.32, lon=36.82, severity=4)
    for r in (inside, boundary, outside, bump, severe):
        service.submit_report(r)

    box = BoundingBox(-1.40, 36.60, -1.20, 37.00)
    got = service.query_reports(box)
    ids = {r.report_id for r in got}
    assert inside.report_id in ids
    assert boundary.report_id in ids  # closed bounds
    assert outside.report_id not in ids

    only_potholes = service.query_reports(box, hazard_type=HazardType.POTHOLE)
    assert all(r.hazard_type is HazardType.POTHOLE for r in only_potholes)
    assert bump.report_id not in {r.report_id for r in only_potholes}

    severe_only = service.query_reports(box, severity_min=4)
    assert {r.report_id for r in severe_only} == {severe.report_id}

    with pytest.raises(ValidationFailed):
        service.query_reports(BoundingBox(-1.0, 36.0, -2.0, 37.0))


def test_query_order_stable(service, report_factory):
    identity = service.register("+15550000001")
    base = datetime(2015, 3, 2, tzinfo=timezone.utc)
    reports = [
        report_factory(user_id=identity.user_id, created_at=base, report_id=f"r-z{i}")
        for i in range(3)
    ]
    for r in reversed(reports):
        service.submit_report(r)
    got = service.query_reports(BoundingBox(-2.0, 36.0, -1.0, 37.0))
    assert [r.report_id for r in got] == sorted(r.report_id for r in reports)


def test_full_extent_query_returns_everything_once(service, report_factory):
    identity = service.register("+15550000001")
    for i in range(10):
        service.submit_report(
            report_factory(user_id=identity.user_id, lat=-1.30 - i * 0.001, lon=36.80)
        )
    got = service.query_reports(BoundingBox(-90, -180, 90, 180))
    assert len(got) == 10
    assert len({r.report_id for r in got}) == 10


def test_store_roundtrip_byte_identical(tmp_path, report_factory, pin_factory):
    data_dir = tmp_path / "data"
    service = IngestionService(ReportStore(data_dir), salt="s")
    identity = service.register("+15550000001")
    for i in range(5):
        service.submit_report(report_factory(user_id=identity.user_id, lat=-1.30 - i * 0.01))
    service.submit_mapit(pin_factory(user_id=identity.user_id))

    before = {
        r.report_id: codec.canonical_dumps(codec.report_to_dict(r))
        for r in service.store.all_reports()
    }
    reloaded = ReportStore(data_dir)
    after = {
        r.report_id: codec.canonical_dumps(codec.report_to_dict(r))
        for r in reloaded.all_reports()
    }
    assert before == after
    assert len(reloaded.pins) == 1
    assert reloaded.users  # identities persisted


def test_interrupted_write_leaves_consistent_store(tmp_path, report_factory):
    data_dir = tmp_path / "data"
    service = IngestionService(ReportStore(data_dir), salt="s")
    identity = service.register("+15550000001")
    service.submit_report(report_factory(user_id=identity.user_id))
    # a crash mid-write leaves only a temp file behind; the real store must
    # still load from the last complete state
    (data_dir / "store.tmp").write_text("{ half written", encoding="utf-8")
    reloaded = ReportStore(data_dir)
    assert len(reloaded.reports) == 1


def test_concurrent_resubmission_single_row(service, report_factory):
    report = _registered(service, report_factory)
    with ThreadPoolExecutor(max_workers=32) as pool:
        acks = list(pool.map(lambda _: service.submit_report(report), range(32)))
    assert len(service.store.reports) == 1
    assert len({a.id for a in acks}) == 1
    assert sum(1 for a in acks if a.created) == 1
