import random
from datetime import datetime, timedelta, timezone

import pytest

from roadwatch.core.geo import GeoPoint, destination_point, haversine_distance
from roadwatch.core.types import HazardType
from roadwatch.exports.regions import Region, RegionSet
from roadwatch.service import IngestionService, ReportStore, cluster_duplicates, leaderboard

ANCHOR = GeoPoint(-1.30, 36.80)


def _at(meters, bearing=90.0):
    return destination_point(ANCHOR, bearing, meters)


def test_two_potholes_10m_apart_merge(report_factory):
    a = report_factory(lat=ANCHOR.lat, lon=ANCHOR.lon)
    near = _at(10.0)
    b = report_factory(lat=near.lat, lon=near.lon)
    # oracle: brute-force pairwise distance confirms the link
    assert haversine_distance(a.corrected_location, b.corrected_location) == pytest.approx(
        10.0, abs=1e-6
    )
    clusters = cluster_duplicates([a, b], radius_m=25.0)
    assert len(clusters) == 1
    assert set(clusters[0].member_report_ids) == {a.report_id, b.report_id}


def test_mixed_types_never_merge(report_factory):
    a = report_factory(hazard_type=HazardType.POTHOLE)
    near = _at(10.0)
    b = report_factory(hazard_type=HazardType.SPEED_BUMP, lat=near.lat, lon=near.lon)
    clusters = cluster_duplicates([a, b], radius_m=25.0)
    assert len(clusters) == 2


def test_two_potholes_30m_apart_stay_separate(report_factory):
    a = report_factory(lat=ANCHOR.lat, lon=ANCHOR.lon)
    far = _at(30.0)
    b = report_factory(lat=far.lat, lon=far.lon)
    assert haversine_distance(a.corrected_location, b.corrected_location) == pytest.approx(
        30.0, abs=1e-6
    )
    clusters = cluster_duplicates([a, b], radius_m=25.0)
    assert len(clusters) == 2


def test_single_linkage_chains(report_factory):
    points = [_at(m) for m in (0.0, 20.0, 40.0)]
    reports = [report_factory(lat=p.lat, lon=p.lon) for p in points]
    clusters = cluster_duplicates(reports, radius_m=25.0)
    assert len(clusters) == 1  # 0-20 and 20-40 link; 0-40 rides the chain


def test_clustering_partitions_input(report_factory):
    rng = random.Random(3)
    reports = []
    for _ in range(60):
        p = _at(rng.uniform(0, 500), bearing=rng.uniform(0, 360))
        reports.append(
            report_factory(
                lat=p.lat,
                lon=p.lon,
                hazard_type=rng.choice(list(HazardType)),
            )
        )
    clusters = cluster_duplicates(reports, radius_m=40.0)
    counted = [rid for c in clusters for rid in c.member_report_ids]
    assert sorted(counted) == sorted(r.report_id for r in reports)
    for cluster in clusters:
        types = {
            next(r for r in reports if r.report_id == rid).hazard_type
            for rid in cluster.member_report_ids
        }
        assert types == {cluster.hazard_type}


def test_representative_is_earliest_member(report_factory):
    base = datetime(2015, 3, 2, tzinfo=timezone.utc)
    late = report_factory(created_at=base + timedelta(hours=1))
    near = _at(5.0)
    early = report_factory(lat=near.lat, lon=near.lon, created_at=base)
    clusters = cluster_duplicates([late, early], radius_m=25.0)
    assert clusters[0].member_report_ids[0] == early.report_id
    assert clusters[0].representative == early.corrected_location


def test_bad_radius_rejected(report_factory):
    with pytest.raises(ValueError):
        cluster_duplicates([report_factory()], radius_m=0.0)


# -- leaderboard ----------------------------------------------------------


def _service_with_users(tmp_path):
    service = IngestionService(ReportStore(tmp_path / "data"), salt="s")
    users = {name: service.register(f"+1555000{i:04d}") for i, name in enumerate(["a", "b", "c"])}
    return service, users


def test_leaderboard_counts_unique_reports(tmp_path, report_factory):
    service, users = _service_with_users(tmp_path)
    rng = random.Random(1)
    # user a: 5 spread-out reports; user b: 3
    for i in range(5):
        p = _at(200.0 * (i + 1))
        service.submit_report(report_factory(user_id=users["a"].user_id, lat=p.lat, lon=p.lon))
    for i in range(3):
        p = _at(200.0 * (i + 1), bearing=180.0)
        service.submit_report(report_factory(user_id=users["b"].user_id, lat=p.lat, lon=p.lon))
    entries = leaderboard(service.store, n=5)
    assert entries[0].user_id == users["a"].user_id
    assert entries[0].unique_report_count == 5
    assert entries[1].user_id == users["b"].user_id
    assert entries[1].unique_report_count == 3


def test_duplicate_cluster_credits_earliest_submitter(tmp_path, report_factory):
    service, users = _service_with_users(tmp_path)
    base = datetime(2015, 3, 2, tzinfo=timezone.utc)
    service.submit_report(
        report_factory(user_id=users["a"].user_id, created_at=base)
    )
    near = _at(5.0)
    service.submit_report(
        report_factory(
            user_id=users["b"].user_id,
            lat=near.lat,
            lon=near.lon,
            created_at=base + timedelta(minutes=10),
        )
    )
    entries = leaderboard(service.store, n=5)
    assert len(entries) == 1
    assert entries[0].user_id == users["a"].user_id
    assert entries[0].unique_report_count == 1


def test_contradicted_verdict_removes_credit(tmp_path, report_factory):
    service, users = _service_with_users(tmp_path)
    report = report_factory(user_id=users["a"].user_id)
    service.submit_report(report)
    entries = leaderboard(service.store, n=5, verdict_matches={report.report_id: False})
    assert entries == []
    entries = leaderboard(service.store, n=5, verdict_matches={report.report_id: True})
    assert entries[0].unique_report_count == 1


def test_region_tiebreak(tmp_path, report_factory):
    service, users = _service_with_users(tmp_path)
    regions = RegionSet(
        [
            Region(
                name=f"zone-{i}",
                ring=(
                    GeoPoint(-1.35 + 0.02 * i, 36.75),
                    GeoPoint(-1.35 + 0.02 * i, 36.95),
                    GeoPoint(-1.33 + 0.02 * i, 36.95),
                    GeoPoint(-1.33 + 0.02 * i, 36.75),
                ),
            )
            for i in range(4)
        ]
    )
    # both users score 2, but a covers two zones and b only one
    service.submit_report(report_factory(user_id=users["a"].user_id, lat=-1.34, lon=36.80))
    service.submit_report(report_factory(user_id=users["a"].user_id, lat=-1.32, lon=36.80))
    service.submit_report(report_factory(user_id=users["b"].user_id, lat=-1.30, lon=36.80))
    service.submit_report(report_factory(user_id=users["b"].user_id, lat=-1.302, lon=36.85))
    entries = leaderboard(service.store, n=5, regions=regions)
    assert entries[0].user_id == users["a"].user_id
    assert entries[0].regions_covered == 2
    assert entries[1].regions_covered == 1


def test_top_n_limit(tmp_path, report_factory):
    service = IngestionService(ReportStore(tmp_path / "data"), salt="s")
    for i in range(8):
        identity = service.register(f"+1555111{i:04d}")
        p = _at(300.0 * (i + 1))
        service.submit_report(report_factory(user_id=identity.user_id, lat=p.lat, lon=p.lon))
    assert len(leaderboard(service.store, n=5)) == 5
    with pytest.raises(ValueError):
        leaderboard(service.store, n=0)
