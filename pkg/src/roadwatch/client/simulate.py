"""Seeded field-study simulator.

Generates a synthetic corpus of full reports and quick map pins whose
marginals (type split, severity histogram, unlabeled-bump fraction) hit the
configured targets exactly via largest-remainder rounding, with GPS error
injected as a uniform displacement at a uniform bearing.
"""

from __future__ import annotations

import random
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Hashable, Mapping, Sequence

from ..core.errors import ConfigError
from ..core.geo import GeoPoint, destination_point, point_in_ring, ring_bbox, validate_ring
from ..core.types import (
    HazardReport,
    HazardType,
    MapItPin,
    PotholeAttrs,
    SEVERITY_SCALE,
    SpeedBumpAttrs,
)
from .images import DEFAULT_QUALITY, RawImage, make_test_image, prepare_image
from ..core.types import Orientation

# Rectangle roughly covering one metropolitan study area; reports land inside it.
DEFAULT_EXTENT: list[GeoPoint] = [
    GeoPoint(-1.44, 36.65),
    GeoPoint(-1.44, 37.10),
    GeoPoint(-1.16, 37.10),
    GeoPoint(-1.16, 36.65),
]

STUDY_START = datetime(2015, 3, 2, 6, 0, 0, tzinfo=timezone.utc)

DEFAULT_SEVERITY_HISTOGRAM: dict[int, float] = {1: 0.43, 2: 0.26, 3: 0.16, 4: 0.15}


def largest_remainder(fractions: Mapping[Hashable, float], total: int) -> dict[Hashable, int]:
    """Apportion ``total`` into integer counts proportional to ``fractions``.

    Floors first, then hands leftover units to the largest remainders
    (ties broken by mapping order), so the counts always sum to ``total``.
    """
    if total < 0:
        raise ConfigError(f"total must be non-negative: {total}")
    weight = sum(fractions.values())
    if weight <= 0:
        raise ConfigError("fractions must have positive sum")
    shares = {k: total * v / weight for k, v in fractions.items()}
    counts = {k: int(s) for k, s in shares.items()}
    leftover = total - sum(counts.values())
    order = sorted(fractions, key=lambda k: shares[k] - counts[k], reverse=True)
    for k in order[:leftover]:
        counts[k] += 1
    return counts


@dataclass
class FieldStudyConfig:
    """Knobs for one simulated collection campaign. Deterministic given seed."""

    n_full_reports: int = 101
    n_mapit: int = 153
    pothole_fraction_full: float = 0.62
    pothole_fraction_mapit: float = 0.42
    severity_histogram: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_SEVERITY_HISTOGRAM)
    )
    unlabeled_bump_fraction: float = 0.55
    gps_error_range_m: tuple[float, float] = (100.0, 250.0)
    extent: list[GeoPoint] = field(default_factory=lambda: list(DEFAULT_EXTENT))
    n_users: int = 30
    seed: int = 2015

    def validate(self) -> None:
        if self.n_full_reports < 0 or self.n_mapit < 0:
            raise ConfigError("report counts must be non-negative")
        for name, frac in (
            ("pothole_fraction_full", self.pothole_fraction_full),
            ("pothole_fraction_mapit", self.pothole_fraction_mapit),
            ("unlabeled_bump_fraction", self.unlabeled_bump_fraction),
        ):
            if not 0.0 <= frac <= 1.0:
                raise ConfigError(f"{name} out of [0, 1]: {frac}")
        lo, hi = SEVERITY_SCALE
        if set(self.severity_histogram) - set(range(lo, hi + 1)):
            raise ConfigError("severity_histogram has codes outside the severity scale")
        mass = sum(self.severity_histogram.values())
        if abs(mass - 1.0) > 1e-9:
            raise ConfigError(f"severity_histogram must sum to 1, got {mass}")
        if any(v < 0 for v in self.severity_histogram.values()):
            raise ConfigError("severity_histogram has negative mass")
        gmin, gmax = self.gps_error_range_m
        if gmin < 0 or gmax < gmin:
            raise ConfigError(f"bad gps_error_range_m: {self.gps_error_range_m}")
        if self.n_users < 1:
            raise ConfigError("n_users must be >= 1")
        bad = validate_ring(self.extent)
        if bad:
            raise ConfigError("extent polygon invalid: " + "; ".join(bad))


@dataclass(frozen=True)
class FieldStudySample:
    reports: list[HazardReport]
    pins: list[MapItPin]
    seed: int


def _sample_point(rng: random.Random, extent: list[GeoPoint]) -> GeoPoint:
    box = ring_bbox(extent)
    for _ in range(10_000):
        p = GeoPoint(rng.uniform(box.min_lat, box.max_lat), rng.uniform(box.min_lon, box.max_lon))
        if point_in_ring(p, extent):
            return p
    raise ConfigError("extent polygon too thin to sample from")


def _displaced(rng: random.Random, origin: GeoPoint, error_range: tuple[float, float]) -> GeoPoint:
    lo, hi = error_range
    # keep strictly inside the range so float round-trip through the
    # haversine check can never escape the closed interval
    eps = min(1e-6, (hi - lo) / 2) if hi > lo else 0.0
    distance = rng.uniform(lo + eps, hi - eps)
    bearing = rng.uniform(0.0, 360.0)
    return destination_point(origin, bearing, distance)


def _seeded_uuid(rng: random.Random) -> str:
    return str(uuid.UUID(int=rng.getrandbits(128), version=4))


ROAD_TYPES = ["residential", "arterial", "highway", "feeder", "unpaved"]


def simulate_field_study(
    cfg: FieldStudyConfig,
    user_ids: Sequence[str] | None = None,
) -> FieldStudySample:
    """Generate the configured corpus; marginal counts are exact.

    ``user_ids`` overrides the synthetic submitter pool (e.g. with ids from
    a real registration pass).
    """
    cfg.validate()
    rng = random.Random(cfg.seed)
    if user_ids is None:
        user_ids = [f"sim-user-{i:03d}" for i in range(cfg.n_users)]
    if not user_ids:
        raise ConfigError("need at least one user id")

    full_counts = largest_remainder(
        {
            HazardType.POTHOLE: cfg.pothole_fraction_full,
            HazardType.SPEED_BUMP: 1.0 - cfg.pothole_fraction_full,
        },
        cfg.n_full_reports,
    )
    severity_counts = largest_remainder(cfg.severity_histogram, full_counts[HazardType.POTHOLE])
    labeled_counts = largest_remainder(
        {"unlabeled": cfg.unlabeled_bump_fraction, "labeled": 1.0 - cfg.unlabeled_bump_fraction},
        full_counts[HazardType.SPEED_BUMP],
    )

    severities: list[int] = []
    for code in sorted(severity_counts):
        severities += [code] * severity_counts[code]
    labeled_flags = [False] * labeled_counts["unlabeled"] + [True] * labeled_counts["labeled"]
    types = [HazardType.POTHOLE] * full_counts[HazardType.POTHOLE] + [
        HazardType.SPEED_BUMP
    ] * full_counts[HazardType.SPEED_BUMP]
    rng.shuffle(severities)
    rng.shuffle(labeled_flags)
    rng.shuffle(types)

    reports: list[HazardReport] = []
    sev_iter = iter(severities)
    lab_iter = iter(labeled_flags)
    when = STUDY_START
    for i, hazard_type in enumerate(types):
        when = when + timedelta(minutes=rng.randint(5, 180))
        if hazard_type is HazardType.POTHOLE:
            attrs = PotholeAttrs(size=rng.randint(1, 3), severity=next(sev_iter))
        else:
            attrs = SpeedBumpAttrs(
                size=rng.randint(1, 3), bump_count=rng.randint(1, 3), labeled=next(lab_iter)
            )
        corrected = _sample_point(rng, cfg.extent)
        gps = _displaced(rng, corrected, cfg.gps_error_range_m)
        shade = (rng.randint(30, 225), rng.randint(30, 225), rng.randint(30, 225))
        raw = RawImage(
            width=64,
            height=48,
            orientation=Orientation.LANDSCAPE,
            data=make_test_image(64, 48, shade),
        )
        reports.append(
            HazardReport(
                report_id=f"r-{_seeded_uuid(rng)}",
                idempotency_key=_seeded_uuid(rng),
                user_id=rng.choice(list(user_ids)),
                hazard_type=hazard_type,
                attrs=attrs,
                road_type=rng.choice(ROAD_TYPES),
                gps_location=gps,
                corrected_location=corrected,
                image=prepare_image(raw, max_dimension=64, quality=DEFAULT_QUALITY),
                created_at=when,
            )
        )

    pin_counts = largest_remainder(
        {
            HazardType.POTHOLE: cfg.pothole_fraction_mapit,
            HazardType.SPEED_BUMP: 1.0 - cfg.pothole_fraction_mapit,
        },
        cfg.n_mapit,
    )
    pin_types = [HazardType.POTHOLE] * pin_counts[HazardType.POTHOLE] + [
        HazardType.SPEED_BUMP
    ] * pin_counts[HazardType.SPEED_BUMP]
    rng.shuffle(pin_types)

    pins: list[MapItPin] = []
    when = STUDY_START
    for hazard_type in pin_types:
        when = when + timedelta(minutes=rng.randint(2, 90))
        pins.append(
            MapItPin(
                pin_id=f"p-{_seeded_uuid(rng)}",
                user_id=rng.choice(list(user_ids)),
                hazard_type=hazard_type,
                location=_sample_point(rng, cfg.extent),
                created_at=when,
            )
        )

    return FieldStudySample(reports=reports, pins=pins, seed=cfg.seed)


def summarize_sample(sample: FieldStudySample) -> dict:
    """Marginal counts recomputed from the generated corpus itself."""
    reports = sample.reports
    potholes = [r for r in reports if r.hazard_type is HazardType.POTHOLE]
    bumps = [r for r in reports if r.hazard_type is HazardType.SPEED_BUMP]
    severity_hist = {code: 0 for code in range(SEVERITY_SCALE[0], SEVERITY_SCALE[1] + 1)}
    for r in potholes:
        severity_hist[r.attrs.severity] += 1
    unlabeled = sum(1 for r in bumps if not r.attrs.labeled)
    pin_potholes = sum(1 for p in sample.pins if p.hazard_type is HazardType.POTHOLE)
    return {
        "seed": sample.seed,
        "full_reports": len(reports),
        "full_potholes": len(potholes),
        "full_speed_bumps": len(bumps),
        "severity_histogram": severity_hist,
        "unlabeled_speed_bumps": unlabeled,
        "unlabeled_speed_bump_pct": round(100.0 * unlabeled / len(bumps)) if bumps else 0,
        "mapit_pins": len(sample.pins),
        "mapit_potholes": pin_potholes,
        "mapit_speed_bumps": len(sample.pins) - pin_potholes,
    }
