"""Contributor ranking by legitimate, unique reports."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Mapping

from ..exports.regions import RegionSet
from .dedup import DEFAULT_DEDUP_RADIUS_M, cluster_duplicates
from .store import ReportStore

_ENROLL_FALLBACK = datetime.max.replace(tzinfo=timezone.utc)


@dataclass(frozen=True)
class LeaderboardEntry:
    user_id: str
    unique_report_count: int
    regions_covered: int


def leaderboard(
    store: ReportStore,
    n: int,
    regions: RegionSet | None = None,
    verdict_matches: Mapping[str, bool] | None = None,
    dedup_radius_m: float = DEFAULT_DEDUP_RADIUS_M,
) -> list[LeaderboardEntry]:
    """Top ``n`` contributors by unique-report score.

    A user scores one point per duplicate cluster in which they submitted
    the earliest member, provided any existing verification verdict for
    that report confirms the claimed hazard type. Ties break on distinct
    regions covered, then earliest enrollment.

    ``verdict_matches`` maps report_id to whether its verdict matched;
    reports without an entry are treated as unverified (still countable).
    Quick map pins never score: they carry no photo to verify.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1: {n}")
    reports = {r.report_id: r for r in store.all_reports()}
    clusters = cluster_duplicates(list(reports.values()), radius_m=dedup_radius_m)

    scores: dict[str, int] = {}
    covered: dict[str, set[str]] = {}
    for cluster in clusters:
        first = reports[cluster.member_report_ids[0]]
        if verdict_matches is not None:
            matched = verdict_matches.get(first.report_id)
            if matched is False:
                continue
        scores[first.user_id] = scores.get(first.user_id, 0) + 1
        if regions is not None:
            name = regions.locate(first.corrected_location)
            if name is not None:
                covered.setdefault(first.user_id, set()).add(name)

    def enrolled_at(user_id: str) -> datetime:
        identity = store.get_user(user_id)
        return identity.enrolled_at if identity is not None else _ENROLL_FALLBACK

    entries = [
        LeaderboardEntry(
            user_id=user_id,
            unique_report_count=count,
            regions_covered=len(covered.get(user_id, ())),
        )
        for user_id, count in scores.items()
    ]
    entries.sort(
        key=lambda e: (
            -e.unique_report_count,
            -e.regions_covered,
            enrolled_at(e.user_id),
            e.user_id,
        )
    )
    return entries[:n]
