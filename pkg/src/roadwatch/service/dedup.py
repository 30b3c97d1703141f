"""Spatial deduplication of reports via single-linkage clustering."""

from __future__ import annotations

from dataclasses import dataclass

from ..core.geo import GeoPoint, haversine_distance
from ..core.types import HazardReport, HazardType

DEFAULT_DEDUP_RADIUS_M = 25.0


@dataclass(frozen=True)
class DuplicateCluster:
    """A group of same-type reports judged to describe one physical hazard.

    The representative is the earliest member's corrected location. Under
    single linkage a long chain can place a member farther than the link
    radius from the representative; members are always within the radius of
    at least one other member.
    """

    cluster_id: str
    hazard_type: HazardType
    member_report_ids: tuple[str, ...]
    representative: GeoPoint


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def cluster_duplicates(
    reports: list[HazardReport], radius_m: float = DEFAULT_DEDUP_RADIUS_M
) -> list[DuplicateCluster]:
    """Partition reports into same-type clusters linked at ``radius_m``.

    Every report lands in exactly one cluster. Deterministic: members are
    ordered by (created_at, report_id) and clusters by their earliest member.
    """
    if radius_m <= 0:
        raise ValueError(f"radius_m must be positive: {radius_m}")
    clusters: list[DuplicateCluster] = []
    for hazard_type in HazardType:
        group = [r for r in reports if r.hazard_type is hazard_type]
        if not group:
            continue
        uf = _UnionFind(len(group))
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                d = haversine_distance(
                    group[i].corrected_location, group[j].corrected_location
                )
                if d <= radius_m:
                    uf.union(i, j)
        members: dict[int, list[HazardReport]] = {}
        for idx, report in enumerate(group):
            members.setdefault(uf.find(idx), []).append(report)
        for bucket in members.values():
            bucket.sort(key=lambda r: (r.created_at, r.report_id))
            first = bucket[0]
            clusters.append(
                DuplicateCluster(
                    cluster_id=f"cluster-{first.report_id}",
                    hazard_type=hazard_type,
                    member_report_ids=tuple(r.report_id for r in bucket),
                    representative=first.corrected_location,
                )
            )
    clusters.sort(key=lambda c: c.member_report_ids[0])
    return clusters
