"""Consensus aggregation over redundant annotations.

Both aggregators are order-free: any permutation of the same annotations
yields the same result.
"""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..core.types import HazardType, ImageCategory
from .errors import EmptyAnnotations, EmptyBatch, EmptyRatings, ScaleMismatch


def majority_vote(categories: Iterable[ImageCategory]) -> ImageCategory | None:
    """Plurality winner over the five image categories.

    Returns None when the top count is tied (the task is ambiguous). An
    absolute majority is not required: 4/3/3 still elects the 4.
    """
    votes = [ImageCategory(c) for c in categories]
    if not votes:
        raise EmptyAnnotations("majority_vote needs at least one annotation")
    counts = Counter(votes)
    ranked = counts.most_common()
    if len(ranked) > 1 and ranked[0][1] == ranked[1][1]:
        return None
    return ranked[0][0]


def median_aggregate(ratings: Sequence[int], scales: Sequence[str] | None = None) -> int:
    """Median of ordinal codes, staying on the scale.

    Odd counts take the middle order statistic; even counts take the lower
    of the two middle values so the result is always one of the inputs.
    ``scales`` optionally names the scale of each rating; mixing scales is
    an error.
    """
    if len(ratings) == 0:
        raise EmptyRatings("median_aggregate needs at least one rating")
    if scales is not None:
        if len(scales) != len(ratings):
            raise ScaleMismatch("scales and ratings must align")
        if len(set(scales)) > 1:
            raise ScaleMismatch(f"mixed rating scales: {sorted(set(scales))}")
    ordered = sorted(ratings)
    n = len(ordered)
    return ordered[n // 2] if n % 2 == 1 else ordered[n // 2 - 1]


@dataclass(frozen=True)
class CategoryAgreement:
    matched: int
    total: int

    @property
    def rate(self) -> float:
        return self.matched / self.total


@dataclass(frozen=True)
class AgreementReport:
    overall: float
    matched: int
    total: int
    per_category: dict[str, CategoryAgreement]

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "matched": self.matched,
            "total": self.total,
            "per_category": {
                k: {"matched": v.matched, "total": v.total, "rate": v.rate}
                for k, v in sorted(self.per_category.items())
            },
        }


def agreement_rate(verdicts: Sequence) -> AgreementReport:
    """Fraction of verdicts whose consensus matched the field label.

    Ambiguous verdicts count as unmatched. Per-category rates are grouped
    by the field label, so the overall rate is their count-weighted mean.
    """
    if not verdicts:
        raise EmptyBatch("agreement_rate needs at least one verdict")
    matched_by: dict[str, int] = {}
    total_by: dict[str, int] = {}
    matched = 0
    for v in verdicts:
        label: HazardType = v.field_label
        total_by[label.value] = total_by.get(label.value, 0) + 1
        if v.matched:
            matched_by[label.value] = matched_by.get(label.value, 0) + 1
            matched += 1
    per_category = {
        label: CategoryAgreement(matched=matched_by.get(label, 0), total=total)
        for label, total in total_by.items()
    }
    return AgreementReport(
        overall=matched / len(verdicts),
        matched=matched,
        total=len(verdicts),
        per_category=per_category,
    )


@dataclass(frozen=True)
class WorkerStats:
    n_workers: int
    hits_mean: float
    hits_max: int
    duration_mean_s: float
    duration_median_s: float
    duration_max_s: float

    def to_dict(self) -> dict:
        return {
            "n_workers": self.n_workers,
            "hits_per_worker": {"mean": self.hits_mean, "max": self.hits_max},
            "duration": {
                "mean_s": self.duration_mean_s,
                "median_s": self.duration_median_s,
                "max_s": self.duration_max_s,
            },
        }


def worker_stats(annotations: Sequence) -> WorkerStats:
    """Descriptive statistics over recorded annotations."""
    if not annotations:
        raise EmptyBatch("worker_stats needs at least one annotation")
    per_worker = Counter(a.worker_id for a in annotations)
    durations = [a.duration_s for a in annotations]
    return WorkerStats(
        n_workers=len(per_worker),
        hits_mean=len(annotations) / len(per_worker),
        hits_max=max(per_worker.values()),
        duration_mean_s=statistics.fmean(durations),
        duration_median_s=statistics.median(durations),
        duration_max_s=max(durations),
    )
