import random
from dataclasses import dataclass

import pytest

from roadwatch.core.types import HazardType, ImageCategory
from roadwatch.verify.aggregate import (
    agreement_rate,
    majority_vote,
    median_aggregate,
    worker_stats,
)
from roadwatch.verify.errors import (
    EmptyAnnotations,
    EmptyBatch,
    EmptyRatings,
    ScaleMismatch,
)

PH = ImageCategory.POTHOLE
SB = ImageCategory.SPEED_BUMP


def test_majority_strict_plurality():
    assert majority_vote([PH] * 7 + [SB] * 3) is PH


def test_majority_tie_is_ambiguous():
    assert majority_vote([PH] * 5 + [SB] * 5) is None


def test_majority_plurality_without_absolute_majority():
    votes = [PH] * 4 + [ImageCategory.BOTH] * 3 + [ImageCategory.SMOOTH] * 3
    assert majority_vote(votes) is PH


def test_majority_empty_rejected():
    with pytest.raises(EmptyAnnotations):
        majority_vote([])


def test_majority_permutation_invariant():
    rng = random.Random(2)
    votes = [PH] * 4 + [SB] * 3 + [ImageCategory.SMOOTH] * 3
    expected = majority_vote(votes)
    for _ in range(1000):
        rng.shuffle(votes)
        assert majority_vote(votes) == expected


def test_median_examples():
    assert median_aggregate([1, 2, 2, 3, 4]) == 2
    assert median_aggregate([2, 2, 3, 3]) == 2  # lower middle
    assert median_aggregate([4] * 10) == 4


def test_median_stays_on_scale_and_bounded():
    rng = random.Random(9)
    for _ in range(500):
        xs = [rng.randint(1, 4) for _ in range(rng.randint(1, 15))]
        m = median_aggregate(xs)
        assert m in xs
        assert min(xs) <= m <= max(xs)


def test_median_permutation_invariant():
    rng = random.Random(4)
    xs = [rng.randint(1, 4) for _ in range(10)]
    expected = median_aggregate(xs)
    for _ in range(1000):
        rng.shuffle(xs)
        assert median_aggregate(xs) == expected


def test_median_errors():
    with pytest.raises(EmptyRatings):
        median_aggregate([])
    with pytest.raises(ScaleMismatch):
        median_aggregate([1, 2, 3], scales=["size", "size", "severity"])
    assert median_aggregate([1, 2, 3], scales=["size"] * 3) == 2


@dataclass
class FakeVerdict:
    field_label: HazardType
    matched: bool


def test_agreement_rate_92_percent():
    verdicts = (
        [FakeVerdict(HazardType.POTHOLE, True)] * 34
        + [FakeVerdict(HazardType.SPEED_BUMP, True)] * 12
        + [FakeVerdict(HazardType.SPEED_BUMP, False)] * 4
    )
    report = agreement_rate(verdicts)
    assert report.overall == 0.92
    assert report.per_category["pothole"].rate == 1.0
    assert report.per_category["speed_bump"].rate == 0.75


def test_agreement_all_matched():
    verdicts = [FakeVerdict(HazardType.POTHOLE, True)] * 10
    assert agreement_rate(verdicts).overall == 1.0


def test_agreement_overall_is_weighted_mean_of_categories():
    rng = random.Random(12)
    for _ in range(50):
        verdicts = [
            FakeVerdict(rng.choice(list(HazardType)), rng.random() < 0.7)
            for _ in range(rng.randint(1, 40))
        ]
        report = agreement_rate(verdicts)
        weighted = sum(c.matched for c in report.per_category.values()) / report.total
        assert report.overall == pytest.approx(weighted, abs=1e-12)


def test_agreement_empty_rejected():
    with pytest.raises(EmptyBatch):
        agreement_rate([])


@dataclass
class FakeAnnotation:
    worker_id: str
    duration_s: float


def test_worker_stats_examples():
    stats = worker_stats(
        [
            FakeAnnotation("w1", 21.0),
            FakeAnnotation("w2", 21.0),
            FakeAnnotation("w3", 290.0),
        ]
    )
    assert stats.duration_median_s == 21.0
    assert stats.duration_max_s == 290.0


def test_worker_stats_hits_max():
    notes = [FakeAnnotation("busy", 10.0) for _ in range(41)]
    notes += [FakeAnnotation("lazy", 10.0)]
    stats = worker_stats(notes)
    assert stats.hits_max == 41
    assert stats.n_workers == 2


def test_worker_stats_mean_hits():
    notes = []
    for i in range(500):
        notes.append(FakeAnnotation(f"w{i % 39}", 20.0))
    stats = worker_stats(notes)
    assert stats.n_workers == 39
    assert stats.hits_mean == pytest.approx(500 / 39, abs=1e-9)


def test_worker_stats_empty_rejected():
    with pytest.raises(EmptyBatch):
        worker_stats([])
