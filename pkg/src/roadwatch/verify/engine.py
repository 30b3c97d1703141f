"""Verification engine: task batches, annotation recording, verdicts.

Each sampled report becomes one annotation task whose question set mirrors
the field report form; redundant annotations are aggregated into a verdict
per image and rating matrices per hazard attribute.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..core.errors import ValidationFailed
from ..core.types import (
    HazardType,
    ImageCategory,
    SEVERITY_SCALE,
    SIZE_SCALE,
)
from .aggregate import AgreementReport, agreement_rate, majority_vote, median_aggregate
from .errors import (
    DuplicateWorker,
    DurationExceeded,
    IneligibleWorker,
    SampleError,
    TaskFull,
    UnknownTask,
)
from .icc import IccResult, RatingMatrix, icc_oneway

DEFAULT_K = 10
DEFAULT_MAX_DURATION_S = 300.0
DEFAULT_REWARD_USD = 0.15

# question sets mirror the report form, keyed by the category that reveals them
CATEGORY_QUESTIONS: dict[ImageCategory, tuple[str, ...]] = {
    ImageCategory.POTHOLE: ("size", "severity"),
    ImageCategory.SPEED_BUMP: ("size", "bump_count", "labeled"),
}

# the three ordinal attributes tracked for inter-rater reliability
ICC_ATTRIBUTES: tuple[tuple[str, ImageCategory, str], ...] = (
    ("pothole_size", ImageCategory.POTHOLE, "size"),
    ("pothole_severity", ImageCategory.POTHOLE, "severity"),
    ("speed_bump_size", ImageCategory.SPEED_BUMP, "size"),
)


@dataclass(frozen=True)
class AnnotationTask:
    """One image offered to redundant annotators (a HIT)."""

    task_id: str
    report_id: str
    image_digest: str
    field_label: HazardType
    required_annotations: int = DEFAULT_K
    max_duration_s: float = DEFAULT_MAX_DURATION_S
    reward_usd: float = DEFAULT_REWARD_USD

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "report_id": self.report_id,
            "image_digest": self.image_digest,
            "required_annotations": self.required_annotations,
            "max_duration_s": self.max_duration_s,
            "reward_usd": self.reward_usd,
            "questions": {
                "category": [c.value for c in ImageCategory],
                "conditional": {c.value: list(q) for c, q in CATEGORY_QUESTIONS.items()},
            },
        }


@dataclass(frozen=True)
class Annotation:
    """One worker's answer to one task."""

    task_id: str
    worker_id: str
    category: ImageCategory
    attrs: dict | None
    duration_s: float


@dataclass(frozen=True)
class VerificationVerdict:
    """Aggregate over one task: consensus category, attribute medians, and
    whether the crowd confirmed the field label."""

    report_id: str
    task_id: str
    consensus_category: ImageCategory | None
    attribute_medians: dict
    field_label: HazardType
    matched: bool
    ambiguous: bool

    def to_dict(self) -> dict:
        return {
            "report_id": self.report_id,
            "task_id": self.task_id,
            "consensus_category": (
                self.consensus_category.value if self.consensus_category else None
            ),
            "attribute_medians": dict(sorted(self.attribute_medians.items())),
            "field_label": self.field_label.value,
            "matched": self.matched,
            "ambiguous": self.ambiguous,
        }


def validate_annotation_attrs(category: ImageCategory, attrs: Mapping | None) -> list[str]:
    """Attribute answers must be present iff the category asks for them,
    complete, and on-scale."""
    questions = CATEGORY_QUESTIONS.get(category)
    if questions is None:
        if attrs:
            return [f"attrs not allowed for category {category.value}"]
        return []
    if attrs is None:
        return [f"attrs required for category {category.value}"]
    violations = []
    extra = set(attrs) - set(questions)
    if extra:
        violations.append(f"unexpected attrs: {sorted(extra)}")
    for q in questions:
        if q not in attrs:
            violations.append(f"missing answer: {q}")
    if violations:
        return violations
    if category is ImageCategory.POTHOLE:
        if not SIZE_SCALE[0] <= attrs["size"] <= SIZE_SCALE[1]:
            violations.append(f"size out of range: {attrs['size']}")
        if not SEVERITY_SCALE[0] <= attrs["severity"] <= SEVERITY_SCALE[1]:
            violations.append(f"severity out of range: {attrs['severity']}")
    else:
        if not SIZE_SCALE[0] <= attrs["size"] <= SIZE_SCALE[1]:
            violations.append(f"size out of range: {attrs['size']}")
        if not (isinstance(attrs["bump_count"], int) and attrs["bump_count"] >= 1):
            violations.append(f"bump_count must be >= 1: {attrs['bump_count']}")
        if not isinstance(attrs["labeled"], bool):
            violations.append("labeled must be a boolean")
    return violations


@dataclass
class Batch:
    batch_id: str
    seed: int
    task_ids: list[str] = field(default_factory=list)


class VerificationEngine:
    """Holds tasks, annotations, and batch bookkeeping.

    Recording is serialized by a lock so the per-task annotation cap and
    per-worker uniqueness stay atomic; aggregation paths are pure reads.
    """

    def __init__(
        self,
        k: int = DEFAULT_K,
        max_duration_s: float = DEFAULT_MAX_DURATION_S,
        reward_usd: float = DEFAULT_REWARD_USD,
    ):
        if k < 1:
            raise ValidationFailed([f"k must be >= 1: {k}"])
        self.k = k
        self.max_duration_s = max_duration_s
        self.reward_usd = reward_usd
        self.tasks: dict[str, AnnotationTask] = {}
        self.annotations: dict[str, list[Annotation]] = {}
        self.batches: dict[str, Batch] = {}
        self.ineligible_workers: set[str] = set()
        self._lock = threading.RLock()
        self._task_seq = 0

    # -- batches ---------------------------------------------------------

    def set_worker_eligibility(self, worker_id: str, eligible: bool) -> None:
        with self._lock:
            if eligible:
                self.ineligible_workers.discard(worker_id)
            else:
                self.ineligible_workers.add(worker_id)

    def sample_batch(
        self,
        reports: Sequence,
        n: int,
        seed: int,
    ) -> Batch:
        """Sample ``n`` distinct reports uniformly without replacement and
        open one task per sampled report. Deterministic given ``seed``."""
        if n < 0 or n > len(reports):
            raise SampleError(f"cannot sample {n} from a pool of {len(reports)}")
        rng = random.Random(seed)
        chosen = rng.sample(list(reports), n)
        with self._lock:
            batch = Batch(batch_id=f"b{len(self.batches) + 1:04d}", seed=seed)
            for report in chosen:
                self._task_seq += 1
                task = AnnotationTask(
                    task_id=f"t{self._task_seq:05d}",
                    report_id=report.report_id,
                    image_digest=report.image.source_digest,
                    field_label=report.hazard_type,
                    required_annotations=self.k,
                    max_duration_s=self.max_duration_s,
                    reward_usd=self.reward_usd,
                )
                self.tasks[task.task_id] = task
                self.annotations[task.task_id] = []
                batch.task_ids.append(task.task_id)
            self.batches[batch.batch_id] = batch
            return batch

    # -- annotation intake --------------------------------------------------

    def record_annotation(self, annotation: Annotation) -> bool:
        """Store one annotation; returns True when the task just closed."""
        with self._lock:
            task = self.tasks.get(annotation.task_id)
            if task is None:
                raise UnknownTask(annotation.task_id)
            if annotation.worker_id in self.ineligible_workers:
                raise IneligibleWorker(annotation.worker_id)
            existing = self.annotations[task.task_id]
            if len(existing) >= task.required_annotations:
                raise TaskFull(task.task_id)
            if any(a.worker_id == annotation.worker_id for a in existing):
                raise DuplicateWorker(f"{annotation.worker_id} on {task.task_id}")
            if annotation.duration_s > task.max_duration_s:
                raise DurationExceeded(
                    f"{annotation.duration_s}s exceeds cap {task.max_duration_s}s"
                )
            bad = validate_annotation_attrs(annotation.category, annotation.attrs)
            if bad:
                raise ValidationFailed(bad)
            existing.append(annotation)
            return len(existing) >= task.required_annotations

    def task_open(self, task_id: str) -> bool:
        task = self.tasks.get(task_id)
        if task is None:
            raise UnknownTask(task_id)
        return len(self.annotations[task_id]) < task.required_annotations

    def next_task_for(self, worker_id: str, batch_id: str | None = None) -> AnnotationTask | None:
        """First open task this worker has not touched, in task order."""
        task_ids = (
            self.batches[batch_id].task_ids if batch_id is not None else sorted(self.tasks)
        )
        for task_id in task_ids:
            task = self.tasks[task_id]
            notes = self.annotations[task_id]
            if len(notes) >= task.required_annotations:
                continue
            if any(a.worker_id == worker_id for a in notes):
                continue
            return task
        return None

    # -- aggregation ----------------------------------------------------------

    def verdict(self, task_id: str) -> VerificationVerdict:
        task = self.tasks.get(task_id)
        if task is None:
            raise UnknownTask(task_id)
        notes = self.annotations[task_id]
        consensus = majority_vote([a.category for a in notes])
        medians: dict = {}
        if consensus in CATEGORY_QUESTIONS:
            # attribute answers exist only on annotations that chose the
            # consensus category
            voters = [a for a in notes if a.category is consensus]
            for q in CATEGORY_QUESTIONS[consensus]:
                answers = [a.attrs[q] for a in voters]
                if q == "labeled":
                    medians[q] = sum(1 for v in answers if v) * 2 > len(answers)
                else:
                    medians[q] = median_aggregate(answers)
        matched = consensus is not None and consensus.value == task.field_label.value
        return VerificationVerdict(
            report_id=task.report_id,
            task_id=task.task_id,
            consensus_category=consensus,
            attribute_medians=medians,
            field_label=task.field_label,
            matched=matched,
            ambiguous=consensus is None,
        )

    def batch_verdicts(self, batch_id: str) -> list[VerificationVerdict]:
        batch = self.batches[batch_id]
        return [self.verdict(task_id) for task_id in batch.task_ids if self.annotations[task_id]]

    def batch_agreement(self, batch_id: str) -> AgreementReport:
        return agreement_rate(self.batch_verdicts(batch_id))

    def batch_annotations(self, batch_id: str) -> list[Annotation]:
        batch = self.batches[batch_id]
        return [a for task_id in batch.task_ids for a in self.annotations[task_id]]

    def verdict_matches(self, batch_id: str) -> dict[str, bool]:
        """report_id -> matched flag, for leaderboard and layer exports."""
        return {v.report_id: v.matched for v in self.batch_verdicts(batch_id)}

    # -- rating matrices -------------------------------------------------------

    def rating_matrix(self, batch_id: str, attribute: str) -> RatingMatrix | None:
        """Ratings of one attribute over correctly verified tasks.

        Rows are tasks whose consensus matched the field label and equals the
        attribute's category; each row holds that task's ratings from
        annotators who chose the consensus, ordered by worker id and
        truncated to the shortest row so the matrix stays rectangular.
        Returns None when fewer than two usable rows exist.
        """
        spec = {name: (cat, q) for name, cat, q in ICC_ATTRIBUTES}
        if attribute not in spec:
            raise ValidationFailed([f"unknown attribute: {attribute}"])
        category, question = spec[attribute]
        rows: list[list[float]] = []
        for verdict in self.batch_verdicts(batch_id):
            if not verdict.matched or verdict.consensus_category is not category:
                continue
            notes = sorted(
                (a for a in self.annotations[verdict.task_id] if a.category is category),
                key=lambda a: a.worker_id,
            )
            ratings = [float(a.attrs[question]) for a in notes]
            if len(ratings) >= 2:
                rows.append(ratings)
        if len(rows) < 2:
            return None
        width = min(len(r) for r in rows)
        return RatingMatrix(
            attribute=attribute, values=tuple(tuple(r[:width]) for r in rows)
        )

    def batch_icc(self, batch_id: str) -> dict[str, dict]:
        """Reliability table rows per attribute: rating spread plus ICC."""
        from .errors import DegenerateRatings

        out: dict[str, dict] = {}
        for attribute, _cat, _q in ICC_ATTRIBUTES:
            matrix = self.rating_matrix(batch_id, attribute)
            if matrix is None:
                out[attribute] = {"available": False}
                continue
            values = matrix.flat()
            row: dict = {
                "available": True,
                "n": matrix.n,
                "k": matrix.k,
                "min": min(values),
                "max": max(values),
                "mean": sum(values) / len(values),
                "median": float(median_aggregate([int(v) for v in values])),
            }
            try:
                icc: IccResult = icc_oneway(matrix)
                row.update(
                    {
                        "icc_average": icc.icc_average,
                        "icc_single": icc.icc_single,
                        "p_value": icc.p_value,
                    }
                )
            except DegenerateRatings:
                row.update({"icc_average": None, "icc_single": None, "p_value": None})
            out[attribute] = row
        return out
