"""Synthetic annotator models for offline verification runs.

Live deployments collect annotations from human workers; these models make
the whole pipeline drivable and testable without them. All models draw
from a caller-supplied RNG so runs are reproducible by seed.
"""

from __future__ import annotations

import random
from typing import Mapping, Protocol, Sequence

from ..core.types import (
    HazardReport,
    HazardType,
    ImageCategory,
    PotholeAttrs,
    SEVERITY_SCALE,
    SIZE_SCALE,
)
from .engine import Annotation, AnnotationTask, Batch, CATEGORY_QUESTIONS, VerificationEngine


class AnnotatorModel(Protocol):
    def annotate(
        self,
        task: AnnotationTask,
        report: HazardReport,
        worker_id: str,
        rng: random.Random,
    ) -> Annotation: ...


def _field_attrs_answers(report: HazardReport) -> dict:
    if isinstance(report.attrs, PotholeAttrs):
        return {"size": report.attrs.size, "severity": report.attrs.severity}
    return {
        "size": report.attrs.size,
        "bump_count": report.attrs.bump_count,
        "labeled": report.attrs.labeled,
    }


def _duration(rng: random.Random, cap: float) -> float:
    # heavy-tail-ish: most answers fast, a few near the cap
    d = rng.lognormvariate(3.1, 0.7)
    return round(min(d, cap - 1.0), 1)


class PerfectAnnotator:
    """Always reproduces the field label and field attributes."""

    def annotate(self, task, report, worker_id, rng):
        return Annotation(
            task_id=task.task_id,
            worker_id=worker_id,
            category=ImageCategory(report.hazard_type.value),
            attrs=_field_attrs_answers(report),
            duration_s=_duration(rng, task.max_duration_s),
        )


class NoisyAnnotator:
    """Mostly agrees with the field submitter.

    With probability ``1 - category_accuracy`` the category is confused to
    another one (uniform by default, or per ``confusion``); ordinal answers
    jitter by +/-1 with probability ``rating_jitter``, clipped to scale.
    """

    def __init__(
        self,
        category_accuracy: float = 0.9,
        rating_jitter: float = 0.25,
        confusion: Mapping[ImageCategory, Sequence[ImageCategory]] | None = None,
    ):
        if not 0.0 <= category_accuracy <= 1.0:
            raise ValueError("category_accuracy must be in [0, 1]")
        if not 0.0 <= rating_jitter <= 1.0:
            raise ValueError("rating_jitter must be in [0, 1]")
        self.category_accuracy = category_accuracy
        self.rating_jitter = rating_jitter
        self.confusion = confusion

    def _jitter(self, rng: random.Random, value: int, scale: tuple[int, int]) -> int:
        if rng.random() < self.rating_jitter:
            value += rng.choice((-1, 1))
        return max(scale[0], min(scale[1], value))

    def annotate(self, task, report, worker_id, rng):
        true_category = ImageCategory(report.hazard_type.value)
        if rng.random() < self.category_accuracy:
            category = true_category
        else:
            pool = (
                list(self.confusion[true_category])
                if self.confusion is not None
                else [c for c in ImageCategory if c is not true_category]
            )
            category = rng.choice(pool)

        attrs = None
        if category in CATEGORY_QUESTIONS:
            field = _field_attrs_answers(report)
            if category is ImageCategory.POTHOLE:
                base_size = field.get("size", rng.randint(*SIZE_SCALE))
                base_sev = field.get("severity", rng.randint(*SEVERITY_SCALE))
                attrs = {
                    "size": self._jitter(rng, base_size, SIZE_SCALE),
                    "severity": self._jitter(rng, base_sev, SEVERITY_SCALE),
                }
            else:
                base_size = field.get("size", rng.randint(*SIZE_SCALE))
                base_count = field.get("bump_count", 1)
                attrs = {
                    "size": self._jitter(rng, base_size, SIZE_SCALE),
                    "bump_count": max(1, base_count + (1 if rng.random() < self.rating_jitter / 2 else 0)),
                    "labeled": field.get("labeled", False) if rng.random() > self.rating_jitter / 2 else rng.random() < 0.5,
                }
        return Annotation(
            task_id=task.task_id,
            worker_id=worker_id,
            category=category,
            attrs=attrs,
            duration_s=_duration(rng, task.max_duration_s),
        )


class UniformRandomAnnotator:
    """Null model: picks between the two hazard classes at random and rates
    attributes uniformly, so reliability statistics should come out flat."""

    def annotate(self, task, report, worker_id, rng):
        category = rng.choice([ImageCategory.POTHOLE, ImageCategory.SPEED_BUMP])
        if category is ImageCategory.POTHOLE:
            attrs = {
                "size": rng.randint(*SIZE_SCALE),
                "severity": rng.randint(*SEVERITY_SCALE),
            }
        else:
            attrs = {
                "size": rng.randint(*SIZE_SCALE),
                "bump_count": rng.randint(1, 3),
                "labeled": rng.random() < 0.5,
            }
        return Annotation(
            task_id=task.task_id,
            worker_id=worker_id,
            category=category,
            attrs=attrs,
            duration_s=_duration(rng, task.max_duration_s),
        )


MODELS = {
    "perfect": PerfectAnnotator,
    "noisy": NoisyAnnotator,
    "random": UniformRandomAnnotator,
}


def run_batch(
    engine: VerificationEngine,
    batch: Batch,
    reports_by_id: Mapping[str, HazardReport],
    model: AnnotatorModel,
    n_workers: int = 39,
    seed: int = 0,
) -> int:
    """Drive a batch to completion with a synthetic worker pool.

    Each task receives the engine's required number of annotations from
    distinct workers sampled without replacement. Returns the number of
    annotations recorded.
    """
    if n_workers < engine.k:
        raise ValueError(f"need at least k={engine.k} workers, got {n_workers}")
    rng = random.Random(seed)
    workers = [f"w{idx:03d}" for idx in range(n_workers)]
    recorded = 0
    for task_id in batch.task_ids:
        task = engine.tasks[task_id]
        report = reports_by_id[task.report_id]
        for worker_id in rng.sample(workers, task.required_annotations):
            annotation = model.annotate(task, report, worker_id, rng)
            engine.record_annotation(annotation)
            recorded += 1
    return recorded
