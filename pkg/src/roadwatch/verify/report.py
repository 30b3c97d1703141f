"""Assembly of verification run reports (counts, agreement, reliability)."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..core.errors import ValidationFailed
from ..core.types import HazardType, ImageCategory
from .aggregate import agreement_rate, worker_stats
from .engine import (
    Annotation,
    AnnotationTask,
    Batch,
    VerificationEngine,
    VerificationVerdict,
)


def verification_report(engine: VerificationEngine, batch_id: str) -> dict:
    """Full statistics bundle for one completed batch."""
    verdicts = engine.batch_verdicts(batch_id)
    agreement = agreement_rate(verdicts)
    notes = engine.batch_annotations(batch_id)
    ambiguous = sum(1 for v in verdicts if v.ambiguous)
    return {
        "batch_id": batch_id,
        "seed": engine.batches[batch_id].seed,
        "n_tasks": len(engine.batches[batch_id].task_ids),
        "n_annotations": len(notes),
        "verdicts": [v.to_dict() for v in verdicts],
        "category_matches": {
            label: {"matched": cat.matched, "total": cat.total, "rate": cat.rate}
            for label, cat in sorted(agreement.per_category.items())
        },
        "ambiguous": ambiguous,
        "agreement": agreement.to_dict(),
        "icc": engine.batch_icc(batch_id),
        "worker_stats": worker_stats(notes).to_dict(),
    }


def load_recorded_batch(doc: Mapping) -> tuple[VerificationEngine, Batch]:
    """Rebuild an engine from a recorded batch document.

    The document is self-contained: ``tasks`` carry their field labels, so
    no report store is needed to recompute verdicts and statistics.
    """
    tasks = doc.get("tasks")
    annotations = doc.get("annotations")
    if not isinstance(tasks, list) or not isinstance(annotations, list):
        raise ValidationFailed(["recorded batch needs 'tasks' and 'annotations' lists"])
    k = int(doc.get("k", 10))
    engine = VerificationEngine(k=k)
    batch = Batch(batch_id=str(doc.get("batch_id", "recorded")), seed=int(doc.get("seed", 0)))
    for i, raw in enumerate(tasks):
        try:
            task = AnnotationTask(
                task_id=str(raw["task_id"]),
                report_id=str(raw.get("report_id", raw["task_id"])),
                image_digest=str(raw.get("image_digest", "")),
                field_label=HazardType(raw["field_label"]),
                required_annotations=k,
            )
        except (KeyError, ValueError) as exc:
            raise ValidationFailed([f"tasks[{i}]: {exc}"]) from None
        engine.tasks[task.task_id] = task
        engine.annotations[task.task_id] = []
        batch.task_ids.append(task.task_id)
    engine.batches[batch.batch_id] = batch
    for i, raw in enumerate(annotations):
        try:
            annotation = Annotation(
                task_id=str(raw["task_id"]),
                worker_id=str(raw["worker_id"]),
                category=ImageCategory(raw["category"]),
                attrs=raw.get("attrs"),
                duration_s=float(raw.get("duration_s", 0.0)),
            )
        except (KeyError, ValueError) as exc:
            raise ValidationFailed([f"annotations[{i}]: {exc}"]) from None
        engine.record_annotation(annotation)
    return engine, batch


def recorded_batch_to_dict(
    engine: VerificationEngine, batch: Batch, reports_by_id: Mapping | None = None
) -> dict:
    """Serialize a batch with its annotations for replay or archival."""
    tasks = []
    for task_id in batch.task_ids:
        task = engine.tasks[task_id]
        tasks.append(
            {
                "task_id": task.task_id,
                "report_id": task.report_id,
                "image_digest": task.image_digest,
                "field_label": task.field_label.value,
            }
        )
    annotations = [
        {
            "task_id": a.task_id,
            "worker_id": a.worker_id,
            "category": a.category.value,
            "attrs": a.attrs,
            "duration_s": a.duration_s,
        }
        for task_id in batch.task_ids
        for a in engine.annotations[task_id]
    ]
    return {
        "batch_id": batch.batch_id,
        "seed": batch.seed,
        "k": engine.k,
        "tasks": tasks,
        "annotations": annotations,
    }
