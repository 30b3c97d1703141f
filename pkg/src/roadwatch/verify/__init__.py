"""Crowd verification: batches, annotation intake, consensus, reliability."""

from .aggregate import (
    AgreementReport,
    CategoryAgreement,
    WorkerStats,
    agreement_rate,
    majority_vote,
    median_aggregate,
    worker_stats,
)
from .annotators import (
    MODELS,
    AnnotatorModel,
    NoisyAnnotator,
    PerfectAnnotator,
    UniformRandomAnnotator,
    run_batch,
)
from .engine import (
    Annotation,
    AnnotationTask,
    Batch,
    CATEGORY_QUESTIONS,
    DEFAULT_K,
    DEFAULT_MAX_DURATION_S,
    DEFAULT_REWARD_USD,
    ICC_ATTRIBUTES,
    VerificationEngine,
    VerificationVerdict,
    validate_annotation_attrs,
)
from .errors import (
    DegenerateRatings,
    DuplicateWorker,
    DurationExceeded,
    EmptyAnnotations,
    EmptyBatch,
    EmptyRatings,
    IneligibleWorker,
    SampleError,
    ScaleMismatch,
    ShapeError,
    TaskFull,
    UnknownTask,
)
from .icc import IccResult, RatingMatrix, f_upper_tail, icc_oneway, spearman_brown
from .report import load_recorded_batch, recorded_batch_to_dict, verification_report

__all__ = [
    "AgreementReport",
    "Annotation",
    "AnnotationTask",
    "AnnotatorModel",
    "Batch",
    "CATEGORY_QUESTIONS",
    "CategoryAgreement",
    "DEFAULT_K",
    "DEFAULT_MAX_DURATION_S",
    "DEFAULT_REWARD_USD",
    "DegenerateRatings",
    "DuplicateWorker",
    "DurationExceeded",
    "EmptyAnnotations",
    "EmptyBatch",
    "EmptyRatings",
    "ICC_ATTRIBUTES",
    "IccResult",
    "IneligibleWorker",
    "MODELS",
    "NoisyAnnotator",
    "PerfectAnnotator",
    "RatingMatrix",
    "SampleError",
    "ScaleMismatch",
    "ShapeError",
    "TaskFull",
    "UniformRandomAnnotator",
    "UnknownTask",
    "VerificationEngine",
    "VerificationVerdict",
    "WorkerStats",
    "agreement_rate",
    "f_upper_tail",
    "icc_oneway",
    "load_recorded_batch",
    "majority_vote",
    "median_aggregate",
    "recorded_batch_to_dict",
    "run_batch",
    "spearman_brown",
    "validate_annotation_attrs",
    "verification_report",
    "worker_stats",
]
