"""HTTP/JSON surface over the ingestion service, verification engine, and
map exports.

Bodies are the canonical JSON of the domain types. Validation problems map
to 400 with a violation list, unknown users to 404; idempotent replays
return 200 with ``created=false`` (never 409).
"""

from __future__ import annotations

from datetime import datetime

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .core import codec
from .core.errors import DomainError, UnknownUser, ValidationFailed
from .core.geo import BoundingBox
from .core.types import HazardType
from .exports import DEFAULT_CELL_SIZE_M, RegionSet, export_layer, export_pin_layer, heatmap, region_coverage
from .service import IngestionService, leaderboard
from .verify import VerificationEngine, run_batch
from .verify.annotators import MODELS
from .verify.engine import Annotation
from .verify.report import verification_report
from .core.types import ImageCategory


def _parse_bbox(raw: str) -> BoundingBox:
    parts = raw.split(",")
    if len(parts) != 4:
        raise ValidationFailed(["bbox must be 'min_lat,min_lon,max_lat,max_lon'"])
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ValidationFailed([f"bbox has non-numeric parts: {raw!r}"]) from None
    return BoundingBox(*values)


def _parse_since(raw: str | None) -> datetime | None:
    return codec.parse_timestamp(raw) if raw else None


def create_app(
    service: IngestionService,
    engine: VerificationEngine,
    regions: RegionSet | None = None,
) -> FastAPI:
    app = FastAPI(title="roadwatch", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ValidationFailed)
    async def _validation_handler(request: Request, exc: ValidationFailed):
        return JSONResponse(
            status_code=400, content={"error": "validation", "violations": exc.violations}
        )

    @app.exception_handler(UnknownUser)
    async def _unknown_user_handler(request: Request, exc: UnknownUser):
        return JSONResponse(status_code=404, content={"error": "unknown_user", "detail": str(exc)})

    @app.exception_handler(DomainError)
    async def _domain_handler(request: Request, exc: DomainError):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    # -- ingestion ------------------------------------------------------

    @app.post("/users")
    async def post_users(request: Request):
        body = await request.json()
        phone = body.get("phone") if isinstance(body, dict) else None
        if not phone:
            raise ValidationFailed(["phone: missing"])
        identity = service.register(phone)
        return codec.identity_to_dict(identity)

    @app.post("/reports")
    async def post_reports(request: Request):
        body = await request.json()
        ack = service.submit_report(body)
        return {"report_id": ack.id, "created": ack.created}

    @app.post("/mapit")
    async def post_mapit(request: Request):
        body = await request.json()
        ack = service.submit_mapit(body)
        return {"pin_id": ack.id, "created": ack.created}

    @app.get("/reports")
    def get_reports(
        bbox: str,
        type: str | None = None,
        severity_min: int | None = None,
        since: str | None = None,
    ):
        hazard_type = None
        if type:
            try:
                hazard_type = HazardType(type)
            except ValueError:
                raise ValidationFailed([f"type: unknown value {type!r}"]) from None
        rows = service.query_reports(
            _parse_bbox(bbox),
            hazard_type=hazard_type,
            severity_min=severity_min,
            since=_parse_since(since),
        )
        return {"reports": [codec.report_to_dict(r) for r in rows]}

    @app.get("/mapit")
    def get_mapit():
        return {"pins": [codec.pin_to_dict(p) for p in service.store.all_pins()]}

    @app.get("/leaderboard")
    def get_leaderboard(n: int = 5):
        verdict_matches: dict[str, bool] = {}
        for batch_id in engine.batches:
            verdict_matches.update(engine.verdict_matches(batch_id))
        entries = leaderboard(
            service.store,
            n=n,
            regions=regions,
            verdict_matches=verdict_matches or None,
            dedup_radius_m=service.dedup_radius_m,
        )
        return {
            "entries": [
                {
                    "user_id": e.user_id,
                    "unique_report_count": e.unique_report_count,
                    "regions_covered": e.regions_covered,
                }
                for e in entries
            ]
        }

    # -- verification ------------------------------------------------------

    @app.post("/batches")
    async def post_batches(request: Request):
        body = await request.json()
        n = int(body.get("n", 50))
        seed = int(body.get("seed", 0))
        batch = engine.sample_batch(service.store.all_reports(), n=n, seed=seed)
        annotator = body.get("annotator")
        if annotator:
            if annotator not in MODELS:
                raise ValidationFailed([f"annotator: unknown model {annotator!r}"])
            reports_by_id = {r.report_id: r for r in service.store.all_reports()}
            run_batch(
                engine,
                batch,
                reports_by_id,
                MODELS[annotator](),
                n_workers=int(body.get("n_workers", 39)),
                seed=seed,
            )
        return {"batch_id": batch.batch_id, "task_ids": batch.task_ids, "seed": seed}

    @app.get("/tasks/next")
    def get_next_task(worker: str, batch: str | None = None):
        task = engine.next_task_for(worker, batch_id=batch)
        if task is None:
            return {"task": None}
        payload = task.to_dict()
        report = service.store.reports.get(task.report_id)
        if report is not None:
            payload["image"] = codec.image_to_dict(report.image)
        return {"task": payload}

    @app.post("/tasks/{task_id}/annotations")
    async def post_annotation(task_id: str, request: Request):
        body = await request.json()
        try:
            category = ImageCategory(body.get("category"))
        except ValueError:
            raise ValidationFailed([f"category: unknown value {body.get('category')!r}"]) from None
        annotation = Annotation(
            task_id=task_id,
            worker_id=str(body.get("worker_id", "")),
            category=category,
            attrs=body.get("attrs"),
            duration_s=float(body.get("duration_s", 0.0)),
        )
        if not annotation.worker_id:
            raise ValidationFailed(["worker_id: missing"])
        closed = engine.record_annotation(annotation)
        return {"status": "ok", "task_closed": closed}

    @app.get("/batches/{batch_id}/verdicts")
    def get_verdicts(batch_id: str):
        if batch_id not in engine.batches:
            raise ValidationFailed([f"unknown batch: {batch_id}"])
        report = verification_report(engine, batch_id)
        return {
            "batch_id": batch_id,
            "verdicts": report["verdicts"],
            "agreement": report["agreement"],
            "ambiguous": report["ambiguous"],
        }

    @app.get("/batches/{batch_id}/icc")
    def get_icc(batch_id: str):
        if batch_id not in engine.batches:
            raise ValidationFailed([f"unknown batch: {batch_id}"])
        return {"batch_id": batch_id, "icc": engine.batch_icc(batch_id)}

    # -- exports ------------------------------------------------------------

    @app.get("/export/layer")
    def get_layer(type: str | None = None, severity_min: int | None = None):
        hazard_type = None
        if type:
            try:
                hazard_type = HazardType(type)
            except ValueError:
                raise ValidationFailed([f"type: unknown value {type!r}"]) from None
        verdict_matches: dict[str, bool] = {}
        for batch_id in engine.batches:
            verdict_matches.update(engine.verdict_matches(batch_id))
        return export_layer(
            service.store.all_reports(),
            hazard_type=hazard_type,
            severity_min=severity_min,
            verdict_matches=verdict_matches or None,
        )

    @app.get("/export/pins")
    def get_pin_layer():
        return export_pin_layer(service.store.all_pins())

    @app.get("/export/heatmap")
    def get_heatmap(bbox: str, cell_size_m: float = DEFAULT_CELL_SIZE_M):
        grid = heatmap(service.store.all_reports(), _parse_bbox(bbox), cell_size_m=cell_size_m)
        return grid.to_dict()

    @app.get("/export/coverage")
    def get_coverage():
        if regions is None:
            raise ValidationFailed(["no region set configured"])
        return {"coverage": region_coverage(service.store.all_reports(), regions)}

    return app
