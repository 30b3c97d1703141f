"""Operator CLI: serve, simulate, verify, export, leaderboard.

Exit codes: 0 success, 1 validation/config problem, 2 I/O problem.
Every command prints the seed it ran with so outputs are replayable.
"""

from __future__ import annotations

import json
import socket
import sys
from datetime import timedelta
from pathlib import Path

import click

from .client.simulate import STUDY_START, simulate_field_study, summarize_sample
from .config import PipelineConfig, load_pipeline_config
from .core import codec
from .core.errors import DomainError, ValidationFailed
from .core.geo import BoundingBox, ring_bbox
from .core.types import HazardType
from .exports import RegionSet, export_layer, export_pin_layer, heatmap, layer_to_json, region_coverage
from .service import IngestionService, ReportStore, leaderboard
from .verify import VerificationEngine, run_batch
from .verify.annotators import MODELS
from .verify.report import load_recorded_batch, recorded_batch_to_dict, verification_report

EXIT_VALIDATION = 1
EXIT_IO = 2


class _TickingClock:
    """Deterministic clock: advances one second per call from a fixed start."""

    def __init__(self, start=STUDY_START):
        self.now = start

    def __call__(self):
        self.now = self.now + timedelta(seconds=1)
        return self.now


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValidationFailed, DomainError, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))


def _load_config(ctx_params: dict) -> PipelineConfig:
    cfg = load_pipeline_config(ctx_params.get("config"))
    if ctx_params.get("data_dir") is not None:
        cfg.data_dir = Path(ctx_params["data_dir"])
    if ctx_params.get("seed") is not None:
        cfg.seed = ctx_params["seed"]
    cfg.apply_seed_override()
    return cfg


def _open_service(cfg: PipelineConfig, clock=None) -> IngestionService:
    store = ReportStore(cfg.data_dir)
    kwargs = {} if clock is None else {"clock": clock}
    return IngestionService(
        store,
        salt=cfg.service.resolved_salt(),
        dedup_radius_m=cfg.service.dedup_radius_m,
        **kwargs,
    )


def _load_regions(path: str | None, cfg: PipelineConfig) -> RegionSet | None:
    chosen = path or cfg.export.regions_path
    if chosen is None:
        return None
    return RegionSet.from_file(chosen)


@click.group()
@click.option("--data-dir", type=click.Path(), default=None, help="Store directory.")
@click.option("--seed", type=int, default=None, help="Override every stage seed.")
@click.option("--config", type=click.Path(exists=True), default=None, help="JSON config file.")
@click.pass_context
def main(ctx, data_dir, seed, config):
    """Road-hazard reporting and verification toolkit."""
    ctx.obj = {"data_dir": data_dir, "seed": seed, "config": config}


@main.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--salt", default=None)
@click.option("--dedup-radius-m", type=float, default=None)
@click.option("--regions", type=click.Path(exists=True), default=None)
@click.pass_context
def serve(ctx, host, port, salt, dedup_radius_m, regions):
    """Run the ingestion + verification HTTP service."""

    def run():
        import uvicorn

        from .http import create_app

        cfg = _load_config(ctx.obj)
        if host is not None:
            cfg.service.host = host
        if port is not None:
            cfg.service.port = port
        if salt is not None:
            cfg.service.salt = salt
        if dedup_radius_m is not None:
            cfg.service.dedup_radius_m = dedup_radius_m

        # fail fast with a clean exit code when the port is taken
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        try:
            probe.bind((cfg.service.host, cfg.service.port))
        except OSError as exc:
            probe.close()
            raise OSError(
                f"cannot listen on {cfg.service.host}:{cfg.service.port}: {exc}"
            ) from exc
        probe.close()

        service = _open_service(cfg)
        engine = VerificationEngine(k=cfg.verification.k)
        app = create_app(service, engine, regions=_load_regions(regions, cfg))
        click.echo(f"# serve host={cfg.service.host} port={cfg.service.port} data_dir={cfg.data_dir}")
        try:
            uvicorn.run(app, host=cfg.service.host, port=cfg.service.port, log_level="warning")
        finally:
            service.store.flush()

    _guarded(run)


@main.command()
@click.pass_context
def simulate(ctx):
    """Generate a seeded field-study corpus and load it through the service."""

    def run():
        cfg = _load_config(ctx.obj)
        clock = _TickingClock()
        service = _open_service(cfg, clock=clock)
        phones = [f"+1555{i:07d}" for i in range(cfg.field_study.n_users)]
        identities = [service.register(p) for p in phones]
        sample = simulate_field_study(cfg.field_study, user_ids=[u.user_id for u in identities])
        for report in sample.reports:
            service.submit_report(report)
        for pin in sample.pins:
            service.submit_mapit(pin)

        cfg.data_dir.mkdir(parents=True, exist_ok=True)
        reports_path = cfg.data_dir / "field_reports.jsonl"
        pins_path = cfg.data_dir / "mapit_pins.jsonl"
        reports_path.write_text(
            "".join(codec.canonical_dumps(codec.report_to_dict(r)) + "\n" for r in sample.reports),
            encoding="utf-8",
        )
        pins_path.write_text(
            "".join(codec.canonical_dumps(codec.pin_to_dict(p)) + "\n" for p in sample.pins),
            encoding="utf-8",
        )

        summary = summarize_sample(sample)
        (cfg.data_dir / "summary.json").write_text(
            codec.canonical_dumps(summary) + "\n", encoding="utf-8"
        )
        hist = summary["severity_histogram"]
        click.echo(f"# simulate seed={summary['seed']}")
        click.echo(
            f"full reports: {summary['full_reports']} "
            f"({summary['full_potholes']} potholes, {summary['full_speed_bumps']} speed bumps)"
        )
        click.echo(
            f"mapit pins: {summary['mapit_pins']} "
            f"({summary['mapit_potholes']} potholes, {summary['mapit_speed_bumps']} speed bumps)"
        )
        click.echo(
            "severity histogram (potholes): "
            + " ".join(f"{name}={hist[code]}" for code, name in ((1, "minor"), (2, "moderate"), (3, "major"), (4, "severe")))
        )
        click.echo(
            f"unlabeled speed bumps: {summary['unlabeled_speed_bumps']}"
            f"/{summary['full_speed_bumps']} ({summary['unlabeled_speed_bump_pct']}%)"
        )

    _guarded(run)


def _format_verify_report(report: dict) -> list[str]:
    lines = [
        f"# verify seed={report['seed']} batch={report['batch_id']} "
        f"tasks={report['n_tasks']} annotations={report['n_annotations']}"
    ]
    lines.append("category matches (consensus vs field label):")
    for label in (HazardType.POTHOLE.value, HazardType.SPEED_BUMP.value):
        row = report["category_matches"].get(label)
        if row is None:
            continue
        lines.append(
            f"  {label:<11} {row['matched']}/{row['total']} ({round(100 * row['rate'])}%)"
        )
    agreement = report["agreement"]
    lines.append(
        f"agreement overall: {agreement['overall']:.2f} "
        f"({agreement['matched']}/{agreement['total']}), ambiguous: {report['ambiguous']}"
    )
    lines.append("reliability (one-way random-effects ICC over matched tasks):")
    lines.append(
        "  attribute          n    k    min  max  mean   median  ICC(1,k)  p_value"
    )
    for attribute, row in report["icc"].items():
        if not row.get("available"):
            lines.append(f"  {attribute:<18} (not computable)")
            continue
        icc_avg = row["icc_average"]
        p = row["p_value"]
        lines.append(
            f"  {attribute:<18} {row['n']:<4} {row['k']:<4} "
            f"{row['min']:<4.1f} {row['max']:<4.1f} {row['mean']:<6.2f} "
            f"{row['median']:<7.1f} "
            + (f"{icc_avg:<9.3f} " if icc_avg is not None else "n/a       ")
            + (f"{p:.2e}" if p is not None else "n/a")
        )
    ws = report["worker_stats"]
    lines.append(
        f"workers: {ws['n_workers']}, HITs/worker mean {ws['hits_per_worker']['mean']:.1f} "
        f"max {ws['hits_per_worker']['max']}; duration mean {ws['duration']['mean_s']:.1f}s "
        f"median {ws['duration']['median_s']:.1f}s max {ws['duration']['max_s']:.1f}s"
    )
    return lines


@main.command()
@click.option("--n", "n_tasks", type=int, default=None, help="Batch size.")
@click.option("--k", type=int, default=None, help="Annotations per task.")
@click.option("--annotator", type=click.Choice(sorted(MODELS)), default=None)
@click.option("--n-workers", type=int, default=None)
@click.option(
    "--annotations-file",
    type=click.Path(exists=True),
    default=None,
    help="Replay a recorded batch instead of sampling the store.",
)
@click.pass_context
def verify(ctx, n_tasks, k, annotator, n_workers, annotations_file):
    """Run a verification batch and print its statistics."""

    def run():
        cfg = _load_config(ctx.obj)
        vcfg = cfg.verification
        if n_tasks is not None:
            vcfg.n = n_tasks
        if k is not None:
            vcfg.k = k
        if annotator is not None:
            vcfg.annotator = annotator
        if n_workers is not None:
            vcfg.n_workers = n_workers

        if annotations_file is not None:
            doc = json.loads(Path(annotations_file).read_text(encoding="utf-8"))
            engine, batch = load_recorded_batch(doc)
        else:
            store = ReportStore(cfg.data_dir)
            reports = store.all_reports()
            if not reports:
                raise ValidationFailed(
                    ["store has no reports; run `roadwatch simulate` or submit some first"]
                )
            engine = VerificationEngine(k=vcfg.k)
            batch = engine.sample_batch(reports, n=vcfg.n, seed=vcfg.seed)
            model = MODELS[vcfg.annotator]()
            run_batch(
                engine,
                batch,
                {r.report_id: r for r in reports},
                model,
                n_workers=vcfg.n_workers,
                seed=vcfg.seed,
            )

        report = verification_report(engine, batch.batch_id)
        out_dir = cfg.data_dir / "verification"
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(
            codec.canonical_dumps(report) + "\n", encoding="utf-8"
        )
        (out_dir / "batch.json").write_text(
            codec.canonical_dumps(recorded_batch_to_dict(engine, batch)) + "\n",
            encoding="utf-8",
        )
        for attribute in report["icc"]:
            matrix = engine.rating_matrix(batch.batch_id, attribute)
            if matrix is not None:
                (out_dir / f"ratings_{attribute}.csv").write_text(
                    matrix.to_csv(), encoding="utf-8"
                )
        for line in _format_verify_report(report):
            click.echo(line)

    _guarded(run)


@main.command()
@click.option("--out-dir", type=click.Path(), default=None, help="Defaults to DATA_DIR/exports.")
@click.option("--cell-size-m", type=float, default=None)
@click.option("--regions", type=click.Path(exists=True), default=None)
@click.option("--bbox", default=None, help="min_lat,min_lon,max_lat,max_lon")
@click.pass_context
def export(ctx, out_dir, cell_size_m, regions, bbox):
    """Write map layers, a heatmap grid, and region coverage counts."""

    def run():
        cfg = _load_config(ctx.obj)
        store = ReportStore(cfg.data_dir)
        reports = store.all_reports()
        cell = cell_size_m if cell_size_m is not None else cfg.export.cell_size_m
        if bbox is not None:
            parts = [float(p) for p in bbox.split(",")]
            if len(parts) != 4:
                raise ValidationFailed(["bbox must be 'min_lat,min_lon,max_lat,max_lon'"])
            extent = BoundingBox(*parts)
        else:
            extent = ring_bbox(cfg.field_study.extent)
        target = Path(out_dir) if out_dir is not None else cfg.data_dir / "exports"
        target.mkdir(parents=True, exist_ok=True)

        written = []

        def emit(name: str, text: str):
            path = target / name
            path.write_text(text, encoding="utf-8")
            written.append((name, path))

        emit("layer_all.geojson", layer_to_json(export_layer(reports)))
        for hazard_type in HazardType:
            emit(
                f"layer_{hazard_type.value}.geojson",
                layer_to_json(export_layer(reports, hazard_type=hazard_type)),
            )
        emit("pins.geojson", layer_to_json(export_pin_layer(store.all_pins())))
        grid = heatmap(reports, extent, cell_size_m=cell)
        emit("heatmap.json", grid.to_json() + "\n")
        emit("heatmap.csv", grid.to_csv())
        region_set = _load_regions(regions, cfg)
        if region_set is not None:
            coverage = region_coverage(reports, region_set)
            emit("coverage.json", codec.canonical_dumps({"coverage": coverage}) + "\n")

        click.echo(f"# export reports={len(reports)} pins={len(store.all_pins())} cell={cell}")
        for name, path in written:
            click.echo(f"wrote {path}")

    _guarded(run)


@main.command(name="leaderboard")
@click.option("--n", "top_n", type=int, default=5)
@click.option("--regions", type=click.Path(exists=True), default=None)
@click.pass_context
def leaderboard_cmd(ctx, top_n, regions):
    """Rank contributors by unique, verified reports."""

    def run():
        cfg = _load_config(ctx.obj)
        store = ReportStore(cfg.data_dir)
        entries = leaderboard(
            store,
            n=top_n,
            regions=_load_regions(regions, cfg),
            dedup_radius_m=cfg.service.dedup_radius_m,
        )
        click.echo(f"# leaderboard n={top_n}")
        click.echo("rank  user_id            unique_reports  regions_covered")
        for rank, entry in enumerate(entries, start=1):
            click.echo(
                f"{rank:<5} {entry.user_id:<18} {entry.unique_report_count:<15} {entry.regions_covered}"
            )

    _guarded(run)


if __name__ == "__main__":
    main()
