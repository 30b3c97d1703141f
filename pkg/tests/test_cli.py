import json
import socket
import threading
import time
from pathlib import Path

import pytest
from click.testing import CliRunner

from roadwatch.cli import main
from roadwatch.core import codec
from roadwatch.core.geo import haversine_distance
from roadwatch.service import ReportStore

FIXTURE = Path(__file__).parent / "fixtures" / "reconstruction_batch.json"


def _run(*args):
    return CliRunner().invoke(main, list(args), catch_exceptions=False)


def test_simulate_counts_and_determinism(tmp_path):
    args = ("--data-dir", str(tmp_path / "a"), "--seed", "2015", "simulate")
    first = _run(*args)
    assert first.exit_code == 0
    assert "full reports: 101 (63 potholes, 38 speed bumps)" in first.output
    assert "mapit pins: 153" in first.output
    second = _run("--data-dir", str(tmp_path / "b"), "--seed", "2015", "simulate")
    assert second.output == first.output  # byte-identical summaries


def test_simulate_store_populated(tmp_path):
    data_dir = tmp_path / "data"
    result = _run("--data-dir", str(data_dir), "--seed", "7", "simulate")
    assert result.exit_code == 0
    store = ReportStore(data_dir)
    assert len(store.reports) == 101
    assert len(store.pins) == 153
    assert (data_dir / "field_reports.jsonl").exists()
    assert (data_dir / "summary.json").exists()


def test_simulate_emitted_jsonl_gps_error_in_range(tmp_path):
    data_dir = tmp_path / "data"
    _run("--data-dir", str(data_dir), "--seed", "9", "simulate")
    for line in (data_dir / "field_reports.jsonl").read_text().splitlines():
        report = codec.report_from_dict(json.loads(line))
        d = haversine_distance(report.gps_location, report.corrected_location)
        assert 100.0 <= d <= 250.0


def test_verify_from_store(tmp_path):
    data_dir = tmp_path / "data"
    _run("--data-dir", str(data_dir), "--seed", "5", "simulate")
    result = _run("--data-dir", str(data_dir), "verify", "--annotator", "perfect", "--n", "20")
    assert result.exit_code == 0
    assert "agreement overall: 1.00" in result.output
    report = json.loads((data_dir / "verification" / "report.json").read_text())
    assert report["agreement"]["overall"] == 1.0
    assert (data_dir / "verification" / "batch.json").exists()


def test_verify_requires_reports(tmp_path):
    result = CliRunner().invoke(
        main, ["--data-dir", str(tmp_path / "empty"), "verify"], catch_exceptions=False
    )
    assert result.exit_code == 1
    assert "no reports" in result.output


def test_verify_recorded_fixture(tmp_path):
    result = _run(
        "--data-dir", str(tmp_path / "data"), "verify", "--annotations-file", str(FIXTURE)
    )
    assert result.exit_code == 0
    assert "agreement overall: 0.92 (46/50), ambiguous: 4" in result.output
    assert "pothole     34/34 (100%)" in result.output
    assert "speed_bump  12/16 (75%)" in result.output


def test_verify_table_consistent_with_exported_csv(tmp_path):
    data_dir = tmp_path / "data"
    _run("--data-dir", str(data_dir), "verify", "--annotations-file", str(FIXTURE))
    report = json.loads((data_dir / "verification" / "report.json").read_text())
    for attribute, row in report["icc"].items():
        if not row.get("available"):
            continue
        csv_path = data_dir / "verification" / f"ratings_{attribute}.csv"
        values = []
        for line in csv_path.read_text().splitlines()[1:]:
            values += [float(v) for v in line.split(",")[1:]]
        assert row["mean"] == pytest.approx(sum(values) / len(values), abs=1e-12)
        assert row["min"] == min(values)
        assert row["max"] == max(values)
        ordered = sorted(int(v) for v in values)
        lower_median = ordered[(len(ordered) - 1) // 2]
        assert row["median"] == float(lower_median)


def test_export_files_and_determinism(tmp_path):
    data_dir = tmp_path / "data"
    _run("--data-dir", str(data_dir), "--seed", "3", "simulate")
    out_a = tmp_path / "out_a"
    out_b = tmp_path / "out_b"
    first = _run("--data-dir", str(data_dir), "export", "--out-dir", str(out_a))
    assert first.exit_code == 0
    layer = json.loads((out_a / "layer_all.geojson").read_text())
    assert len(layer["features"]) == 101
    _run("--data-dir", str(data_dir), "export", "--out-dir", str(out_b))
    for name in ("layer_all.geojson", "heatmap.json", "pins.geojson"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_export_coverage_with_uncovered_region(tmp_path):
    data_dir = tmp_path / "data"
    _run("--data-dir", str(data_dir), "--seed", "3", "simulate")
    regions_doc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [
                        [[36.0, -1.5], [38.0, -1.5], [38.0, -1.0], [36.0, -1.0], [36.0, -1.5]]
                    ],
                },
                "properties": {"name": "everything"},
            },
            {
                "type": "Feature",
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [
                        [[10.0, 10.0], [10.1, 10.0], [10.1, 10.1], [10.0, 10.1], [10.0, 10.0]]
                    ],
                },
                "properties": {"name": "far-away"},
            },
        ],
    }
    regions_path = tmp_path / "regions.geojson"
    regions_path.write_text(json.dumps(regions_doc))
    out = tmp_path / "out"
    result = _run(
        "--data-dir", str(data_dir), "export", "--out-dir", str(out), "--regions", str(regions_path)
    )
    assert result.exit_code == 0
    coverage = json.loads((out / "coverage.json").read_text())["coverage"]
    assert coverage["far-away"] == 0  # renders gray
    assert coverage["everything"] == 101


def test_leaderboard_command(tmp_path):
    data_dir = tmp_path / "data"
    _run("--data-dir", str(data_dir), "--seed", "11", "simulate")
    result = _run("--data-dir", str(data_dir), "leaderboard", "--n", "5")
    assert result.exit_code == 0
    rows = [line for line in result.output.splitlines() if line and line[0].isdigit()]
    assert len(rows) == 5


def test_config_file_applies(tmp_path):
    config = {
        "data_dir": str(tmp_path / "data"),
        "field_study": {"n_full_reports": 10, "n_mapit": 4, "seed": 1, "n_users": 3},
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    result = _run("--config", str(config_path), "simulate")
    assert result.exit_code == 0
    assert "full reports: 10" in result.output
    assert "mapit pins: 4" in result.output


def test_bad_config_exits_1(tmp_path):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({"field_study": {"nope": 1}}))
    result = CliRunner().invoke(
        main, ["--config", str(config_path), "simulate"], catch_exceptions=False
    )
    assert result.exit_code == 1
    assert "unknown config key" in result.output


def test_serve_port_in_use_exits_2(tmp_path):
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        result = CliRunner().invoke(
            main,
            [
                "--data-dir",
                str(tmp_path / "data"),
                "serve",
                "--host",
                "127.0.0.1",
                "--port",
                str(port),
            ],
            catch_exceptions=False,
        )
        assert result.exit_code == 2
        assert "cannot listen" in result.output
    finally:
        blocker.close()
