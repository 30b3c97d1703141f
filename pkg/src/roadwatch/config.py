"""Pipeline configuration: defaults, JSON config files, CLI overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .client.simulate import FieldStudyConfig
from .core.errors import ConfigError

SALT_ENV = "ROADWATCH_SALT"
DEFAULT_SALT = "roadwatch-dev-salt"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    salt: str = ""
    dedup_radius_m: float = 25.0

    def resolved_salt(self) -> str:
        return self.salt or os.environ.get(SALT_ENV, DEFAULT_SALT)


@dataclass
class VerificationConfig:
    n: int = 50
    k: int = 10
    seed: int = 7
    annotator: str = "noisy"
    n_workers: int = 39


@dataclass
class ExportConfig:
    cell_size_m: float = 250.0
    regions_path: str | None = None


@dataclass
class PipelineConfig:
    data_dir: Path = Path("./data")
    seed: int | None = None
    service: ServiceConfig = field(default_factory=ServiceConfig)
    field_study: FieldStudyConfig = field(default_factory=FieldStudyConfig)
    verification: VerificationConfig = field(default_factory=VerificationConfig)
    export: ExportConfig = field(default_factory=ExportConfig)

    def apply_seed_override(self) -> None:
        """A top-level seed overrides the per-stage seeds."""
        if self.seed is not None:
            self.field_study.seed = self.seed
            self.verification.seed = self.seed


def _update_dataclass(target, values: dict, path: str) -> None:
    for key, value in values.items():
        if not hasattr(target, key):
            raise ConfigError(f"unknown config key: {path}.{key}")
        setattr(target, key, value)


def _coerce_field_study(value: dict) -> dict:
    """Convert JSON-friendly shapes into the simulator's native types."""
    from .core.geo import GeoPoint

    value = dict(value)
    if "severity_histogram" in value:
        value["severity_histogram"] = {
            int(code): float(mass) for code, mass in value["severity_histogram"].items()
        }
    if "gps_error_range_m" in value:
        lo, hi = value["gps_error_range_m"]
        value["gps_error_range_m"] = (float(lo), float(hi))
    if "extent" in value:
        value["extent"] = [GeoPoint(float(lat), float(lon)) for lat, lon in value["extent"]]
    return value


def load_pipeline_config(config_path: str | Path | None = None) -> PipelineConfig:
    """Build the config from defaults overlaid with a JSON file."""
    cfg = PipelineConfig()
    if config_path is None:
        return cfg
    try:
        doc = json.loads(Path(config_path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    scalar_keys = {"data_dir", "seed"}
    section_targets = {
        "service": cfg.service,
        "field_study": cfg.field_study,
        "verification": cfg.verification,
        "export": cfg.export,
    }
    for key, value in doc.items():
        if key in scalar_keys:
            setattr(cfg, key, Path(value) if key == "data_dir" else value)
        elif key in section_targets:
            if not isinstance(value, dict):
                raise ConfigError(f"config section {key} must be an object")
            if key == "field_study":
                value = _coerce_field_study(value)
            _update_dataclass(section_targets[key], value, key)
        else:
            raise ConfigError(f"unknown config key: {key}")
    return cfg
