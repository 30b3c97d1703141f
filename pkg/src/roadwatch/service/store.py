"""File-backed report store with content-addressed image blobs.

The whole metadata set lives in one JSON document rewritten atomically
(temp file + rename) on every mutation, so a crash mid-write can never
leave a torn store. Image bytes are kept once per content digest under
``blobs/`` and reports reference them by digest.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import threading
from pathlib import Path
from typing import Iterable

from ..core import codec
from ..core.errors import ValidationFailed
from ..core.types import HazardReport, ImagePayload, MapItPin, UserIdentity

STORE_FILENAME = "store.json"
BLOB_DIR = "blobs"


class ReportStore:
    """In-memory maps with optional directory persistence.

    Writes are serialized by an internal lock; the idempotency-key index is
    checked and updated under that lock, which is what makes concurrent
    resubmission collapse to a single row.
    """

    def __init__(self, data_dir: str | Path | None = None):
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.lock = threading.RLock()
        self.users: dict[str, UserIdentity] = {}
        self.reports: dict[str, HazardReport] = {}
        self.pins: dict[str, MapItPin] = {}
        self.by_idempotency_key: dict[str, str] = {}
        self._blobs: dict[str, bytes] = {}
        if self.data_dir is not None:
            self._load()

    # -- users -----------------------------------------------------------

    def get_user(self, user_id: str) -> UserIdentity | None:
        return self.users.get(user_id)

    def put_user(self, identity: UserIdentity) -> UserIdentity:
        """Insert if new; an existing row wins (keeps the first enrollment)."""
        with self.lock:
            existing = self.users.get(identity.user_id)
            if existing is not None:
                return existing
            self.users[identity.user_id] = identity
            self._persist()
            return identity

    # -- blobs -----------------------------------------------------------

    def put_blob(self, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        with self.lock:
            if digest not in self._blobs:
                self._blobs[digest] = data
                if self.data_dir is not None:
                    blob_dir = self.data_dir / BLOB_DIR
                    blob_dir.mkdir(parents=True, exist_ok=True)
                    path = blob_dir / digest
                    if not path.exists():
                        tmp = path.with_suffix(".tmp")
                        tmp.write_bytes(data)
                        os.replace(tmp, path)
        return digest

    def get_blob(self, digest: str) -> bytes:
        return self._blobs[digest]

    def blob_count(self) -> int:
        return len(self._blobs)

    # -- reports and pins --------------------------------------------------

    def put_report(self, report: HazardReport) -> tuple[str, bool]:
        """Insert atomically; returns (report_id, created).

        A replay of an existing idempotency key returns the original row's
        id with ``created=False`` and changes nothing.
        """
        with self.lock:
            existing_id = self.by_idempotency_key.get(report.idempotency_key)
            if existing_id is not None:
                return existing_id, False
            if report.report_id in self.reports:
                raise ValidationFailed(
                    [f"report_id {report.report_id} already used by a different submission"]
                )
            self.put_blob(base64.b64decode(report.image.encoded_bytes))
            self.reports[report.report_id] = report
            self.by_idempotency_key[report.idempotency_key] = report.report_id
            self._persist()
            return report.report_id, True

    def put_pin(self, pin: MapItPin) -> tuple[str, bool]:
        with self.lock:
            if pin.pin_id in self.pins:
                return pin.pin_id, False
            self.pins[pin.pin_id] = pin
            self._persist()
            return pin.pin_id, True

    def all_reports(self) -> list[HazardReport]:
        """Stable snapshot ordered by (created_at, report_id)."""
        return sorted(self.reports.values(), key=lambda r: (r.created_at, r.report_id))

    def all_pins(self) -> list[MapItPin]:
        return sorted(self.pins.values(), key=lambda p: (p.created_at, p.pin_id))

    # -- persistence -------------------------------------------------------

    def _report_record(self, r: HazardReport) -> dict:
        d = codec.report_to_dict(r)
        payload = base64.b64decode(r.image.encoded_bytes)
        digest = hashlib.sha256(payload).hexdigest()
        d["image"] = {k: v for k, v in d["image"].items() if k != "encoded_bytes"}
        d["image"]["blob_digest"] = digest
        return d

    def _report_from_record(self, d: dict) -> HazardReport:
        image = dict(d["image"])
        digest = image.pop("blob_digest")
        image["encoded_bytes"] = base64.b64encode(self.get_blob(digest)).decode("ascii")
        full = dict(d)
        full["image"] = image
        return codec.report_from_dict(full)

    def _persist(self) -> None:
        if self.data_dir is None:
            return
        self.data_dir.mkdir(parents=True, exist_ok=True)
        doc = {
            "users": [codec.identity_to_dict(u) for u in sorted(self.users.values(), key=lambda u: u.user_id)],
            "reports": [self._report_record(r) for r in self.all_reports()],
            "pins": [codec.pin_to_dict(p) for p in self.all_pins()],
        }
        path = self.data_dir / STORE_FILENAME
        tmp = path.with_suffix(".tmp")
        tmp.write_text(codec.canonical_dumps(doc), encoding="utf-8")
        os.replace(tmp, path)

    def _load(self) -> None:
        assert self.data_dir is not None
        blob_dir = self.data_dir / BLOB_DIR
        if blob_dir.is_dir():
            for blob_path in blob_dir.iterdir():
                if blob_path.suffix == ".tmp":
                    continue
                self._blobs[blob_path.name] = blob_path.read_bytes()
        path = self.data_dir / STORE_FILENAME
        if not path.exists():
            return
        doc = json.loads(path.read_text(encoding="utf-8"))
        for raw in doc.get("users", []):
            identity = codec.identity_from_dict(raw)
            self.users[identity.user_id] = identity
        for raw in doc.get("reports", []):
            report = self._report_from_record(raw)
            self.reports[report.report_id] = report
            self.by_idempotency_key[report.idempotency_key] = report.report_id
        for raw in doc.get("pins", []):
            pin = codec.pin_from_dict(raw)
            self.pins[pin.pin_id] = pin

    def flush(self) -> None:
        """Force a persistence pass (used at shutdown)."""
        with self.lock:
            self._persist()
