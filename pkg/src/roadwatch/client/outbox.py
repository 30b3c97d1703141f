"""Offline-first outbox: a FIFO store-and-forward queue with retry sync.

The queue persists as a single JSON file so a crash between rounds never
loses or duplicates entries; delivery relies on server-side idempotency
keys for the exactly-once guarantee.
"""

from __future__ import annotations

import os
import random
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Protocol

from ..core import codec
from ..core.errors import ConcurrentSyncError, DuplicateKey, ValidationFailed
from ..core.types import HazardReport, MapItPin
from ..core.validation import validate_pin, validate_report

OutboxItem = HazardReport | MapItPin


def item_key(item: OutboxItem) -> str:
    """Dedup key: the report's idempotency token, or the pin id."""
    if isinstance(item, HazardReport):
        return item.idempotency_key
    return item.pin_id


@dataclass
class OutboxEntry:
    item: OutboxItem
    attempt_count: int = 0
    last_error: str | None = None

    @property
    def key(self) -> str:
        return item_key(self.item)


@dataclass
class TransportModel:
    """Seeded lossy-link model: each leg of a round trip may drop.

    ``drop_probability`` applies independently to the request and to the
    acknowledgement; latency is drawn uniformly from ``latency_ms_range``.
    Deterministic given ``seed``.
    """

    drop_probability: float = 0.0
    latency_ms_range: tuple[float, float] = (20.0, 200.0)
    seed: int = 0
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.drop_probability <= 1.0:
            raise ValidationFailed([f"drop_probability out of [0, 1]: {self.drop_probability}"])
        lo, hi = self.latency_ms_range
        if lo < 0 or hi < lo:
            raise ValidationFailed([f"bad latency range: {self.latency_ms_range}"])
        self._rng = random.Random(self.seed)

    def attempt(self) -> tuple[bool, bool, float]:
        """Draw one round trip: (request_lost, ack_lost, latency_ms)."""
        request_lost = self._rng.random() < self.drop_probability
        ack_lost = self._rng.random() < self.drop_probability
        lo, hi = self.latency_ms_range
        return request_lost, ack_lost, self._rng.uniform(lo, hi)


class SubmitTarget(Protocol):
    """Anything that can accept outbox items: the in-process service or an
    HTTP client adapter."""

    def submit(self, item: OutboxItem) -> Any: ...


@dataclass(frozen=True)
class SyncReport:
    delivered: int
    remaining: int
    attempts: int
    rounds: int


class OutboxQueue:
    """FIFO queue of pending submissions, optionally file-backed.

    Single-writer by contract: concurrent syncs on one queue raise
    ConcurrentSyncError. Distinct queues may sync in parallel.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.entries: list[OutboxEntry] = []
        self._sync_gate = threading.Lock()

    def __len__(self) -> int:
        return len(self.entries)

    def keys(self) -> set[str]:
        return {e.key for e in self.entries}

    def enqueue(self, item: OutboxItem) -> None:
        """Append a validated item; duplicate keys are rejected."""
        if isinstance(item, HazardReport):
            violations = validate_report(item)
        elif isinstance(item, MapItPin):
            violations = validate_pin(item)
        else:
            raise ValidationFailed([f"unsupported outbox item: {type(item).__name__}"])
        if violations:
            raise ValidationFailed(violations)
        key = item_key(item)
        if any(e.key == key for e in self.entries):
            raise DuplicateKey(key)
        self.entries.append(OutboxEntry(item=item))
        self._persist()

    def sync(
        self,
        transport: TransportModel,
        server: SubmitTarget,
        max_rounds: int = 1,
    ) -> SyncReport:
        """Resubmit pending entries in FIFO order until delivered or rounds
        run out.

        An entry leaves the queue only when its acknowledgement arrives; a
        stored-but-unacked entry is retried and deduplicated server-side, so
        delivery is exactly-once for any drop probability below 1.
        """
        if not self._sync_gate.acquire(blocking=False):
            raise ConcurrentSyncError("sync already in progress on this queue")
        try:
            delivered = 0
            attempts = 0
            rounds = 0
            while self.entries and rounds < max_rounds:
                rounds += 1
                still_pending: list[OutboxEntry] = []
                for entry in self.entries:
                    attempts += 1
                    request_lost, ack_lost, _latency = transport.attempt()
                    if request_lost:
                        entry.attempt_count += 1
                        entry.last_error = "request lost"
                        still_pending.append(entry)
                        continue
                    server.submit(entry.item)
                    if ack_lost:
                        entry.attempt_count += 1
                        entry.last_error = "ack lost"
                        still_pending.append(entry)
                        continue
                    delivered += 1
                self.entries = still_pending
                self._persist()
            return SyncReport(
                delivered=delivered,
                remaining=len(self.entries),
                attempts=attempts,
                rounds=rounds,
            )
        finally:
            self._sync_gate.release()

    # -- persistence ---------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        out = []
        for e in self.entries:
            kind = "report" if isinstance(e.item, HazardReport) else "pin"
            payload = (
                codec.report_to_dict(e.item)
                if isinstance(e.item, HazardReport)
                else codec.pin_to_dict(e.item)
            )
            out.append(
                {
                    "kind": kind,
                    "item": payload,
                    "attempt_count": e.attempt_count,
                    "last_error": e.last_error,
                }
            )
        return {"entries": out}

    def save(self, path: str | Path | None = None) -> None:
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("no path configured for this queue")
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_suffix(target.suffix + ".tmp")
        tmp.write_text(codec.canonical_dumps(self.to_dict()), encoding="utf-8")
        os.replace(tmp, target)

    @classmethod
    def load(cls, path: str | Path) -> "OutboxQueue":
        import json

        path = Path(path)
        queue = cls(path=path)
        if not path.exists():
            return queue
        data = json.loads(path.read_text(encoding="utf-8"))
        for raw in data.get("entries", []):
            item: OutboxItem
            if raw["kind"] == "report":
                item = codec.report_from_dict(raw["item"])
            else:
                item = codec.pin_from_dict(raw["item"])
            queue.entries.append(
                OutboxEntry(
                    item=item,
                    attempt_count=int(raw.get("attempt_count", 0)),
                    last_error=raw.get("last_error"),
                )
            )
        return queue

    def _persist(self) -> None:
        if self.path is not None:
            self.save(self.path)
