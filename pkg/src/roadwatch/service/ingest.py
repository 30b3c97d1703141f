"""Ingestion service: registration, idempotent intake, and querying."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Mapping

from ..core import codec
from ..core.errors import UnknownUser, ValidationFailed
from ..core.geo import BoundingBox
from ..core.identity import derive_identity
from ..core.types import HazardReport, HazardType, MapItPin, PotholeAttrs, UserIdentity
from ..core.validation import validate_pin, validate_report
from .dedup import DEFAULT_DEDUP_RADIUS_M
from .store import ReportStore


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class Ack:
    """Intake acknowledgement: the stored id plus whether this call created it."""

    id: str
    created: bool


class IngestionService:
    """Validating, idempotent front door to the report store."""

    def __init__(
        self,
        store: ReportStore,
        salt: str,
        dedup_radius_m: float = DEFAULT_DEDUP_RADIUS_M,
        clock: Callable[[], datetime] = _utcnow,
    ):
        self.store = store
        self.salt = salt
        self.dedup_radius_m = dedup_radius_m
        self.clock = clock

    # -- users ----------------------------------------------------------

    def register(self, phone: str) -> UserIdentity:
        """Derive the anonymized identity for a phone number.

        Re-registering the same phone returns the original record.
        """
        identity = derive_identity(phone, self.salt, enrolled_at=self.clock())
        return self.store.put_user(identity)

    def _require_user(self, user_id: str) -> None:
        if self.store.get_user(user_id) is None:
            raise UnknownUser(user_id)

    # -- intake -----------------------------------------------------------

    def submit_report(self, report: HazardReport | Mapping) -> Ack:
        if isinstance(report, Mapping):
            report = codec.report_from_dict(report)
        violations = validate_report(report)
        if violations:
            raise ValidationFailed(violations)
        self._require_user(report.user_id)
        report_id, created = self.store.put_report(report)
        return Ack(id=report_id, created=created)

    def submit_mapit(self, pin: MapItPin | Mapping) -> Ack:
        if isinstance(pin, Mapping):
            pin = codec.pin_from_dict(pin)
        violations = validate_pin(pin)
        if violations:
            raise ValidationFailed(violations)
        self._require_user(pin.user_id)
        pin_id, created = self.store.put_pin(pin)
        return Ack(id=pin_id, created=created)

    def submit(self, item: HazardReport | MapItPin) -> Ack:
        """Outbox-compatible entry point dispatching on item type."""
        if isinstance(item, HazardReport):
            return self.submit_report(item)
        return self.submit_mapit(item)

    # -- queries -----------------------------------------------------------

    def query_reports(
        self,
        bbox: BoundingBox,
        hazard_type: HazardType | None = None,
        severity_min: int | None = None,
        since: datetime | None = None,
    ) -> list[HazardReport]:
        """Reports whose corrected location lies in the closed bbox, matching
        every given filter; ordered by (created_at, report_id)."""
        bad = bbox.validate()
        if bad:
            raise ValidationFailed(bad)
        out = []
        for report in self.store.all_reports():
            if not bbox.contains(report.corrected_location):
                continue
            if hazard_type is not None and report.hazard_type is not hazard_type:
                continue
            if severity_min is not None:
                if not isinstance(report.attrs, PotholeAttrs):
                    continue
                if report.attrs.severity < severity_min:
                    continue
            if since is not None and report.created_at < since:
                continue
            out.append(report)
        return out
