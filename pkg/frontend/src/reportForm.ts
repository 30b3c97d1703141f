// Report submission flow: pick a hazard type, answer its attribute
// questions, attach a photo, and place the location marker. The GPS fix
// stays untouched while the marker is dragged, so the emitted payload
// carries both the raw fix and the human correction.

import { hazardReportSchema } from "./schemas.js";
import { ApiClient } from "./api.js";
import type { ConsoleOutbox } from "./outbox.js";
import type {
  GeoPoint,
  HazardAttrs,
  HazardReport,
  HazardType,
  ImagePayload,
} from "./types.js";
import { formatTimestamp } from "./types.js";

export type UploadMode = "immediate" | "save_local";

export type SubmitOutcome =
  | { kind: "submitted"; reportId: string; created: boolean }
  | { kind: "saved_local" }
  | { kind: "rejected"; reasons: string[] };

export interface ReportFormDeps {
  userId: string;
  api: ApiClient;
  outbox: ConsoleOutbox;
  now?: () => Date;
  newId?: () => string;
}

const POTHOLE_QUESTIONS = ["size", "severity"] as const;
const SPEED_BUMP_QUESTIONS = ["size", "bump_count", "labeled"] as const;

export function questionsFor(type: HazardType): readonly string[] {
  return type === "pothole" ? POTHOLE_QUESTIONS : SPEED_BUMP_QUESTIONS;
}

export class ReportForm {
  hazardType: HazardType | null = null;
  answers: Record<string, number | boolean> = {};
  image: ImagePayload | null = null;
  roadType = "";
  gpsPoint: GeoPoint | null = null;
  markerPoint: GeoPoint | null = null;
  uploadMode: UploadMode = "immediate";
  status: "editing" | "pending_local" | "submitted" = "editing";

  private markerDragged = false;
  private now: () => Date;
  private newId: () => string;

  constructor(private deps: ReportFormDeps) {
    this.now = deps.now ?? (() => new Date());
    this.newId = deps.newId ?? (() => crypto.randomUUID());
  }

  setGpsFix(point: GeoPoint): void {
    this.gpsPoint = point;
    if (!this.markerDragged) {
      this.markerPoint = point;
    }
  }

  dragMarker(point: GeoPoint): void {
    this.markerDragged = true;
    this.markerPoint = point;
  }

  chooseType(type: HazardType): void {
    if (this.hazardType !== type) {
      this.hazardType = type;
      this.answers = {}; // stale answers from the other question set
    }
  }

  answer(question: string, value: number | boolean): void {
    if (!this.hazardType) return;
    if (!questionsFor(this.hazardType).includes(question)) return;
    this.answers[question] = value;
  }

  attachImage(image: ImagePayload): void {
    this.image = image;
  }

  setRoadType(roadType: string): void {
    this.roadType = roadType;
  }

  setUploadMode(mode: UploadMode): void {
    this.uploadMode = mode;
  }

  missing(): string[] {
    const gaps: string[] = [];
    if (!this.hazardType) gaps.push("hazard type");
    if (this.hazardType) {
      for (const q of questionsFor(this.hazardType)) {
        if (!(q in this.answers)) gaps.push(`answer: ${q}`);
      }
    }
    if (!this.image) gaps.push("photo");
    if (!this.gpsPoint || !this.markerPoint) gaps.push("location");
    return gaps;
  }

  canSubmit(): boolean {
    return this.missing().length === 0;
  }

  buildReport(): HazardReport {
    if (!this.canSubmit()) {
      throw new Error("form incomplete: " + this.missing().join(", "));
    }
    const attrs =
      this.hazardType === "pothole"
        ? { size: this.answers.size as number, severity: this.answers.severity as number }
        : {
            size: this.answers.size as number,
            bump_count: this.answers.bump_count as number,
            labeled: this.answers.labeled as boolean,
          };
    return {
      report_id: "r-" + this.newId(),
      idempotency_key: this.newId(),
      user_id: this.deps.userId,
      hazard_type: this.hazardType!,
      attrs: attrs as HazardAttrs,
      road_type: this.roadType,
      gps_location: this.gpsPoint!,
      corrected_location: this.markerPoint!,
      image: this.image!,
      created_at: formatTimestamp(this.now()),
    };
  }

  /**
   * Submit the completed form. Incomplete forms are rejected; a network
   * failure in immediate mode falls back to the local outbox so no report
   * is ever lost.
   */
  async submit(): Promise<SubmitOutcome> {
    if (!this.canSubmit()) {
      return { kind: "rejected", reasons: this.missing() };
    }
    const report = this.buildReport();
    const check = hazardReportSchema.safeParse(report);
    if (!check.success) {
      return { kind: "rejected", reasons: check.error.issues.map((i) => i.message) };
    }
    if (this.uploadMode === "save_local") {
      this.deps.outbox.save(report);
      this.status = "pending_local";
      return { kind: "saved_local" };
    }
    try {
      const ack = await this.deps.api.submitReport(report);
      this.status = "submitted";
      return { kind: "submitted", reportId: ack.report_id ?? report.report_id, created: ack.created };
    } catch {
      this.deps.outbox.save(report);
      this.status = "pending_local";
      return { kind: "saved_local" };
    }
  }
}
