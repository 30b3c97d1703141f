// Wire types mirroring the service's canonical JSON (snake_case fields).

export type HazardType = "pothole" | "speed_bump";

export type ImageCategory =
  | "pothole"
  | "speed_bump"
  | "both"
  | "uneven_or_cracked"
  | "smooth";

export type Orientation = "portrait" | "landscape";

export interface GeoPoint {
  lat: number;
  lon: number;
}

export interface PotholeAttrs {
  size: number; // 1..3
  severity: number; // 1..4
}

export interface SpeedBumpAttrs {
  size: number; // 1..3
  bump_count: number; // >= 1
  labeled: boolean;
}

export type HazardAttrs = PotholeAttrs | SpeedBumpAttrs;

export interface ImagePayload {
  width: number;
  height: number;
  orientation: Orientation;
  quality: number;
  encoded_bytes: string;
  source_digest: string;
}

export interface HazardReport {
  report_id: string;
  idempotency_key: string;
  user_id: string;
  hazard_type: HazardType;
  attrs: HazardAttrs;
  road_type: string;
  gps_location: GeoPoint;
  corrected_location: GeoPoint;
  image: ImagePayload;
  created_at: string; // UTC ISO-8601, Z suffix
}

export interface MapItPin {
  pin_id: string;
  user_id: string;
  hazard_type: HazardType;
  location: GeoPoint;
  created_at: string;
}

export interface UserIdentity {
  user_id: string;
  phone_digest: string;
  enrolled_at: string;
}

export interface SubmitAck {
  report_id?: string;
  pin_id?: string;
  created: boolean;
}

export interface AnnotationTaskWire {
  task_id: string;
  report_id: string;
  image_digest: string;
  required_annotations: number;
  max_duration_s: number;
  reward_usd: number;
  questions: {
    category: ImageCategory[];
    conditional: Record<string, string[]>;
  };
  image?: ImagePayload;
}

export interface AnnotationPayload {
  worker_id: string;
  category: ImageCategory;
  attrs: Record<string, number | boolean> | null;
  duration_s: number;
}

export interface LayerFeature {
  type: "Feature";
  geometry: { type: "Point"; coordinates: [number, number] };
  properties: {
    report_id?: string;
    pin_id?: string;
    hazard_type: HazardType;
    severity?: number | null;
    verified?: boolean | null;
    created_at: string;
  };
}

export interface FeatureCollection {
  type: "FeatureCollection";
  name?: string;
  features: LayerFeature[];
}

export interface HeatmapGridWire {
  origin: GeoPoint;
  cell_size_m: number;
  rows: number[][];
  out_of_extent: number;
}

export interface BBox {
  min_lat: number;
  min_lon: number;
  max_lat: number;
  max_lon: number;
}

export function formatTimestamp(date: Date): string {
  return date.toISOString().replace(/\.\d{3}Z$/, "Z");
}
