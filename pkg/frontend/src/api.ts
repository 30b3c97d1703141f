// Thin fetch client for the service's HTTP/JSON endpoints.

import type {
  AnnotationPayload,
  AnnotationTaskWire,
  BBox,
  FeatureCollection,
  HazardReport,
  HazardType,
  HeatmapGridWire,
  MapItPin,
  SubmitAck,
  UserIdentity,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`API error ${status}: ${JSON.stringify(body)}`);
  }
}

function bboxParam(bbox: BBox): string {
  return [bbox.min_lat, bbox.min_lon, bbox.max_lat, bbox.max_lon].join(",");
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, payload);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  register(phone: string): Promise<UserIdentity> {
    return this.request("POST", "/users", { phone });
  }

  submitReport(report: HazardReport): Promise<SubmitAck> {
    return this.request("POST", "/reports", report);
  }

  submitPin(pin: MapItPin): Promise<SubmitAck> {
    return this.request("POST", "/mapit", pin);
  }

  queryReports(bbox: BBox, type?: HazardType): Promise<{ reports: HazardReport[] }> {
    const params = new URLSearchParams({ bbox: bboxParam(bbox) });
    if (type) params.set("type", type);
    return this.request("GET", `/reports?${params.toString()}`);
  }

  nextTask(worker: string, batch?: string): Promise<{ task: AnnotationTaskWire | null }> {
    const params = new URLSearchParams({ worker });
    if (batch) params.set("batch", batch);
    return this.request("GET", `/tasks/next?${params.toString()}`);
  }

  submitAnnotation(
    taskId: string,
    annotation: AnnotationPayload,
  ): Promise<{ status: string; task_closed: boolean }> {
    return this.request("POST", `/tasks/${taskId}/annotations`, annotation);
  }

  createBatch(n: number, seed: number, annotator?: string): Promise<{ batch_id: string; task_ids: string[] }> {
    return this.request("POST", "/batches", { n, seed, annotator });
  }

  layer(type?: HazardType): Promise<FeatureCollection> {
    const params = new URLSearchParams();
    if (type) params.set("type", type);
    const query = params.toString();
    return this.request("GET", `/export/layer${query ? "?" + query : ""}`);
  }

  pinLayer(): Promise<FeatureCollection> {
    return this.request("GET", "/export/pins");
  }

  heatmap(bbox: BBox, cellSizeM?: number): Promise<HeatmapGridWire> {
    const params = new URLSearchParams({ bbox: bboxParam(bbox) });
    if (cellSizeM !== undefined) params.set("cell_size_m", String(cellSizeM));
    return this.request("GET", `/export/heatmap?${params.toString()}`);
  }
}
