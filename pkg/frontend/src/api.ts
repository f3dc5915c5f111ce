/** Typed client for the control service.  All magnetics come from here. */

import type {
  Assignment,
  CanvasResponse,
  JobDoc,
  MapDoc,
  PairsResponse,
  PatternDoc,
  ValidateResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    public baseUrl: string = "http://localhost:8000",
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, `backend unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const doc = await response.json();
        detail = typeof doc.detail === "string" ? doc.detail : JSON.stringify(doc.detail);
      } catch {
        /* no JSON body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  validatePattern(doc: PatternDoc): Promise<ValidateResponse> {
    return this.request("POST", "/patterns/validate", doc);
  }

  hadamard(order: number, name = ""): Promise<PatternDoc> {
    return this.request("POST", "/design/hadamard", { order, name });
  }

  pairs(k: number, order = 8, candidates = 64, mode = "attract", seed = 0): Promise<PairsResponse> {
    return this.request("POST", "/design/pairs", { k, order, candidates, mode, seed });
  }

  canvas(token: PatternDoc, assignments: Assignment[][]): Promise<CanvasResponse> {
    return this.request("POST", "/design/canvas", { token, assignments });
  }

  predictMap(a: PatternDoc, b: PatternDoc, normalization = "overlap"): Promise<MapDoc> {
    return this.request("POST", "/predict/map", { a, b, normalization });
  }

  plot(deviceId: string, pattern: PatternDoc): Promise<JobDoc> {
    return this.request("POST", `/devices/${deviceId}/plot`, { pattern });
  }

  scan(deviceId: string, rows: number, cols: number): Promise<JobDoc> {
    return this.request("POST", `/devices/${deviceId}/scan`, { rows, cols });
  }

  job(jobId: string): Promise<JobDoc> {
    return this.request("GET", `/jobs/${jobId}`);
  }

  sheet(deviceId: string): Promise<PatternDoc> {
    return this.request("GET", `/devices/${deviceId}/sheet`);
  }
}
