// Thin HTTP client for the power service. Keeps at most one analysis
// request in flight: submitting again aborts the previous request, so a
// slow old response can never land on top of a newer one.

import type { AnalyzeRequest, AnalyzeResponse, ServiceError } from "./types.js";

export class ApiError extends Error {
  status: number;
  missing: string[];

  constructor(status: number, body: ServiceError) {
    super(body.error || "service returned " + status);
    this.name = "ApiError";
    this.status = status;
    this.missing = body.missing ?? [];
  }
}

export function isAbortError(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

export class ApiClient {
  baseUrl: string;
  private inflight: AbortController | null = null;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl;
  }

  async health(): Promise<{ status: string; engine_version: string }> {
    const res = await fetch(this.baseUrl + "/api/health");
    const body = await res.json();
    if (!res.ok) throw new ApiError(res.status, body as ServiceError);
    return body;
  }

  /** POST one analysis request, aborting any request still pending. */
  async analyze(req: AnalyzeRequest): Promise<AnalyzeResponse> {
    if (this.inflight) this.inflight.abort();
    const ctl = new AbortController();
    this.inflight = ctl;
    try {
      const res = await fetch(this.baseUrl + "/api/analyze", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(req),
        signal: ctl.signal,
      });
      const body = await res.json();
      if (!res.ok) throw new ApiError(res.status, body as ServiceError);
      return body as AnalyzeResponse;
    } finally {
      if (this.inflight === ctl) this.inflight = null;
    }
  }
}
