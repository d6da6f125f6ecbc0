// Client for the stateless analysis service. At most one request is in
// flight; responses arriving for an older sequence number are discarded.

import type {
  AlgoStateJson,
  AnalysisResponse,
  InstanceFile,
  StepResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  private seq = 0;
  private inFlight = false;

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  get busy(): boolean {
    return this.inFlight;
  }

  /** POST a body; resolves null when a newer request superseded this one. */
  private async post<T>(endpoint: string, body: unknown): Promise<T | null> {
    const mySeq = ++this.seq;
    this.inFlight = true;
    try {
      const resp = await this.fetchImpl(`${this.baseUrl}${endpoint}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      });
      if (mySeq !== this.seq) return null; // stale: a newer request went out
      if (!resp.ok) {
        let detail = `${resp.status}`;
        try {
          const doc = await resp.json();
          detail = doc.error ?? detail;
        } catch {
          /* non-JSON error body */
        }
        throw new ApiError(resp.status, detail);
      }
      return (await resp.json()) as T;
    } finally {
      if (mySeq === this.seq) this.inFlight = false;
    }
  }

  analyze(instance: InstanceFile, limits?: Record<string, unknown>): Promise<AnalysisResponse | null> {
    return this.post<AnalysisResponse>("/api/v1/analyze", {
      instance,
      command: { kind: "analyze" },
      ...(limits ? { limits } : {}),
    });
  }

  step(
    instance: InstanceFile,
    i: number,
    j: number,
    state: AlgoStateJson | null,
  ): Promise<StepResponse | null> {
    return this.post<StepResponse>("/api/v1/step", { instance, i, j, state });
  }

  async health(): Promise<boolean> {
    try {
      const resp = await this.fetchImpl(`${this.baseUrl}/api/v1/health`);
      return resp.ok;
    } catch {
      return false;
    }
  }
}
