/** Typed client for the trendsketch HTTP service, with a single
 * in-flight query slot: issuing a new query aborts the pending one. */
import type {
  QueryPayload,
  QueryResponse,
  ResolutionResponse,
  SceneDocument,
  SignalPoints,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = typeof fetch;

async function parseResponse<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const init: RequestInit = {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    };
    if (signal) init.signal = signal;
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    return parseResponse<T>(resp);
  }

  async uploadDataset(
    csv: string,
    mapping: {
      time_field: string;
      categorical_fields: string[];
      measure_fields: string[];
      id_field?: string;
      time_format?: string;
    },
  ): Promise<{ dataset_id: string; warnings: string[] }> {
    const form = new FormData();
    form.append("file", new Blob([csv], { type: "text/csv" }), "data.csv");
    form.append("mapping", JSON.stringify(mapping));
    const resp = await this.fetchImpl(`${this.baseUrl}/datasets`, {
      method: "POST",
      body: form,
    });
    return parseResponse(resp);
  }

  async buildIndex(
    datasetId: string,
    penaltyConfig: object = {},
  ): Promise<{ index_id: string; indexed: number }> {
    return this.post(`/datasets/${datasetId}/index`, { penalty_config: penaltyConfig });
  }

  async query(indexId: string, payload: QueryPayload, signal?: AbortSignal): Promise<QueryResponse> {
    return this.post(`/indexes/${indexId}/query`, payload, signal);
  }

  async signalPoints(datasetId: string, signalId: string): Promise<SignalPoints> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/datasets/${datasetId}/signals/${encodeURIComponent(signalId)}/points`,
    );
    return parseResponse(resp);
  }

  async resolveScene(scene: SceneDocument): Promise<ResolutionResponse> {
    return this.post("/ps/resolve", scene);
  }
}

export type QueryOutcome =
  | { kind: "result"; response: QueryResponse }
  | { kind: "cancelled" }
  | { kind: "error"; error: ApiError };

/** At most one query in flight; newer input cancels the pending
 * request (the probe's Cancel button calls cancel() directly). */
export class QueryScheduler {
  private controller: AbortController | null = null;
  private issued = 0;

  constructor(
    private readonly client: ApiClient,
    private readonly indexId: string,
  ) {}

  /** Total requests issued, for testing and diagnostics. */
  get requestCount(): number {
    return this.issued;
  }

  get inFlight(): boolean {
    return this.controller !== null;
  }

  cancel(): void {
    if (this.controller) {
      this.controller.abort();
      this.controller = null;
    }
  }

  async run(payload: QueryPayload): Promise<QueryOutcome> {
    this.cancel();
    const controller = new AbortController();
    this.controller = controller;
    this.issued += 1;
    try {
      const response = await this.client.query(this.indexId, payload, controller.signal);
      return { kind: "result", response };
    } catch (err) {
      if (controller.signal.aborted) return { kind: "cancelled" };
      if (err instanceof ApiError) return { kind: "error", error: err };
      throw err;
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }
}
