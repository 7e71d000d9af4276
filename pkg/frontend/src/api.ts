import type {
  BenchmarkRequest,
  HardwareInfo,
  Job,
  MetricsEvent,
  Recommendation,
  ResultGroup,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `request failed with status ${response.status}`;
}

/**
 * Thin typed client over the service REST API. The fetch implementation is
 * injected so tests can drive every flow without a server.
 */
export class ApiClient {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.getJson("/api/health");
  }

  hardware(): Promise<HardwareInfo> {
    return this.getJson("/api/hardware");
  }

  recommendations(): Promise<Recommendation[]> {
    return this.getJson("/api/recommendations");
  }

  groups(filters: { model?: string; platform?: string } = {}): Promise<ResultGroup[]> {
    const params = new URLSearchParams();
    if (filters.model) params.set("model", filters.model);
    if (filters.platform) params.set("platform", filters.platform);
    const query = params.toString();
    return this.getJson(`/api/benchmarks${query ? `?${query}` : ""}`);
  }

  job(jobId: string): Promise<Job> {
    return this.getJson(`/api/benchmarks/jobs/${encodeURIComponent(jobId)}`);
  }

  async launchBenchmark(request: BenchmarkRequest): Promise<{ job_id: string }> {
    const response = await this.fetchFn(`${this.baseUrl}/api/benchmarks`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as { job_id: string };
  }

  metricsStreamUrl(): string {
    return `${this.baseUrl}/api/metrics/live`;
  }
}
