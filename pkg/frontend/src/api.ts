// Thin typed client for the /v1 API. Implemented against an injectable
// fetch so tests can run it against canned responses.

import type {
  BandInfo,
  ClusterRequest,
  CoherencePayload,
  DatasetMeta,
  LayoutPayload,
  MergeHistory,
  RunStatus,
  SpectraPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Api {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    const text = await resp.text();
    if (!resp.ok && resp.status !== 202) {
      let message = text;
      try {
        message = JSON.parse(text).error ?? text;
      } catch {
        // keep raw body
      }
      throw new ApiError(resp.status, message);
    }
    return JSON.parse(text) as T;
  }

  datasets(): Promise<{ datasets: DatasetMeta[] }> {
    return this.request("/v1/datasets");
  }

  bands(): Promise<{ bands: BandInfo[] }> {
    return this.request("/v1/bands");
  }

  layout(dsId: string): Promise<LayoutPayload> {
    return this.request(`/v1/datasets/${dsId}/layout`);
  }

  cluster(dsId: string, req: ClusterRequest): Promise<{ run_id: string; status: string }> {
    return this.request(`/v1/datasets/${dsId}/cluster`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  run(runId: string): Promise<RunStatus> {
    return this.request(`/v1/runs/${runId}`);
  }

  merges(runId: string): Promise<MergeHistory> {
    return this.request(`/v1/runs/${runId}/merges`);
  }

  coherence(runId: string, k: number, channel: string): Promise<CoherencePayload> {
    return this.request(
      `/v1/runs/${runId}/coherence?k=${k}&channel=${encodeURIComponent(channel)}`);
  }

  spectra(runId: string, k: number, channel: string): Promise<SpectraPayload> {
    return this.request(
      `/v1/runs/${runId}/spectra?k=${k}&channel=${encodeURIComponent(channel)}`);
  }
}
