// Canned /v1 payloads for a six-channel two-group demo recording,
// captured from a real service run.

import type {
  CoherencePayload,
  DatasetMeta,
  LayoutPayload,
  MergeHistory,
  RunStatus,
  SpectraPayload,
} from "../src/types.js";

export const EXP1_LABELS = ["ch1", "ch2", "ch3", "ch4", "ch5", "ch6"];

export const EXP1_DATASET: DatasetMeta = {
  id: "ab12cd34ef56aa00",
  source: "experiment",
  n_channels: 6,
  n_samples: 1000,
  fs: 100.0,
  duration: 10.0,
  labels: EXP1_LABELS,
  has_layout: true,
};

export const EXP1_MERGES: MergeHistory = {
  method: "hcc-p1",
  band: { lo: 0.0, hi: 50.0, name: "full" },
  n_channels: 6,
  clamp_count: 0,
  steps: [
    { index: 1, merged: [4, 5], dissimilarity: 0.6451852836847138,
      membership: [0, 1, 2, 3, 4, 4] },
    { index: 2, merged: [0, 2], dissimilarity: 0.6858984086892548,
      membership: [0, 1, 0, 2, 3, 3] },
    { index: 3, merged: [3, 4], dissimilarity: 0.7747569772704318,
      membership: [0, 1, 0, 2, 2, 2] },
    { index: 4, merged: [0, 1], dissimilarity: 0.8073751336482915,
      membership: [0, 0, 0, 1, 1, 1] },
    { index: 5, merged: [0, 3], dissimilarity: 0.9776853377723788,
      membership: [0, 0, 0, 0, 0, 0] },
  ],
};

export const EXP1_RUN: RunStatus = {
  run_id: "1111222233334444",
  dataset_id: EXP1_DATASET.id,
  status: "done",
  suggested_k: 2,
  labels: EXP1_LABELS,
};

// synthetic hexagon layout so the scalp panel renders for the demo set
export const EXP1_LAYOUT: LayoutPayload = {
  positions: {
    ch1: [-0.8, 0.4], ch2: [-0.8, -0.4], ch3: [-0.3, 0.0],
    ch4: [0.8, 0.4], ch5: [0.8, -0.4], ch6: [0.3, 0.0],
  },
};

export const EXP1_COHERENCE_K2: CoherencePayload = {
  k: 2,
  focal: "ch1",
  channels: ["ch1", "ch2", "ch3"],
  matrix: [
    [1.0, 0.41, 0.38],
    [0.41, 1.0, 0.36],
    [0.38, 0.36, 1.0],
  ],
};

export const EXP1_SPECTRA_K2: SpectraPayload = {
  k: 2,
  focal: "ch1",
  channels: ["ch1", "ch2", "ch3"],
  freqs: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
  spectra: [
    [4.1, 52.0, 18.2, 6.3, 3.0, 2.1, 1.6, 1.3, 1.2, 1.1],
    [4.0, 50.5, 17.8, 6.1, 2.9, 2.0, 1.6, 1.3, 1.2, 1.1],
    [1.2, 3.1, 1.9, 1.3, 1.1, 1.0, 1.0, 1.0, 1.0, 1.0],
  ],
};

export function mockFetch(): (url: string, init?: RequestInit) => Promise<Response> {
  const routes: Record<string, unknown> = {
    "/v1/datasets": { datasets: [EXP1_DATASET] },
    "/v1/bands": {
      bands: [
        { name: "delta", lo: 0, hi: 4 },
        { name: "theta", lo: 4, hi: 8 },
        { name: "alpha", lo: 8, hi: 12 },
        { name: "beta", lo: 12, hi: 30 },
        { name: "gamma", lo: 30, hi: 50 },
      ],
    },
    [`/v1/datasets/${EXP1_DATASET.id}/layout`]: EXP1_LAYOUT,
    [`/v1/runs/${EXP1_RUN.run_id}`]: EXP1_RUN,
    [`/v1/runs/${EXP1_RUN.run_id}/merges`]: EXP1_MERGES,
    [`/v1/runs/${EXP1_RUN.run_id}/coherence?k=2&channel=ch1`]: EXP1_COHERENCE_K2,
    [`/v1/runs/${EXP1_RUN.run_id}/spectra?k=2&channel=ch1`]: EXP1_SPECTRA_K2,
  };
  return async (url: string, init?: RequestInit) => {
    if (url.endsWith("/cluster") && init?.method === "POST") {
      return new Response(JSON.stringify({ run_id: EXP1_RUN.run_id, status: "done" }),
                          { status: 200 });
    }
    const body = routes[url];
    if (body === undefined) {
      return new Response(JSON.stringify({ error: `no mock for ${url}` }),
                          { status: 404 });
    }
    return new Response(JSON.stringify(body), { status: 200 });
  };
}
