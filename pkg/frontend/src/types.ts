// Payload shapes of the /v1 JSON API.

export interface DatasetMeta {
  id: string;
  source: string;
  n_channels: number;
  n_samples: number;
  fs: number;
  duration: number;
  labels: string[];
  has_layout: boolean;
}

export interface BandInfo {
  name: string | null;
  lo: number;
  hi: number;
}

export interface MergeStep {
  index: number;
  merged: [number, number];
  dissimilarity: number;
  membership: number[];
}

export interface MergeHistory {
  method: string;
  band: { lo: number; hi: number | null; name: string | null };
  n_channels: number;
  clamp_count: number;
  steps: MergeStep[];
}

export interface RunStatus {
  run_id: string;
  dataset_id?: string;
  status: "running" | "done" | "failed";
  suggested_k?: number;
  labels?: string[];
  error?: string;
}

export interface LayoutPayload {
  positions: Record<string, [number, number]>;
}

export interface CoherencePayload {
  k: number;
  focal: string;
  channels: string[];
  matrix: number[][];
}

export interface SpectraPayload {
  k: number;
  focal: string;
  channels: string[];
  freqs: number[];
  spectra: number[][];
}

export type MethodName = "hcc" | "hac" | "hmc" | "spectral-baseline";

export interface ClusterRequest {
  method: MethodName;
  band: string | [number, number];
  p: 1 | 2;
  span?: number | "gcv";
  segment_seconds?: number;
  segment_index?: number;
}
