// Client-side cut of a merge history at k clusters: the only computation
// the UI performs beyond color mapping. The service ships the membership
// recorded after each merge, so cutting is a lookup, and the k slider
// never waits on the network.

import type { MergeHistory } from "./types.js";

export function cutAtK(history: MergeHistory, k: number): number[] {
  const n = history.n_channels;
  if (k < 1 || k > n) {
    throw new Error(`k must lie in 1..${n}, got ${k}`);
  }
  if (k === n) {
    return Array.from({ length: n }, (_, i) => i);
  }
  const step = history.steps[n - k - 1];
  return [...step.membership];
}

export function kRange(history: MergeHistory): number[] {
  return Array.from({ length: history.n_channels }, (_, i) => history.n_channels - i);
}

// scree points (k, dissimilarity) straight from the recorded steps
export function screePoints(history: MergeHistory): { k: number; d: number }[] {
  return history.steps.map((s) => ({
    k: history.n_channels - s.index,
    d: s.dissimilarity,
  }));
}
