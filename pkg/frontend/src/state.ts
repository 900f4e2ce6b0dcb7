// View state and its URL encoding. Every control change funnels through
// this state; the query string is the single shareable description of a
// view, so encode/decode must round-trip exactly.

import type { MethodName } from "./types.js";

export interface ViewState {
  dataset: string | null;
  methods: MethodName[];
  band: string; // named band or "lo-hi"
  p: 1 | 2;
  k: number | null; // null = follow the scree suggestion
  segmentSeconds: number | null;
  segmentIndex: number;
  focal: string | null;
  tab: "coherence" | "spectra";
}

export const DEFAULT_STATE: ViewState = {
  dataset: null,
  methods: ["hcc"],
  band: "alpha",
  p: 1,
  k: null,
  segmentSeconds: null,
  segmentIndex: 0,
  focal: null,
  tab: "coherence",
};

const METHOD_SET = new Set(["hcc", "hac", "hmc", "spectral-baseline"]);

export function encodeState(state: ViewState): string {
  const q = new URLSearchParams();
  if (state.dataset) q.set("dataset", state.dataset);
  q.set("methods", state.methods.join(","));
  q.set("band", state.band);
  q.set("p", String(state.p));
  if (state.k !== null) q.set("k", String(state.k));
  if (state.segmentSeconds !== null) {
    q.set("seg", String(state.segmentSeconds));
    q.set("segi", String(state.segmentIndex));
  }
  if (state.focal) q.set("focal", state.focal);
  q.set("tab", state.tab);
  return q.toString();
}

export function decodeState(query: string): ViewState {
  const q = new URLSearchParams(query);
  const methods = (q.get("methods") ?? "hcc")
    .split(",")
    .filter((m): m is MethodName => METHOD_SET.has(m));
  const kRaw = q.get("k");
  const segRaw = q.get("seg");
  return {
    dataset: q.get("dataset"),
    methods: methods.length ? methods : ["hcc"],
    band: q.get("band") ?? "alpha",
    p: q.get("p") === "2" ? 2 : 1,
    k: kRaw === null ? null : Math.max(1, parseInt(kRaw, 10) || 1),
    segmentSeconds: segRaw === null ? null : parseFloat(segRaw),
    segmentIndex: parseInt(q.get("segi") ?? "0", 10) || 0,
    focal: q.get("focal"),
    tab: q.get("tab") === "spectra" ? "spectra" : "coherence",
  };
}
