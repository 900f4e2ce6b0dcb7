// Fixed, order-stable categorical palette (kept in sync with the CLI's
// SVG output) so screenshots from different runs stay comparable.

export const PALETTE: readonly string[] = [
  "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#eeca3b",
  "#b279a2", "#ff9da6", "#9d755d", "#bab0ac", "#1f77b4", "#aec7e8",
  "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2",
  "#dbdb8d", "#9edae5",
];

export function clusterColor(cid: number): string {
  return PALETTE[cid % PALETTE.length];
}

export const FOCAL_COLOR = "#f2c300"; // focal channel marker
export const CO_CLUSTER_COLOR = "#d62728"; // same cluster as focal
export const OTHER_COLOR = "#1f77b4"; // remaining channels

// linear viridis-like ramp for heatmap cells in [0, 1]
const RAMP = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

export function heatColor(v: number): string {
  const x = Math.min(1, Math.max(0, v)) * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(x));
  const t = x - i;
  const c = RAMP[i].map((a, j) => Math.round(a + t * (RAMP[i + 1][j] - a)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}
