// Upper panel: minimum merge dissimilarity against the number of clusters.
// The x axis runs from many clusters down to one, so the elbow reads
// left to right; the selected k is marked.

import { screePoints } from "../cut.js";
import { fmt, svgRoot, tag } from "../svg.js";
import type { MergeHistory } from "../types.js";

const W = 420;
const H = 180;
const PAD = 36;

export function renderScree(
  history: MergeHistory,
  selectedK: number,
  suggestedK: number | null,
): string {
  const points = screePoints(history);
  const n = history.n_channels;
  const x = (k: number) => PAD + ((n - k) / Math.max(1, n - 1)) * (W - 2 * PAD);
  const y = (d: number) => H - PAD - d * (H - 2 * PAD);
  const path = points
    .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(x(p.k))},${fmt(y(p.d))}`)
    .join(" ");
  let marks = "";
  for (const p of points) {
    marks += tag("circle", {
      cx: x(p.k),
      cy: y(p.d),
      r: p.k === selectedK ? 5 : 3,
      fill: p.k === selectedK ? "#e45756" : "#4c78a8",
      class: "scree-point",
      "data-k": p.k,
    });
  }
  const axis =
    tag("line", { x1: PAD, y1: H - PAD, x2: W - PAD, y2: H - PAD, stroke: "#444" }) +
    tag("line", { x1: PAD, y1: PAD, x2: PAD, y2: H - PAD, stroke: "#444" }) +
    tag("text", { x: W / 2, y: H - 6, "text-anchor": "middle", "font-size": 11 },
        "number of clusters k") +
    tag("text", { x: 10, y: H / 2, "font-size": 11,
                  transform: `rotate(-90 10 ${H / 2})`, "text-anchor": "middle" },
        "dissimilarity");
  const kTicks = points
    .map((p) =>
      tag("text", { x: x(p.k), y: H - PAD + 14, "text-anchor": "middle",
                    "font-size": 9 }, String(p.k)))
    .join("");
  const suggestion = suggestedK === null
    ? ""
    : tag("text", { x: W - PAD, y: PAD - 8, "text-anchor": "end",
                    "font-size": 10, fill: "#666" },
          `suggested k = ${suggestedK}`);
  return svgRoot(
    W, H,
    axis + kTicks + tag("path", { d: path, fill: "none", stroke: "#4c78a8",
                                  "stroke-width": 1.5 }) + marks + suggestion,
  );
}
