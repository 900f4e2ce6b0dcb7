// Lower panel: the merge plot. Channels run down the y axis, the cluster
// count k runs right to left along x, and cell colors mark cluster
// identity, so one color disappears at every merge. Clicking a column
// selects that k.

import { clusterColor } from "../color.js";
import { cutAtK, kRange } from "../cut.js";
import { esc, svgRoot, tag } from "../svg.js";
import type { MergeHistory } from "../types.js";

const CELL = 22;
const LABEL_W = 46;
const TOP = 20;

export function renderMergePlot(
  history: MergeHistory,
  labels: string[],
  selectedK: number,
): string {
  const n = history.n_channels;
  const ks = kRange(history); // n .. 1
  const width = LABEL_W + ks.length * CELL + 8;
  const height = TOP + n * CELL + 26;
  let cells = "";
  ks.forEach((k, col) => {
    const membership = cutAtK(history, k);
    membership.forEach((cid, ch) => {
      cells += tag("rect", {
        x: LABEL_W + col * CELL + 1,
        y: TOP + ch * CELL + 1,
        width: CELL - 2,
        height: CELL - 2,
        fill: clusterColor(cid),
        opacity: k === selectedK ? 1 : 0.75,
        class: "merge-cell",
        "data-k": k,
        "data-channel": ch,
      });
    });
    cells += tag(
      "text",
      { x: LABEL_W + col * CELL + CELL / 2, y: height - 10,
        "text-anchor": "middle", "font-size": 10,
        "font-weight": k === selectedK ? "bold" : "normal",
        class: "merge-k", "data-k": k },
      String(k),
    );
  });
  let names = "";
  labels.forEach((label, ch) => {
    names += tag(
      "text",
      { x: LABEL_W - 6, y: TOP + ch * CELL + CELL / 2 + 4,
        "text-anchor": "end", "font-size": 10 },
      esc(label),
    );
  });
  const title = tag(
    "text",
    { x: LABEL_W, y: 13, "font-size": 11, fill: "#444" },
    `merge plot (${esc(history.method)}, ${history.steps.length} merges)`,
  );
  return svgRoot(width, height, title + names + cells);
}
