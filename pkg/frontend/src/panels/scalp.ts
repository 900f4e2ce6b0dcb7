// Scalp connectivity map: channels drawn at their unit-disk positions.
// The focal channel is yellow, channels sharing its cluster are red, and
// all others blue. Clicking a channel makes it the focal one.

import { CO_CLUSTER_COLOR, FOCAL_COLOR, OTHER_COLOR } from "../color.js";
import { esc, svgRoot, tag } from "../svg.js";

const R = 150;
const PAD = 24;
const SIZE = 2 * (R + PAD);

export function renderScalp(
  labels: string[],
  positions: Record<string, [number, number]>,
  membership: number[],
  focal: string,
): string {
  const focalIdx = labels.indexOf(focal);
  if (focalIdx < 0) {
    return svgRoot(SIZE, 40, tag("text", { x: 10, y: 24, "font-size": 11 },
                                 "unknown focal channel"));
  }
  const focalCluster = membership[focalIdx];
  const head =
    tag("circle", { cx: SIZE / 2, cy: SIZE / 2, r: R, fill: "#fdfdfd",
                    stroke: "#444" }) +
    // nose marker at the top of the disk
    tag("path", {
      d: `M${SIZE / 2 - 10},${PAD + 2} L${SIZE / 2},${6} L${SIZE / 2 + 10},${PAD + 2}`,
      fill: "none", stroke: "#444",
    });
  let dots = "";
  labels.forEach((label, i) => {
    const pos = positions[label];
    if (!pos) return;
    const [x, y] = pos;
    const cx = SIZE / 2 + x * R;
    const cy = SIZE / 2 - y * R; // layout y points to the nose
    const fill = i === focalIdx
      ? FOCAL_COLOR
      : membership[i] === focalCluster
        ? CO_CLUSTER_COLOR
        : OTHER_COLOR;
    dots +=
      tag("circle", { cx, cy, r: 9, fill, stroke: "#333", class: "scalp-dot",
                      "data-channel": label }) +
      tag("text", { x: cx, y: cy - 12, "text-anchor": "middle",
                    "font-size": 9 }, esc(label));
  });
  return svgRoot(SIZE, SIZE, head + dots);
}
