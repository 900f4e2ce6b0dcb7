// Cluster detail tabs for the focal channel's cluster: a within-cluster
// coherence heatmap, and the members' smoothed auto-spectra with the
// analysis band shaded.

import { clusterColor, heatColor } from "../color.js";
import { esc, fmt, svgRoot, tag } from "../svg.js";
import type { BandInfo, CoherencePayload, SpectraPayload } from "../types.js";

export function renderCoherenceTab(payload: CoherencePayload): string {
  const n = payload.channels.length;
  if (n === 1) {
    return svgRoot(320, 40, tag(
      "text", { x: 10, y: 24, "font-size": 11 },
      `cluster of ${esc(payload.focal)} has size 1 (no within-cluster pairs)`));
  }
  const cell = Math.min(34, 300 / n);
  const label = 44;
  const size = label + n * cell + 8;
  let cells = "";
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const v = payload.matrix[i][j];
      cells +=
        tag("rect", {
          x: label + j * cell, y: label + i * cell,
          width: cell - 1, height: cell - 1, fill: heatColor(v),
        }) +
        tag("text", {
          x: label + j * cell + cell / 2, y: label + i * cell + cell / 2 + 3,
          "text-anchor": "middle", "font-size": 8,
          fill: v > 0.6 ? "#222" : "#eee",
        }, fmt(Math.round(v * 100) / 100));
    }
  }
  let names = "";
  payload.channels.forEach((ch, i) => {
    names +=
      tag("text", { x: label - 4, y: label + i * cell + cell / 2 + 3,
                    "text-anchor": "end", "font-size": 9 }, esc(ch)) +
      tag("text", { x: label + i * cell + cell / 2, y: label - 6,
                    "text-anchor": "middle", "font-size": 9 }, esc(ch));
  });
  return svgRoot(size, size, cells + names);
}

const W = 420;
const H = 220;
const PAD = 34;

export function renderSpectraTab(payload: SpectraPayload, band: BandInfo | null): string {
  const { freqs, spectra } = payload;
  const fMax = freqs[freqs.length - 1];
  const vMax = Math.max(...spectra.map((row) => Math.max(...row)));
  const x = (f: number) => PAD + (f / fMax) * (W - 2 * PAD);
  const y = (v: number) => H - PAD - (v / (vMax || 1)) * (H - 2 * PAD);
  const shade = band
    ? tag("rect", {
        x: x(band.lo), y: PAD,
        width: Math.max(0, x(Math.min(band.hi, fMax)) - x(band.lo)),
        height: H - 2 * PAD, fill: "#f2c300", opacity: 0.18,
      })
    : "";
  let paths = "";
  spectra.forEach((row, i) => {
    const d = row
      .map((v, j) => `${j === 0 ? "M" : "L"}${fmt(x(freqs[j]))},${fmt(y(v))}`)
      .join(" ");
    paths += tag("path", { d, fill: "none", stroke: clusterColor(i),
                           "stroke-width": 1.2 });
  });
  let legend = "";
  payload.channels.forEach((ch, i) => {
    legend += tag("text", { x: W - PAD, y: PAD + 12 * i + 4, "text-anchor": "end",
                            "font-size": 9, fill: clusterColor(i) }, esc(ch));
  });
  const axis =
    tag("line", { x1: PAD, y1: H - PAD, x2: W - PAD, y2: H - PAD, stroke: "#444" }) +
    tag("line", { x1: PAD, y1: PAD, x2: PAD, y2: H - PAD, stroke: "#444" }) +
    tag("text", { x: W / 2, y: H - 8, "text-anchor": "middle", "font-size": 10 },
        "frequency (Hz)");
  return svgRoot(W, H, shade + axis + paths + legend);
}
