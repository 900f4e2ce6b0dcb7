// Control strip: dataset, methods, band, p, segment, k, and focal channel.
// Pure HTML string; the shell attaches listeners by element id.

import { esc } from "./svg.js";
import type { BandInfo, DatasetMeta, MethodName } from "./types.js";
import type { ViewState } from "./state.js";

export const ALL_METHODS: MethodName[] = ["hcc", "hac", "hmc", "spectral-baseline"];

export function renderControls(
  datasets: DatasetMeta[],
  bands: BandInfo[],
  state: ViewState,
  maxK: number | null,
  suggestedK: number | null,
): string {
  const dsOptions = datasets
    .map((d) => {
      const sel = d.id === state.dataset ? " selected" : "";
      return `<option value="${esc(d.id)}"${sel}>${esc(d.id.slice(0, 8))} — ${d.n_channels} ch, ${d.duration.toFixed(0)}s</option>`;
    })
    .join("");
  const methodBoxes = ALL_METHODS.map((m) => {
    const checked = state.methods.includes(m) ? " checked" : "";
    return (
      `<label class="method"><input type="checkbox" class="method-box" ` +
      `value="${m}"${checked}/> ${m}</label>`
    );
  }).join(" ");
  const bandOptions = bands
    .map((b) => {
      const name = b.name ?? `${b.lo}-${b.hi}`;
      const sel = name === state.band ? " selected" : "";
      return `<option value="${esc(name)}"${sel}>${esc(name)} (${b.lo}–${b.hi} Hz)</option>`;
    })
    .join("");
  const kValue = state.k ?? suggestedK ?? 2;
  const kMax = maxK ?? 19;
  return `
  <div class="controls">
    <label>dataset <select id="dataset-select"><option value="">—</option>${dsOptions}</select></label>
    <span class="methods">${methodBoxes}</span>
    <label>band <select id="band-select">${bandOptions}<option value="0-50"${state.band === "0-50" ? " selected" : ""}>full (0–50 Hz)</option></select></label>
    <label>p <select id="p-select"><option value="1"${state.p === 1 ? " selected" : ""}>1</option><option value="2"${state.p === 2 ? " selected" : ""}>2</option></select></label>
    <label>segment&nbsp;(s) <input id="segment-input" type="number" min="1" step="1" value="${state.segmentSeconds ?? ""}" placeholder="all"/></label>
    <label>index <input id="segment-index" type="number" min="0" step="1" value="${state.segmentIndex}"/></label>
    <label>k <input id="k-slider" type="range" min="1" max="${kMax}" value="${kValue}"/>
      <span id="k-value">${kValue}</span>
      ${suggestedK !== null ? `<span class="suggestion">(suggested ${suggestedK})</span>` : ""}
    </label>
  </div>`;
}

export function renderError(message: string, param: string | null): string {
  const where = param ? ` <code>${esc(param)}</code>` : "";
  return `<div class="error banner">service error${where}: ${esc(message)}</div>`;
}

export function renderOffline(): string {
  return `<div class="error banner">service unreachable — controls disabled</div>`;
}
