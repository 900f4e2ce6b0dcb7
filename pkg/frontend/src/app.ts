// Application shell: owns the view state, mirrors it into the URL, issues
// API calls on every change, and re-renders the panels from responses.
// All numbers shown come from API payloads; the only local computation is
// cutting the merge history at k and mapping clusters to colors.

import { Api, ApiError } from "./api.js";
import { cutAtK } from "./cut.js";
import { ALL_METHODS, renderControls, renderError, renderOffline } from "./controls.js";
import { renderCoherenceTab, renderSpectraTab } from "./panels/detail.js";
import { renderMergePlot } from "./panels/merge.js";
import { renderScalp } from "./panels/scalp.js";
import { renderScree } from "./panels/scree.js";
import { decodeState, encodeState, ViewState } from "./state.js";
import type { BandInfo, DatasetMeta, MergeHistory, MethodName, RunStatus } from "./types.js";

interface RunView {
  method: MethodName;
  runId: string;
  status: RunStatus;
  history: MergeHistory | null;
}

export class App {
  state: ViewState;
  datasets: DatasetMeta[] = [];
  bands: BandInfo[] = [];
  layout: Record<string, [number, number]> = {};
  runs = new Map<MethodName, RunView>();
  // latest-wins bookkeeping per panel: stale responses are dropped
  private epoch = 0;

  constructor(private api: Api, private root: HTMLElement) {
    this.state = decodeState(window.location.search.replace(/^\?/, ""));
  }

  async start(): Promise<void> {
    try {
      const [ds, bands] = await Promise.all([this.api.datasets(), this.api.bands()]);
      this.datasets = ds.datasets;
      this.bands = bands.bands;
    } catch {
      this.root.innerHTML = renderOffline();
      return;
    }
    if (!this.state.dataset && this.datasets.length) {
      this.state.dataset = this.datasets[0].id;
    }
    await this.refresh();
  }

  private pushUrl(): void {
    const query = encodeState(this.state);
    window.history.replaceState(null, "", `?${query}`);
  }

  async update(patch: Partial<ViewState>): Promise<void> {
    Object.assign(this.state, patch);
    await this.refresh();
  }

  async refresh(): Promise<void> {
    this.pushUrl();
    const my = ++this.epoch;
    const ds = this.state.dataset;
    if (!ds) {
      this.root.innerHTML = this.controlsHtml(null, null) +
        `<p class="hint">select a dataset</p>`;
      this.bind();
      return;
    }
    try {
      const layout = await this.api.layout(ds);
      this.layout = layout.positions;
      this.runs.clear();
      for (const method of this.state.methods) {
        const started = await this.api.cluster(ds, {
          method,
          band: this.state.band,
          p: this.state.p,
          segment_seconds: this.state.segmentSeconds ?? undefined,
          segment_index: this.state.segmentIndex,
        });
        let status = await this.api.run(started.run_id);
        const deadline = Date.now() + 120_000;
        while (status.status === "running" && Date.now() < deadline) {
          await new Promise((r) => setTimeout(r, 500));
          status = await this.api.run(started.run_id);
        }
        const history = status.status === "done"
          ? await this.api.merges(started.run_id)
          : null;
        this.runs.set(method, { method, runId: started.run_id, status, history });
      }
      if (my !== this.epoch) return; // a newer refresh superseded this one
      await this.render();
    } catch (err) {
      if (my !== this.epoch) return;
      const message = err instanceof ApiError ? err.message : String(err);
      const param = err instanceof ApiError && err.status === 422 ? "band/segment" : null;
      this.root.innerHTML = this.controlsHtml(null, null) + renderError(message, param);
      this.bind();
    }
  }

  private controlsHtml(maxK: number | null, suggested: number | null): string {
    return renderControls(this.datasets, this.bands, this.state, maxK, suggested);
  }

  private effectiveK(history: MergeHistory, status: RunStatus): number {
    const k = this.state.k ?? status.suggested_k ?? 2;
    return Math.min(Math.max(1, k), history.n_channels);
  }

  async render(): Promise<void> {
    const first = this.runs.get(this.state.methods[0]);
    if (!first || !first.history || !first.status.labels) {
      this.root.innerHTML = this.controlsHtml(null, null) +
        renderError(first?.status.error ?? "run unavailable", null);
      this.bind();
      return;
    }
    const labels = first.status.labels;
    const k = this.effectiveK(first.history, first.status);
    const focal = this.state.focal && labels.includes(this.state.focal)
      ? this.state.focal
      : labels[0];
    let html = this.controlsHtml(first.history.n_channels,
                                 first.status.suggested_k ?? null);
    html += `<div class="panels">`;
    for (const method of this.state.methods) {
      const run = this.runs.get(method);
      if (!run || !run.history) continue;
      html += `<section class="method-block"><h3>${method}</h3>`;
      html += renderScree(run.history, k, run.status.suggested_k ?? null);
      html += renderMergePlot(run.history, labels, k);
      html += `</section>`;
    }
    const membership = cutAtK(first.history, k);
    if (Object.keys(this.layout).length) {
      html += `<section class="scalp-block"><h3>scalp (${focal})</h3>` +
        renderScalp(labels, this.layout, membership, focal) + `</section>`;
    } else {
      html += `<p class="hint">no layout for this dataset — scalp map hidden</p>`;
    }
    const tabBtns =
      `<button id="tab-coherence"${this.state.tab === "coherence" ? " class='active'" : ""}>Coherence</button>` +
      `<button id="tab-spectra"${this.state.tab === "spectra" ? " class='active'" : ""}>Spectra</button>`;
    let detail = "";
    try {
      if (this.state.tab === "coherence") {
        detail = renderCoherenceTab(
          await this.api.coherence(first.runId, k, focal));
      } else {
        const band = this.bands.find((b) => b.name === this.state.band) ?? null;
        detail = renderSpectraTab(
          await this.api.spectra(first.runId, k, focal), band);
      }
    } catch (err) {
      detail = renderError(String(err), null);
    }
    html += `<section class="detail-block">${tabBtns}${detail}</section></div>`;
    this.root.innerHTML = html;
    this.bind();
  }

  private bind(): void {
    const on = (id: string, event: string, fn: (e: Event) => void) => {
      const el = this.root.querySelector(`#${id}`);
      if (el) el.addEventListener(event, fn);
    };
    on("dataset-select", "change", (e) =>
      this.update({ dataset: (e.target as HTMLSelectElement).value || null }));
    on("band-select", "change", (e) =>
      this.update({ band: (e.target as HTMLSelectElement).value }));
    on("p-select", "change", (e) =>
      this.update({ p: (e.target as HTMLSelectElement).value === "2" ? 2 : 1 }));
    on("segment-input", "change", (e) => {
      const v = (e.target as HTMLInputElement).value;
      this.update({ segmentSeconds: v ? parseFloat(v) : null });
    });
    on("segment-index", "change", (e) =>
      this.update({ segmentIndex: parseInt((e.target as HTMLInputElement).value, 10) || 0 }));
    on("k-slider", "input", (e) => {
      // cutting happens client-side: no service call on slider moves
      this.state.k = parseInt((e.target as HTMLInputElement).value, 10);
      this.pushUrl();
      this.render();
    });
    this.root.querySelectorAll(".method-box").forEach((box) =>
      box.addEventListener("change", () => {
        const methods = Array.from(
          this.root.querySelectorAll<HTMLInputElement>(".method-box:checked"),
        ).map((b) => b.value as MethodName);
        this.update({ methods: methods.length ? methods : [ALL_METHODS[0]] });
      }));
    this.root.querySelectorAll(".scalp-dot").forEach((dot) =>
      dot.addEventListener("click", () => {
        this.state.focal = (dot as SVGElement).getAttribute("data-channel");
        this.pushUrl();
        this.render();
      }));
    this.root.querySelectorAll(".merge-k, .merge-cell, .scree-point").forEach((el) =>
      el.addEventListener("click", () => {
        const k = parseInt((el as SVGElement).getAttribute("data-k") ?? "", 10);
        if (Number.isFinite(k)) {
          this.state.k = k;
          this.pushUrl();
          this.render();
        }
      }));
    on("tab-coherence", "click", () => this.update({ tab: "coherence" }));
    on("tab-spectra", "click", () => this.update({ tab: "spectra" }));
  }
}

export function mount(): void {
  const root = document.getElementById("app");
  if (root) {
    new App(new Api(""), root).start();
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount();
}
