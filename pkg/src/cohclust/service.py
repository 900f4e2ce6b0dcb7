"""HTTP API exposing datasets, clustering runs, and plot-ready data.

Datasets are content-addressed (posting identical bytes twice returns the
same id) and live in an in-process registry, optionally persisted to a
directory. Cluster runs are cached by (dataset, parameters) and executed
at most once; large inputs run on a background worker and are polled via
``GET /v1/runs/{id}``. The service adds no numerics of its own: every
response body is produced by the same serializers the CLI writes to disk.
"""

import hashlib
import io
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .cli import _partition_json, _scree_json, parse_band
from .core import DataError, TimeSeriesSet, parse_timeseries_csv, standard_bands
from .clustering import (
    MergeHistory,
    cut,
    hcc,
    history_to_json,
    linkage_cluster,
    scree,
    spectral_baseline,
    suggest_k,
)
from .simgen import ExperimentSpec, experiment
from .spectral import auto_spectra, coherence_field, integrate_band, smoothed_spectrum

DEFAULT_SIZE_LIMIT = 256 * 1024 * 1024
SYNC_CHANNEL_LIMIT = 32  # datasets at most this wide cluster synchronously

_METHODS = ("hcc", "hac", "hmc", "spectral-baseline")


@dataclass
class Dataset:
    id: str
    ts: TimeSeriesSet
    source: str  # "csv" | "experiment"
    coherence_cache: dict = field(default_factory=dict)


@dataclass
class Run:
    id: str
    dataset_id: str
    params: dict
    status: str = "running"  # running | done | failed
    error: str | None = None
    history: MergeHistory | None = None
    band_matrix: np.ndarray | None = None  # integrated band coherence
    spectra: np.ndarray | None = None      # (J, N) smoothed auto-spectra
    freqs: np.ndarray | None = None
    labels: tuple = ()
    suggested_k: int | None = None


class Registry:
    def __init__(self, data_dir: str | None = None):
        self.datasets: dict[str, Dataset] = {}
        self.runs: dict[str, Run] = {}
        self.run_index: dict[str, str] = {}
        self.lock = threading.Lock()
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load_persisted()

    def _load_persisted(self):
        from .core import read_timeseries_csv

        for path in sorted(self.data_dir.glob("*.csv")):
            meta_path = path.with_suffix(".json")
            try:
                fs = json.loads(meta_path.read_text())["fs"] if meta_path.exists() else None
                ts = read_timeseries_csv(path, fs=fs)
            except (DataError, OSError, KeyError, json.JSONDecodeError):
                continue
            self.add_dataset(ts, source="csv", persist=False)

    def add_dataset(self, ts: TimeSeriesSet, source: str, persist: bool = True) -> Dataset:
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(ts.data).tobytes())
        digest.update(repr((ts.fs, ts.labels)).encode())
        ds_id = digest.hexdigest()[:16]
        with self.lock:
            if ds_id in self.datasets:
                return self.datasets[ds_id]
            ds = Dataset(ds_id, ts, source)
            self.datasets[ds_id] = ds
        if persist and self.data_dir:
            from .core import write_timeseries_csv

            write_timeseries_csv(ts, self.data_dir / f"{ds_id}.csv")
            (self.data_dir / f"{ds_id}.json").write_text(
                json.dumps({"fs": ts.fs, "source": source}))
        return ds


def _dataset_meta(ds: Dataset) -> dict:
    return {
        "id": ds.id,
        "source": ds.source,
        "n_channels": ds.ts.n_channels,
        "n_samples": ds.ts.n_samples,
        "fs": ds.ts.fs,
        "duration": ds.ts.duration,
        "labels": list(ds.ts.labels),
        "has_layout": ds.ts.layout is not None,
    }


def _canonical_params(payload: dict, ts: TimeSeriesSet) -> dict:
    method = payload.get("method", "hcc")
    if method not in _METHODS:
        raise DataError(f"unknown method {method!r}")
    band_req = payload.get("band", "0-50")
    if isinstance(band_req, (list, tuple)):
        band = parse_band(f"{band_req[0]}-{band_req[1]}")
    else:
        band = parse_band(str(band_req))
    p = int(payload.get("p", 1))
    if p not in (1, 2):
        raise DataError("p must be 1 or 2")
    span = payload.get("span", "gcv")
    if span != "gcv":
        span = int(span)
        if span < 1:
            raise DataError("span must be >= 1 or 'gcv'")
    segment_seconds = payload.get("segment_seconds")
    segment_index = int(payload.get("segment_index", 0))
    if segment_seconds is not None:
        segment_seconds = float(segment_seconds)
        if segment_seconds <= 0:
            raise DataError("segment_seconds must be positive")
        n_seg = ts.n_segments(segment_seconds)
        if n_seg < 1 or not 0 <= segment_index < n_seg:
            raise DataError(
                f"segment_index {segment_index} out of range for "
                f"{segment_seconds}s segments (have {n_seg})"
            )
    return {
        "method": method,
        "band": [band.lo, band.hi],
        "band_name": band.name,
        "p": p,
        "span": span,
        "segment_seconds": segment_seconds,
        "segment_index": segment_index,
    }


def _execute_run(run: Run, ts: TimeSeriesSet, n_jobs: int) -> None:
    try:
        params = run.params
        if params["segment_seconds"]:
            ts = ts.segment(params["segment_seconds"], params["segment_index"])
        from .core import FrequencyBand

        band = FrequencyBand(params["band"][0], params["band"][1], params["band_name"])
        band.validate_for(ts.fs)
        span = None if params["span"] == "gcv" else params["span"]
        spec, used_span = smoothed_spectrum(ts, span=span)
        coh = coherence_field(spec)
        mask = band.mask(coh.freqs)
        if not mask.any():
            raise DataError(f"band {band} holds no Fourier frequencies at this segment length")
        method = params["method"]
        if method == "hcc":
            history = hcc(coh, band, p=params["p"], n_jobs=n_jobs)
        elif method in ("hac", "hmc"):
            bm = integrate_band(coh, band)
            history = linkage_cluster(bm, "average" if method == "hac" else "complete", band)
        else:
            history = spectral_baseline(ts, span=span)
        run.history = history
        run.band_matrix = integrate_band(coh, band)
        run.spectra = auto_spectra(spec)
        run.freqs = np.asarray(coh.freqs)
        run.labels = ts.labels
        run.suggested_k = suggest_k(scree(history))
        run.params = dict(params, used_span=used_span)
        run.status = "done"
    except Exception as exc:  # surfaced via GET /runs/{id}
        run.status = "failed"
        run.error = str(exc)


def _json_response(text: str, status: int = 200) -> Response:
    return Response(content=text, status_code=status, media_type="application/json")


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def create_app(data_dir: str | None = None, size_limit: int = DEFAULT_SIZE_LIMIT,
               sync_channel_limit: int = SYNC_CHANNEL_LIMIT, n_jobs: int = 1,
               frontend_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="cohclust", version=__version__)
    registry = Registry(data_dir)
    worker = ThreadPoolExecutor(max_workers=1)
    app.state.registry = registry

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/v1/bands")
    def bands():
        return {
            "bands": [
                {"name": b.name, "lo": b.lo, "hi": b.hi} for b in standard_bands()
            ]
        }

    @app.get("/v1/datasets")
    def list_datasets():
        with registry.lock:
            items = [_dataset_meta(d) for d in registry.datasets.values()]
        items.sort(key=lambda d: d["id"])
        return {"datasets": items}

    @app.post("/v1/datasets")
    async def post_dataset(request: Request):
        body = await request.body()
        if len(body) > size_limit:
            return _error(413, f"body exceeds the {size_limit} byte limit")
        ctype = request.headers.get("content-type", "")
        try:
            if "json" in ctype:
                spec = ExperimentSpec.from_dict(json.loads(body.decode("utf-8")))
                ts, _, _ = experiment(spec.name, seed=spec.seed, **spec.params)
                ds = registry.add_dataset(ts, source="experiment")
            else:
                ts = parse_timeseries_csv(io.StringIO(body.decode("utf-8")), fs=100.0)
                ds = registry.add_dataset(ts, source="csv")
        except (DataError, ValueError, json.JSONDecodeError) as exc:
            return _error(400, str(exc))
        return _dataset_meta(ds)

    def _get_dataset(ds_id: str) -> Dataset | None:
        with registry.lock:
            return registry.datasets.get(ds_id)

    @app.get("/v1/datasets/{ds_id}")
    def dataset_meta(ds_id: str):
        ds = _get_dataset(ds_id)
        if ds is None:
            return _error(404, f"unknown dataset {ds_id}")
        return _dataset_meta(ds)

    @app.get("/v1/datasets/{ds_id}/layout")
    def dataset_layout(ds_id: str):
        ds = _get_dataset(ds_id)
        if ds is None:
            return _error(404, f"unknown dataset {ds_id}")
        layout = ds.ts.layout
        positions = (
            {name: list(layout[name]) for name in ds.ts.labels} if layout else {}
        )
        return {"positions": positions}

    @app.get("/v1/datasets/{ds_id}/coherence")
    def dataset_coherence(ds_id: str, band: str = "alpha"):
        ds = _get_dataset(ds_id)
        if ds is None:
            return _error(404, f"unknown dataset {ds_id}")
        try:
            fband = parse_band(band)
            fband.validate_for(ds.ts.fs)
        except (DataError, ValueError) as exc:
            return _error(422, str(exc))
        key = (fband.lo, fband.hi)
        with registry.lock:
            cached = ds.coherence_cache.get(key)
        if cached is None:
            spec, _ = smoothed_spectrum(ds.ts)
            coh = coherence_field(spec)
            try:
                cached = integrate_band(coh, fband)
            except ValueError as exc:
                return _error(422, str(exc))
            with registry.lock:
                ds.coherence_cache[key] = cached
        return {
            "band": {"lo": fband.lo, "hi": fband.hi, "name": fband.name},
            "labels": list(ds.ts.labels),
            "matrix": [[float(v) for v in row] for row in cached],
        }

    @app.post("/v1/datasets/{ds_id}/cluster")
    async def post_cluster(ds_id: str, request: Request):
        ds = _get_dataset(ds_id)
        if ds is None:
            return _error(404, f"unknown dataset {ds_id}")
        try:
            payload = json.loads(await request.body() or b"{}")
            params = _canonical_params(payload, ds.ts)
        except (DataError, ValueError, json.JSONDecodeError) as exc:
            return _error(422, str(exc))
        key = ds.id + ":" + json.dumps(params, sort_keys=True)
        run_id = hashlib.sha256(key.encode()).hexdigest()[:16]
        with registry.lock:
            run = registry.runs.get(run_id)
            if run is None:
                run = Run(run_id, ds.id, params)
                registry.runs[run_id] = run
                registry.run_index[key] = run_id
                launch = True
            else:
                launch = False
        if launch:
            if ds.ts.n_channels <= sync_channel_limit:
                _execute_run(run, ds.ts, n_jobs)
            else:
                worker.submit(_execute_run, run, ds.ts, n_jobs)
        body = {"run_id": run.id, "status": run.status}
        return JSONResponse(body, status_code=202 if run.status == "running" else 200)

    def _get_run(run_id: str) -> Run | None:
        with registry.lock:
            return registry.runs.get(run_id)

    def _run_or_response(run_id: str):
        run = _get_run(run_id)
        if run is None:
            return None, _error(404, f"unknown run {run_id}")
        if run.status == "running":
            return None, JSONResponse({"run_id": run_id, "status": "running"},
                                      status_code=202)
        if run.status == "failed":
            return None, _error(422, run.error or "run failed")
        return run, None

    @app.get("/v1/runs/{run_id}")
    def run_status(run_id: str):
        run = _get_run(run_id)
        if run is None:
            return _error(404, f"unknown run {run_id}")
        body = {
            "run_id": run.id,
            "dataset_id": run.dataset_id,
            "status": run.status,
            "params": run.params,
        }
        if run.status == "done":
            body["suggested_k"] = run.suggested_k
            body["n_channels"] = len(run.labels)
            body["labels"] = list(run.labels)
        if run.error:
            body["error"] = run.error
        return body

    @app.get("/v1/runs/{run_id}/merges")
    def run_merges(run_id: str):
        run, resp = _run_or_response(run_id)
        if run is None:
            return resp
        return _json_response(history_to_json(run.history))

    @app.get("/v1/runs/{run_id}/scree")
    def run_scree(run_id: str):
        run, resp = _run_or_response(run_id)
        if run is None:
            return resp
        return _json_response(_scree_json(scree(run.history)))

    def _check_k(run: Run, k: int):
        n = len(run.labels)
        if k > n:
            return _error(409, f"k={k} exceeds the {n} channels of this run")
        if k < 1:
            return _error(422, "k must be >= 1")
        return None

    @app.get("/v1/runs/{run_id}/partition")
    def run_partition(run_id: str, k: int):
        run, resp = _run_or_response(run_id)
        if run is None:
            return resp
        bad = _check_k(run, k)
        if bad is not None:
            return bad
        part = cut(run.history, k)
        return _json_response(_partition_json(part, run.labels, k))

    def _focal_cluster(run: Run, k: int, channel: str):
        if channel not in run.labels:
            raise DataError(f"unknown channel {channel!r}")
        part = cut(run.history, k)
        idx = run.labels.index(channel)
        members = part.members(part.cluster_of(idx))
        return members, part

    @app.get("/v1/runs/{run_id}/coherence")
    def run_coherence(run_id: str, k: int, channel: str):
        """Integrated within-cluster coherence of the cluster holding ``channel``."""
        run, resp = _run_or_response(run_id)
        if run is None:
            return resp
        bad = _check_k(run, k)
        if bad is not None:
            return bad
        try:
            members, _ = _focal_cluster(run, k, channel)
        except DataError as exc:
            return _error(422, str(exc))
        sub = run.band_matrix[np.ix_(members, members)]
        return {
            "k": k,
            "focal": channel,
            "channels": [run.labels[i] for i in members],
            "matrix": [[float(v) for v in row] for row in sub],
        }

    @app.get("/v1/runs/{run_id}/spectra")
    def run_spectra(run_id: str, k: int, channel: str):
        """Smoothed auto-spectra of the members of the cluster holding ``channel``."""
        run, resp = _run_or_response(run_id)
        if run is None:
            return resp
        bad = _check_k(run, k)
        if bad is not None:
            return bad
        try:
            members, _ = _focal_cluster(run, k, channel)
        except DataError as exc:
            return _error(422, str(exc))
        return {
            "k": k,
            "focal": channel,
            "channels": [run.labels[i] for i in members],
            "freqs": [float(f) for f in run.freqs],
            "spectra": [[float(v) for v in run.spectra[:, i]] for i in members],
        }

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")
    return app
