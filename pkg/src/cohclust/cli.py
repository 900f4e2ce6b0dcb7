"""Batch command-line interface.

Subcommands::

    cohclust simulate  --experiment exp1 --seed 0 --replicates 10 --out DIR
    cohclust cluster   INPUT.csv --method hcc --band alpha --k auto --out DIR
    cohclust compare   exp4 --methods hcc,hac,hmc --band alpha --k 6 \
                       --replicates 100 --out DIR
    cohclust serve     --host 127.0.0.1 --port 8000

Exit codes: 0 success, 1 usage error, 2 data error. Outputs are UTF-8;
CSV/JSON artifacts are byte-reproducible for a fixed seed and flag set.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    DataError,
    FrequencyBand,
    band_by_name,
    read_timeseries_csv,
    write_timeseries_csv,
)
from .clustering import (
    cut,
    hcc,
    history_to_json,
    linkage_cluster,
    scree,
    spectral_baseline,
    suggest_k,
)
from .evaluation import affinity, affinity_to_csv, agreement
from .simgen import EXPERIMENT_NAMES, derive_seed, experiment
from .spectral import coherence_field, integrate_band, smoothed_spectrum

CLUSTER_METHODS = ("hcc", "hac", "hmc", "spectral-baseline")


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors (argparse default is 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def parse_band(text: str) -> FrequencyBand:
    """Accept a named band (``alpha``) or a numeric range (``8-12`` / ``8,12``)."""
    text = text.strip()
    try:
        return band_by_name(text)
    except KeyError:
        pass
    for sep in ("-", ","):
        if sep in text:
            lo, _, hi = text.partition(sep)
            try:
                return FrequencyBand(float(lo), float(hi))
            except ValueError as exc:
                raise DataError(f"bad band {text!r}: {exc}") from None
    raise DataError(f"bad band {text!r}: use a name like 'alpha' or a range like '8-12'")


def _write_json(path: Path, text: str) -> None:
    path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _scree_csv(curve) -> str:
    lines = ["k,dissimilarity"]
    lines += [f"{k},{d!r}" for k, d in zip(curve.k, curve.d)]
    return "\n".join(lines) + "\n"


def _scree_json(curve) -> str:
    return json.dumps({"k": list(curve.k), "d": list(curve.d)}, indent=2)


def _merge_plot_csv(history, labels) -> str:
    """Long-format membership table: one row per (k, channel)."""
    lines = ["k,channel,label,cluster"]
    n = history.n_channels
    for ch in range(n):
        lines.append(f"{n},{ch},{labels[ch]},{ch}")
    for step in history.steps:
        k = n - step.index
        for ch, cid in enumerate(step.membership):
            lines.append(f"{k},{ch},{labels[ch]},{cid}")
    return "\n".join(lines) + "\n"


def _partition_json(part, labels, k_requested) -> str:
    return json.dumps(
        {
            "k": part.k,
            "k_requested": k_requested,
            "labels": list(labels),
            "assignment": list(part.assignment),
            "groups": [[labels[i] for i in g] for g in part.groups()],
        },
        indent=2,
    )


def _run_method(ts, method: str, band: FrequencyBand, p: int, span):
    """Shared clustering pipeline used by both cluster and compare commands."""
    if method == "spectral-baseline":
        return spectral_baseline(ts, span=span)
    spec, _used = smoothed_spectrum(ts, span=span)
    coh = coherence_field(spec)
    if method == "hcc":
        return hcc(coh, band, p=p)
    bm = integrate_band(coh, band)
    return linkage_cluster(bm, "average" if method == "hac" else "complete", band)


def cmd_simulate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []

    def one(rep: int):
        seed = derive_seed(args.seed, rep)
        ts, ref, band = experiment(args.experiment, seed=seed)
        name = f"rep{rep:03d}.csv"
        write_timeseries_csv(ts, out / name)
        return rep, name, seed, ref, band, ts

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = sorted(pool.map(one, range(args.replicates)))
    _, _, _, ref, band, ts = results[0]
    manifest = {
        "command": "simulate",
        "version": __version__,
        "experiment": args.experiment,
        "seed": args.seed,
        "replicates": args.replicates,
        "fs": ts.fs,
        "n_channels": ts.n_channels,
        "n_samples": ts.n_samples,
        "band": {"lo": band.lo, "hi": band.hi, "name": band.name},
        "reference_groups": ref.groups(),
        "files": [
            {"replicate": rep, "file": name, "derived_seed": seed}
            for rep, name, seed, *_ in results
        ],
    }
    _write_json(out / "manifest.json", json.dumps(manifest, indent=2))
    print(f"wrote {args.replicates} replicate(s) + manifest to {out}")
    return 0


def _cluster_segment(ts, args, band, out: Path, tag: str) -> dict:
    span = None if args.span == "gcv" else int(args.span)
    history = _run_method(ts, args.method, band, args.p, span)
    curve = scree(history)
    if args.k == "auto":
        k = suggest_k(curve)
        k_requested = "auto"
    else:
        k = int(args.k)
        k_requested = k
    part = cut(history, k)
    _write_json(out / f"merges{tag}.json", history_to_json(history))
    (out / f"scree{tag}.csv").write_text(_scree_csv(curve), encoding="utf-8")
    _write_json(out / f"scree{tag}.json", _scree_json(curve))
    (out / f"merge_plot{tag}.csv").write_text(
        _merge_plot_csv(history, ts.labels), encoding="utf-8")
    _write_json(out / f"partition{tag}.json", _partition_json(part, ts.labels, k_requested))
    if args.svg:
        from .plots import merge_plot_svg, scree_svg

        (out / f"scree{tag}.svg").write_text(scree_svg(curve), encoding="utf-8")
        (out / f"merge_plot{tag}.svg").write_text(
            merge_plot_svg(history, ts.labels), encoding="utf-8")
    return {"segment": tag.lstrip("_") or None, "chosen_k": k, "clamps": history.clamp_count}


def cmd_cluster(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    band = parse_band(args.band)
    ts = read_timeseries_csv(args.input, fs=args.fs)
    band.validate_for(ts.fs)
    segments = []
    if args.segment_seconds:
        n_seg = ts.n_segments(args.segment_seconds)
        if n_seg < 1:
            raise DataError("recording shorter than one segment")
        def one(i):
            return _cluster_segment(ts.segment(args.segment_seconds, i), args, band,
                                    out, f"_seg{i:03d}")
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            segments = sorted(pool.map(one, range(n_seg)),
                              key=lambda r: r["segment"])
    else:
        segments = [_cluster_segment(ts, args, band, out, "")]
    manifest = {
        "command": "cluster",
        "version": __version__,
        "input": str(args.input),
        "method": args.method,
        "band": {"lo": band.lo, "hi": band.hi, "name": band.name},
        "p": args.p,
        "k": args.k,
        "span": args.span,
        "fs": ts.fs,
        "segment_seconds": args.segment_seconds,
        "segments": segments,
    }
    _write_json(out / "manifest.json", json.dumps(manifest, indent=2))
    print(f"wrote {len(segments)} segment result(s) to {out}")
    return 0


def cmd_compare(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    band = parse_band(args.band)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in CLUSTER_METHODS:
            raise DataError(f"unknown method {m!r}")
    span = None if args.span == "gcv" else int(args.span)

    if args.input in EXPERIMENT_NAMES:
        def load(rep):
            ts, _, _ = experiment(args.input, seed=derive_seed(args.seed, rep))
            return ts
    else:
        fixed = read_timeseries_csv(args.input, fs=args.fs)
        if args.replicates != 1:
            raise DataError("CSV input supports exactly one replicate")
        def load(rep):
            return fixed

    def one(rep):
        ts = load(rep)
        band.validate_for(ts.fs)
        return {m: cut(_run_method(ts, m, band, args.p, span), args.k)
                for m in methods}

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        partitions = list(pool.map(one, range(args.replicates)))

    labels = load(0).labels
    affinities = {}
    for m in methods:
        aff = affinity([p[m] for p in partitions])
        affinities[m] = aff
        (out / f"affinity_{m}.csv").write_text(
            affinity_to_csv(aff, labels), encoding="utf-8")
        if args.svg:
            from .plots import affinity_svg

            (out / f"affinity_{m}.svg").write_text(
                affinity_svg(aff, labels), encoding="utf-8")
    agreement_rows = ["method_a,method_b,mean_ari"]
    table = {}
    for i, ma in enumerate(methods):
        for mb in methods[i + 1:]:
            mean_ari = float(np.mean(
                [agreement(p[ma], p[mb]) for p in partitions]))
            table[f"{ma}|{mb}"] = mean_ari
            agreement_rows.append(f"{ma},{mb},{mean_ari!r}")
    (out / "agreement.csv").write_text("\n".join(agreement_rows) + "\n", encoding="utf-8")
    manifest = {
        "command": "compare",
        "version": __version__,
        "input": args.input,
        "methods": methods,
        "band": {"lo": band.lo, "hi": band.hi, "name": band.name},
        "p": args.p,
        "k": args.k,
        "span": args.span,
        "seed": args.seed,
        "replicates": args.replicates,
        "agreement": table,
    }
    _write_json(out / "manifest.json", json.dumps(manifest, indent=2))
    print(f"wrote {len(methods)} affinity matrix(es) to {out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    frontend = args.frontend
    if frontend is None and Path("frontend/index.html").exists():
        frontend = "frontend"
    app = create_app(data_dir=args.data_dir, n_jobs=args.jobs,
                     frontend_dir=frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cohclust",
                     description="Coherence-based clustering of multichannel recordings")
    parser.add_argument("--version", action="version", version=f"cohclust {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate experiment replicates as CSV")
    sim.add_argument("--experiment", required=True, choices=EXPERIMENT_NAMES)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--replicates", type=int, default=1)
    sim.add_argument("--out", required=True)
    sim.add_argument("--jobs", type=int, default=1)
    sim.set_defaults(func=cmd_simulate)

    clu = sub.add_parser("cluster", help="cluster a CSV recording")
    clu.add_argument("input")
    clu.add_argument("--method", default="hcc", choices=CLUSTER_METHODS)
    clu.add_argument("--band", default="0-50",
                     help="band name (alpha) or range in Hz (8-12)")
    clu.add_argument("--p", type=int, default=1, choices=(1, 2))
    clu.add_argument("--k", default="auto", help="cluster count or 'auto'")
    clu.add_argument("--span", default="gcv",
                     help="smoothing span (integer) or 'gcv'")
    clu.add_argument("--segment-seconds", type=float, default=None)
    clu.add_argument("--fs", type=float, default=100.0,
                     help="sampling rate when the CSV has no t column")
    clu.add_argument("--out", required=True)
    clu.add_argument("--jobs", type=int, default=1)
    clu.add_argument("--svg", action=argparse.BooleanOptionalAction, default=True)
    clu.set_defaults(func=cmd_cluster)

    cmp_ = sub.add_parser("compare",
                          help="affinity + agreement across methods and replicates")
    cmp_.add_argument("input", help="experiment name or CSV path")
    cmp_.add_argument("--methods", default="hcc,hac,hmc")
    cmp_.add_argument("--band", default="alpha")
    cmp_.add_argument("--p", type=int, default=1, choices=(1, 2))
    cmp_.add_argument("--k", type=int, required=True)
    cmp_.add_argument("--span", default="gcv")
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--replicates", type=int, default=1)
    cmp_.add_argument("--fs", type=float, default=100.0)
    cmp_.add_argument("--out", required=True)
    cmp_.add_argument("--jobs", type=int, default=1)
    cmp_.add_argument("--svg", action=argparse.BooleanOptionalAction, default=True)
    cmp_.set_defaults(func=cmd_compare)

    srv = sub.add_parser("serve", help="run the HTTP API")
    srv.add_argument("--host", default=os.environ.get("COHCLUST_HOST", "127.0.0.1"))
    srv.add_argument("--port", type=int,
                     default=int(os.environ.get("COHCLUST_PORT", "8000")))
    srv.add_argument("--data-dir", default=os.environ.get("COHCLUST_DATA_DIR"))
    srv.add_argument("--jobs", type=int, default=1)
    srv.add_argument("--frontend", default=None,
                     help="directory with the built web UI (auto-detects ./frontend)")
    srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"cohclust: data error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"cohclust: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
