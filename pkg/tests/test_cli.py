import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from cohclust.cli import main, parse_band
from cohclust.core import DataError, read_timeseries_csv


def run_cli(*argv):
    return main(list(argv))


def test_parse_band_forms():
    assert parse_band("alpha").name == "alpha"
    band = parse_band("8-12")
    assert (band.lo, band.hi) == (8.0, 12.0)
    band = parse_band("0.5,30")
    assert (band.lo, band.hi) == (0.5, 30.0)
    with pytest.raises(DataError):
        parse_band("omega")


def test_simulate_exp1_shape(tmp_path):
    out = tmp_path / "sim"
    assert run_cli("simulate", "--experiment", "exp1", "--seed", "3",
                   "--replicates", "1", "--out", str(out)) == 0
    csv_path = out / "rep000.csv"
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == 1001  # header + 1000 rows
    assert len(lines[0].split(",")) == 6
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["experiment"] == "exp1"
    assert manifest["n_samples"] == 1000


def test_simulate_exp3_column_count(tmp_path):
    out = tmp_path / "sim3"
    assert run_cli("simulate", "--experiment", "exp3", "--seed", "0",
                   "--replicates", "1", "--out", str(out)) == 0
    header = (out / "rep000.csv").read_text().splitlines()[0]
    assert len(header.split(",")) == 128


def test_simulate_replicates_and_manifest(tmp_path):
    out = tmp_path / "sim"
    assert run_cli("simulate", "--experiment", "exp2-case1", "--seed", "1",
                   "--replicates", "4", "--out", str(out)) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert len(manifest["files"]) == 4
    assert len(list(out.glob("rep*.csv"))) == 4


def test_cluster_exp1_recovers_reference(tmp_path):
    sim = tmp_path / "sim"
    run_cli("simulate", "--experiment", "exp1", "--seed", "5",
            "--replicates", "1", "--out", str(sim))
    out = tmp_path / "clu"
    assert run_cli("cluster", str(sim / "rep000.csv"), "--method", "hcc",
                   "--band", "0-50", "--k", "2", "--out", str(out),
                   "--no-svg") == 0
    part = json.loads((out / "partition.json").read_text())
    groups = sorted(tuple(sorted(g)) for g in
                    [[part["labels"].index(n) for n in names]
                     for names in part["groups"]])
    assert groups == [(0, 1, 2), (3, 4, 5)]
    merges = json.loads((out / "merges.json").read_text())
    assert len(merges["steps"]) == 5
    scree_lines = (out / "scree.csv").read_text().strip().splitlines()
    assert scree_lines[0] == "k,dissimilarity"
    assert len(scree_lines) == 6
    plot_lines = (out / "merge_plot.csv").read_text().strip().splitlines()
    assert plot_lines[0] == "k,channel,label,cluster"
    assert len(plot_lines) == 1 + 6 * 6  # header + one row per (k, channel)


def test_cluster_auto_k_recorded(tmp_path):
    sim = tmp_path / "sim"
    run_cli("simulate", "--experiment", "exp1", "--seed", "6",
            "--replicates", "1", "--out", str(sim))
    out = tmp_path / "auto"
    assert run_cli("cluster", str(sim / "rep000.csv"), "--k", "auto",
                   "--out", str(out), "--no-svg") == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["k"] == "auto"
    assert isinstance(manifest["segments"][0]["chosen_k"], int)


def test_cluster_segmented(tmp_path):
    sim = tmp_path / "sim"
    run_cli("simulate", "--experiment", "exp1", "--seed", "7",
            "--replicates", "1", "--out", str(sim))
    out = tmp_path / "seg"
    assert run_cli("cluster", str(sim / "rep000.csv"), "--segment-seconds", "2",
                   "--band", "2-10", "--k", "2", "--out", str(out),
                   "--no-svg") == 0
    assert len(list(out.glob("merges_seg*.json"))) == 5
    assert len(list(out.glob("partition_seg*.json"))) == 5


def test_cluster_golden_determinism(tmp_path):
    sim = tmp_path / "sim"
    run_cli("simulate", "--experiment", "exp2-case1", "--seed", "11",
            "--replicates", "1", "--out", str(sim))
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        run_cli("cluster", str(sim / "rep000.csv"), "--band", "delta",
                "--k", "2", "--out", str(out), "--no-svg")
        outs.append(out)
    for fname in ("merges.json", "scree.csv", "merge_plot.csv",
                  "partition.json", "manifest.json"):
        a = (outs[0] / fname).read_bytes()
        b = (outs[1] / fname).read_bytes()
        assert a == b, fname


def test_simulate_golden_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        run_cli("simulate", "--experiment", "exp1", "--seed", "9",
                "--replicates", "2", "--out", str(out))
    for fname in ("rep000.csv", "rep001.csv", "manifest.json"):
        assert (a / fname).read_bytes() == (b / fname).read_bytes()


def test_compare_exp1(tmp_path):
    out = tmp_path / "cmp"
    assert run_cli("compare", "exp1", "--methods", "hcc,hac", "--band", "0-50",
                   "--k", "2", "--replicates", "3", "--seed", "2",
                   "--out", str(out), "--no-svg") == 0
    aff = (out / "affinity_hcc.csv").read_text().strip().splitlines()
    assert len(aff) == 7  # header + 6 channels
    agree = (out / "agreement.csv").read_text().strip().splitlines()
    assert agree[0] == "method_a,method_b,mean_ari"
    assert len(agree) == 2
    manifest = json.loads((out / "manifest.json").read_text())
    assert "hcc|hac" in manifest["agreement"]


def test_compare_single_replicate_is_binary(tmp_path):
    out = tmp_path / "cmp1"
    run_cli("compare", "exp1", "--methods", "hcc", "--band", "0-50",
            "--k", "2", "--replicates", "1", "--out", str(out), "--no-svg")
    rows = (out / "affinity_hcc.csv").read_text().strip().splitlines()[1:]
    values = {float(v) for row in rows for v in row.split(",")}
    assert values <= {0.0, 1.0}


def test_compare_csv_input(tmp_path):
    sim = tmp_path / "sim"
    run_cli("simulate", "--experiment", "exp1", "--seed", "21",
            "--replicates", "1", "--out", str(sim))
    out = tmp_path / "cmp_csv"
    assert run_cli("compare", str(sim / "rep000.csv"), "--methods", "hcc,hmc",
                   "--band", "0-50", "--k", "2", "--out", str(out),
                   "--no-svg") == 0
    assert (out / "affinity_hcc.csv").exists()
    assert (out / "affinity_hmc.csv").exists()
    # a fixed recording cannot be replicated
    assert run_cli("compare", str(sim / "rep000.csv"), "--methods", "hcc",
                   "--band", "0-50", "--k", "2", "--replicates", "3",
                   "--out", str(tmp_path / "x"), "--no-svg") == 2


def test_svg_outputs(tmp_path):
    sim = tmp_path / "sim"
    run_cli("simulate", "--experiment", "exp1", "--seed", "13",
            "--replicates", "1", "--out", str(sim))
    out = tmp_path / "svg"
    run_cli("cluster", str(sim / "rep000.csv"), "--k", "2", "--out", str(out))
    assert (out / "scree.svg").read_text().startswith("<?xml")
    assert (out / "merge_plot.svg").exists()


def test_usage_error_exits_1():
    proc = subprocess.run(
        [sys.executable, "-m", "cohclust.cli", "simulate", "--experiment", "nope",
         "--out", "/tmp/x"],
        capture_output=True, text=True)
    assert proc.returncode == 1


def test_data_error_exits_2(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n1\n")
    proc = subprocess.run(
        [sys.executable, "-m", "cohclust.cli", "cluster", str(bad),
         "--k", "2", "--out", str(tmp_path / "out")],
        capture_output=True, text=True)
    assert proc.returncode == 2
    assert "line 3" in proc.stderr


def test_missing_file_exits_2(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cohclust.cli", "cluster",
         str(tmp_path / "none.csv"), "--k", "2", "--out", str(tmp_path / "o")],
        capture_output=True, text=True)
    assert proc.returncode == 2
