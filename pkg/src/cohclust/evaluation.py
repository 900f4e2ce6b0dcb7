"""Replicate-level evaluation: co-membership affinity across runs,
partition agreement, and pointwise quantile bands for scree curves."""

import csv
import io
import json
from dataclasses import dataclass
from math import comb

import numpy as np

from .core import Partition
from .clustering import ScreeCurve

__all__ = [
    "AffinityMatrix",
    "affinity",
    "agreement",
    "ScreeBand",
    "scree_band",
    "affinity_to_csv",
    "affinity_to_json",
    "scree_band_to_csv",
]


@dataclass(frozen=True)
class AffinityMatrix:
    """Fraction of replicates in which each channel pair shared a cluster."""

    values: np.ndarray
    replicates: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("affinity must be square")
        if np.max(np.abs(v - v.T)) > 1e-12:
            raise ValueError("affinity must be symmetric")
        if v.min() < 0 or v.max() > 1 + 1e-12:
            raise ValueError("affinity entries must lie in [0, 1]")
        if np.max(np.abs(np.diag(v) - 1.0)) > 1e-12:
            raise ValueError("affinity diagonal must be 1")
        if self.replicates < 1:
            raise ValueError("need at least one replicate")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def block_mean(self, channels) -> float:
        """Mean affinity over all unordered pairs within one channel group."""
        idx = sorted(channels)
        if len(idx) < 2:
            raise ValueError("need at least two channels for a block mean")
        sub = self.values[np.ix_(idx, idx)]
        n = len(idx)
        return float((sub.sum() - n) / (n * (n - 1)))


def affinity(partitions: list[Partition]) -> AffinityMatrix:
    """Entry (i, j): fraction of replicate partitions with i, j co-clustered."""
    if not partitions:
        raise ValueError("need at least one partition")
    n = partitions[0].n
    if any(p.n != n for p in partitions):
        raise ValueError("all partitions must cover the same channels")
    acc = np.zeros((n, n))
    for p in partitions:
        acc += p.co_membership()
    return AffinityMatrix(acc / len(partitions), len(partitions))


def agreement(p: Partition, q: Partition) -> float:
    """Adjusted Rand index between two partitions of the same channels.

    One iff the co-membership relations coincide; around zero for chance-level
    agreement; invariant to relabeling clusters on either side.
    """
    if p.n != q.n:
        raise ValueError("partitions cover different channel counts")
    n = p.n
    contingency = np.zeros((p.k, q.k), dtype=np.int64)
    for a, b in zip(p.assignment, q.assignment):
        contingency[a, b] += 1
    sum_ij = sum(comb(int(v), 2) for v in contingency.flat)
    sum_a = sum(comb(int(v), 2) for v in contingency.sum(axis=1))
    sum_b = sum(comb(int(v), 2) for v in contingency.sum(axis=0))
    total = comb(n, 2)
    expected = sum_a * sum_b / total if total else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        return 1.0  # both partitions degenerate (all-singletons vs all-singletons etc.)
    return float((sum_ij - expected) / (max_index - expected))


@dataclass(frozen=True)
class ScreeBand:
    """Pointwise quantile summary of scree curves across replicates."""

    k: tuple[int, ...]
    levels: tuple[float, ...]
    values: np.ndarray  # (len(levels), len(k))

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (len(self.levels), len(self.k)):
            raise ValueError("values must be (levels x k)")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def curve(self, level: float) -> np.ndarray:
        return self.values[self.levels.index(level)]


def scree_band(curves: list[ScreeCurve],
               quantiles=(0.1, 0.5, 0.9)) -> ScreeBand:
    """Pointwise quantiles of the merge dissimilarities at every k."""
    if not curves:
        raise ValueError("need at least one curve")
    k = curves[0].k
    if any(c.k != k for c in curves):
        raise ValueError("scree curves must share the same k grid")
    data = np.asarray([c.d for c in curves])  # (M, len(k))
    levels = tuple(float(q) for q in quantiles)
    table = np.quantile(data, levels, axis=0)
    return ScreeBand(k, levels, table)


def affinity_to_csv(a: AffinityMatrix, labels) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(list(labels))
    for row in a.values:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def affinity_to_json(a: AffinityMatrix, labels) -> str:
    return json.dumps(
        {
            "labels": list(labels),
            "replicates": a.replicates,
            "values": [[float(v) for v in row] for row in a.values],
        },
        indent=2,
    )


def scree_band_to_csv(band: ScreeBand) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["k"] + [f"q{level:g}" for level in band.levels])
    for j, k in enumerate(band.k):
        w.writerow([k] + [repr(float(band.values[i, j])) for i in range(len(band.levels))])
    return buf.getvalue()
