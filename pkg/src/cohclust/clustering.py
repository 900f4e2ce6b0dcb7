"""Hierarchical agglomeration engines and merge-history utilities.

Three coherence-driven engines share one deterministic agglomeration core:

* ``hcc``   -- dissimilarity 1 - band-mean cluster coherence, recomputed
               between the newly merged cluster and every survivor;
* ``hac``   -- average linkage on 1 - pairwise band coherence (equivalent
               to average coherence between clusters);
* ``hmc``   -- complete linkage on the same matrix (minimum coherence).

A simplified spectral-similarity baseline clusters on distances between
normalized smoothed auto-spectra, re-estimating cluster spectra from the
pooled member average after each merge. It is labeled ``spectral-baseline``
in every output; it approximates spectra-shape clustering only and makes
no claim of fidelity to any published shape-based method.

Ties in the minimum dissimilarity break toward the lexicographically
smallest pair of cluster ids (a cluster's id is its smallest member), so
merge histories are bit-reproducible.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import FrequencyBand, Partition, TimeSeriesSet
from .coherence import cluster_coherence_values
from .spectral import COHERENCE, SpectralField, auto_spectra, smoothed_spectrum

__all__ = [
    "MergeStep",
    "MergeHistory",
    "ScreeCurve",
    "hcc",
    "linkage_cluster",
    "spectral_baseline",
    "scree",
    "cut",
    "suggest_k",
    "first_coresidence_k",
    "history_to_json",
    "history_from_json",
]

logger = logging.getLogger(__name__)

METHODS = ("hcc-p1", "hcc-p2", "hac", "hmc", "spectral-baseline")


@dataclass(frozen=True)
class MergeStep:
    """One agglomeration step: which clusters merged, at what dissimilarity."""

    index: int                    # 1-based; after this step there are N - index clusters
    merged: tuple[int, int]       # ids (smallest member) of the two merged clusters
    dissimilarity: float
    membership: tuple[int, ...]   # canonical cluster labels 0..k-1 after the merge


@dataclass(frozen=True)
class MergeHistory:
    """Full agglomeration record: N - 1 steps down to a single cluster."""

    steps: tuple[MergeStep, ...]
    method: str
    band: FrequencyBand
    n_channels: int
    clamp_count: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if len(self.steps) != self.n_channels - 1:
            raise ValueError(
                f"{self.n_channels} channels require {self.n_channels - 1} steps, "
                f"got {len(self.steps)}"
            )
        for i, step in enumerate(self.steps, start=1):
            if step.index != i:
                raise ValueError("steps must be numbered 1..N-1 in order")
            if not 0.0 <= step.dissimilarity <= 1.0:
                raise ValueError("recorded dissimilarities must lie in [0, 1]")
            k = len(set(step.membership))
            if k != self.n_channels - i:
                raise ValueError(f"step {i} must have {self.n_channels - i} clusters")
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def n_steps(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ScreeCurve:
    """Minimum merge dissimilarity as a function of the cluster count."""

    k: tuple[int, ...]   # N-1 down to 1
    d: tuple[float, ...]

    def __post_init__(self):
        if len(self.k) != len(self.d):
            raise ValueError("k and d must have equal length")
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        object.__setattr__(self, "d", tuple(float(v) for v in self.d))


def _canonical_membership(clusters: list[tuple[int, ...]], n: int) -> tuple[int, ...]:
    labels = [-1] * n
    order = sorted(range(len(clusters)), key=lambda i: min(clusters[i]))
    for cid, ci in enumerate(order):
        for ch in clusters[ci]:
            labels[ch] = cid
    return tuple(labels)


def _agglomerate(n: int, init_d: np.ndarray, recompute, method: str,
                 band: FrequencyBand, n_jobs: int = 1) -> MergeHistory:
    """Shared agglomeration core.

    ``init_d`` is the full symmetric dissimilarity matrix between singletons;
    ``recompute(new_members, other_members)`` yields the dissimilarity between
    the freshly merged cluster and a survivor. Ties break toward the smallest
    (id_a, id_b) pair, ids being smallest member indices.
    """
    if n < 2:
        raise ValueError("need at least 2 channels to cluster")
    clusters: dict[int, tuple[int, ...]] = {i: (i,) for i in range(n)}
    d: dict[tuple[int, int], float] = {}
    for a in range(n):
        for b in range(a + 1, n):
            d[(a, b)] = float(init_d[a, b])
    steps: list[MergeStep] = []
    clamps = 0
    pool = ThreadPoolExecutor(max_workers=n_jobs) if n_jobs > 1 else None
    try:
        for step_idx in range(1, n):
            best = min(d, key=lambda key: (d[key], key))
            value = d[best]
            if value < 0.0 or value > 1.0:
                clamps += 1
                value = min(max(value, 0.0), 1.0)
            a, b = best
            merged = tuple(sorted(clusters.pop(a) + clusters.pop(b)))
            new_id = min(a, b)
            d = {key: v for key, v in d.items()
                 if a not in key and b not in key}
            others = sorted(clusters)
            clusters[new_id] = merged
            if others:
                if pool is not None:
                    values = list(pool.map(
                        lambda o: recompute(merged, clusters[o]), others))
                else:
                    values = [recompute(merged, clusters[o]) for o in others]
                for o, v in zip(others, values):
                    key = (new_id, o) if new_id < o else (o, new_id)
                    d[key] = float(v)
            steps.append(MergeStep(
                index=step_idx,
                merged=(min(a, b), max(a, b)),
                dissimilarity=value,
                membership=_canonical_membership(list(clusters.values()), n),
            ))
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    if clamps:
        logger.debug("%s: clamped %d dissimilarities into [0, 1]", method, clamps)
    return MergeHistory(tuple(steps), method, band, n, clamps)


def hcc(field: SpectralField, band: FrequencyBand, p: int = 1,
        n_jobs: int = 1) -> MergeHistory:
    """Hierarchical clustering driven by band-mean cluster coherence.

    Starts from singletons with dissimilarity 1 - band-mean pairwise
    coherence; after every merge, the dissimilarity between the new cluster
    and each survivor is 1 - the band mean of their cluster-coherence curve.
    """
    if field.kind != COHERENCE:
        raise ValueError(f"hcc expects a {COHERENCE} field, got {field.kind}")
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    n = field.n_channels
    if n < 2:
        raise ValueError("need at least 2 channels")
    band.validate_for(field.fs)
    mask = band.mask(field.freqs)
    if not mask.any():
        raise ValueError(f"band {band} contains no Fourier frequencies")
    cohs = np.ascontiguousarray(field.mats[mask])  # (B, N, N)
    init_d = 1.0 - cohs.mean(axis=0)

    def recompute(left, right) -> float:
        return 1.0 - float(cluster_coherence_values(cohs, left, right, p).mean())

    return _agglomerate(n, init_d, recompute, f"hcc-p{p}", band, n_jobs=n_jobs)


def linkage_cluster(band_matrix: np.ndarray, linkage: str = "average",
                    band: FrequencyBand | None = None) -> MergeHistory:
    """Classic agglomeration on dissimilarity 1 - integrated band coherence.

    ``average`` linkage equals clustering on average coherence between
    clusters (hac); ``complete`` equals minimum coherence (hmc).
    """
    c = np.asarray(band_matrix, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("band matrix must be square")
    if np.max(np.abs(c - c.T)) > 1e-8:
        raise ValueError("band matrix must be symmetric")
    if linkage not in ("average", "complete"):
        raise ValueError("linkage must be 'average' or 'complete'")
    base_d = 1.0 - c

    if linkage == "average":
        def recompute(left, right):
            return float(base_d[np.ix_(left, right)].mean())
        method = "hac"
    else:
        def recompute(left, right):
            return float(base_d[np.ix_(left, right)].max())
        method = "hmc"

    if band is None:
        band = FrequencyBand(0.0, float("inf"))
    return _agglomerate(c.shape[0], base_d, recompute, method, band)


def spectral_baseline(ts: TimeSeriesSet, span: int | None = None,
                      family: str = "fejer") -> MergeHistory:
    """Agglomeration on distances between normalized smoothed auto-spectra.

    The distance is half the L1 distance between unit-sum spectra (total
    variation, which keeps recorded dissimilarities in [0, 1] and orders
    merges identically to plain L1). When clusters merge, the cluster
    spectrum is re-estimated as the pooled average of its members' spectra.
    Spectrally identical but uncorrelated channels merge early here; the
    coherence-driven engines keep them apart.
    """
    spec, _ = smoothed_spectrum(ts, span=span, family=family)
    diag = auto_spectra(spec)  # (J, N)
    n = ts.n_channels
    if n < 2:
        raise ValueError("need at least 2 channels")

    def norm(v: np.ndarray) -> np.ndarray:
        s = v.sum()
        return v / s if s > 0 else np.full_like(v, 1.0 / len(v))

    def distance(members_a, members_b) -> float:
        sa = norm(diag[:, list(members_a)].mean(axis=1))
        sb = norm(diag[:, list(members_b)].mean(axis=1))
        return 0.5 * float(np.abs(sa - sb).sum())

    init_d = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            init_d[a, b] = init_d[b, a] = distance((a,), (b,))
    band = FrequencyBand(0.0, ts.fs / 2, "full")
    return _agglomerate(n, init_d, distance, "spectral-baseline", band)


def scree(h: MergeHistory) -> ScreeCurve:
    """Extract (clusters remaining, merge dissimilarity) pairs in merge order."""
    ks = tuple(h.n_channels - s.index for s in h.steps)
    ds = tuple(s.dissimilarity for s in h.steps)
    return ScreeCurve(ks, ds)


def cut(h: MergeHistory, k: int) -> Partition:
    """Membership recorded when the history reached exactly ``k`` clusters."""
    n = h.n_channels
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    if k == n:
        return Partition(tuple(range(n)), n)
    step = h.steps[n - k - 1]
    return Partition(step.membership, k)


def suggest_k(s: ScreeCurve, threshold: float = 0.15) -> int:
    """Smallest cluster count right before a significant dissimilarity jump.

    Scanning the merges toward one cluster, a merge whose dissimilarity
    exceeds the previous merge's by more than ``threshold`` -- a fraction
    of the unit dissimilarity scale -- marks an elbow: the suggestion is
    to stop just before it. Returns 1 when no jump qualifies, i.e. when
    the curve climbs without any abrupt step.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    for j in range(len(s.d) - 1, 0, -1):
        if s.d[j] > s.d[j - 1] + threshold:
            return s.k[j] + 1
    return 1


def first_coresidence_k(h: MergeHistory, group_a, group_b) -> int:
    """Largest k at which some cluster already contains members of both groups."""
    ga, gb = set(group_a), set(group_b)
    for step in h.steps:
        clusters: dict[int, set[int]] = {}
        for ch, cid in enumerate(step.membership):
            clusters.setdefault(cid, set()).add(ch)
        if any(c & ga and c & gb for c in clusters.values()):
            return h.n_channels - step.index
    return 1


def history_to_dict(h: MergeHistory) -> dict:
    hi = h.band.hi if np.isfinite(h.band.hi) else None  # None = unbounded
    return {
        "method": h.method,
        "band": {"lo": h.band.lo, "hi": hi, "name": h.band.name},
        "n_channels": h.n_channels,
        "clamp_count": h.clamp_count,
        "steps": [
            {
                "index": s.index,
                "merged": list(s.merged),
                "dissimilarity": s.dissimilarity,
                "membership": list(s.membership),
            }
            for s in h.steps
        ],
    }


def history_to_json(h: MergeHistory) -> str:
    return json.dumps(history_to_dict(h), indent=2)


def history_from_json(text: str) -> MergeHistory:
    payload = json.loads(text)
    band = dict(payload["band"])
    if band.get("hi") is None:
        band["hi"] = float("inf")
    steps = tuple(
        MergeStep(
            index=s["index"],
            merged=(s["merged"][0], s["merged"][1]),
            dissimilarity=s["dissimilarity"],
            membership=tuple(s["membership"]),
        )
        for s in payload["steps"]
    )
    return MergeHistory(
        steps,
        payload["method"],
        FrequencyBand(band["lo"], band["hi"], band.get("name")),
        payload["n_channels"],
        payload.get("clamp_count", 0),
    )
