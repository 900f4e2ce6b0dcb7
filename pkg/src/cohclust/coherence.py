"""Dependence measures between two clusters of channels.

Cluster coherence compares the sorted, normalized eigenvalue spectrum of
the joint coherence matrix of both clusters against the pooled spectra of
the two within-cluster blocks alone. Uncorrelated clusters give zero;
perfectly correlated equally-sized clusters give one. Average, minimum,
and determinant-based block coherence are provided as comparators.
"""

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .core import FrequencyBand
from .spectral import COHERENCE, SMOOTHED, SpectralField

__all__ = [
    "ClusterPair",
    "CoherenceCurve",
    "normalized_sorted_eigenvalues",
    "cluster_coherence",
    "cluster_coherence_values",
    "cluster_coherence_curve",
    "average_coherence",
    "minimum_coherence",
    "average_coherence_curve",
    "minimum_coherence_curve",
    "block_coherence",
    "block_coherence_curve",
    "curve_to_csv",
    "curve_to_json",
]

_SYM_TOL = 1e-8


@dataclass(frozen=True)
class ClusterPair:
    """Two disjoint, nonempty sets of channel indices."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left = tuple(sorted(int(i) for i in self.left))
        right = tuple(sorted(int(i) for i in self.right))
        if not left or not right:
            raise ValueError("both clusters must be nonempty")
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("duplicate channel indices within a cluster")
        if set(left) & set(right):
            raise ValueError("clusters overlap")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def indices(self) -> tuple[int, ...]:
        return self.left + self.right

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.left), len(self.right)


@dataclass(frozen=True)
class CoherenceCurve:
    """A dependence measure evaluated at every Fourier frequency."""

    freqs: np.ndarray
    values: np.ndarray
    measure: str

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if freqs.shape != values.shape or freqs.ndim != 1:
            raise ValueError("freqs and values must be 1D arrays of equal length")
        if values.size and values.min() < -1e-12:
            raise ValueError("curve values must be nonnegative")
        for arr in (freqs, values):
            arr.flags.writeable = False
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "values", values)

    def band_mean(self, band: FrequencyBand) -> float:
        mask = band.mask(self.freqs)
        if not mask.any():
            raise ValueError(f"band {band} contains no Fourier frequencies")
        return float(self.values[mask].mean())


def normalized_sorted_eigenvalues(m: np.ndarray, total: int) -> np.ndarray:
    """Eigenvalues of a symmetric PSD matrix, clamped at zero, sorted
    descending, and divided by ``total``.

    ``total`` is the dimension of the joint matrix the spectrum will be
    compared against, so pooled block spectra and joint spectra end up on
    the same scale (both sum to one for unit-diagonal coherence matrices).
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("input must be a square matrix")
    if np.max(np.abs(m - m.T)) > _SYM_TOL:
        raise ValueError("input matrix is not symmetric")
    vals = np.linalg.eigvalsh(m)
    vals = np.maximum(vals, 0.0)[::-1]
    return vals / float(total)


def _check_coherence_submatrix(sub: np.ndarray) -> None:
    if np.max(np.abs(sub - sub.T)) > _SYM_TOL:
        raise ValueError("coherence submatrix is not symmetric")
    if np.max(np.abs(np.diag(sub) - 1.0)) > _SYM_TOL:
        raise ValueError("coherence submatrix must have unit diagonal")
    if sub.min() < -_SYM_TOL or sub.max() > 1 + _SYM_TOL:
        raise ValueError("coherence entries must lie in [0, 1]")


def cluster_coherence(c: np.ndarray, pair: ClusterPair, p: int = 1) -> float:
    """L^p distance between the joint eigenvalue spectrum and the pooled
    within-block spectrum, both normalized by the joint dimension.

    Zero iff the pooled within-block spectrum equals the joint spectrum
    (in particular when the between-block coherence vanishes).
    """
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    c = np.asarray(c, dtype=np.float64)
    idx = sorted(pair.indices)  # canonical order: swapping the roles is exact
    sub = c[np.ix_(idx, idx)]
    _check_coherence_submatrix(sub)
    n = len(idx)
    joint = normalized_sorted_eigenvalues(sub, n)
    left = c[np.ix_(pair.left, pair.left)]
    right = c[np.ix_(pair.right, pair.right)]
    lam_l = np.maximum(np.linalg.eigvalsh(left), 0.0)
    lam_r = np.maximum(np.linalg.eigvalsh(right), 0.0)
    pooled = np.sort(np.concatenate([lam_l, lam_r]))[::-1] / float(n)
    diff = np.abs(joint - pooled)
    if p == 1:
        return float(diff.sum())
    return float(np.sqrt(np.sum(diff**2)))


def cluster_coherence_values(mats: np.ndarray, left, right, p: int = 1) -> np.ndarray:
    """Vectorized cluster coherence over a stack of coherence matrices.

    ``mats`` has shape ``(B, N, N)``; returns ``(B,)`` values. This is the
    same computation as :func:`cluster_coherence` batched across frequency
    bins with one LAPACK call per eigenvalue set.
    """
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    left = tuple(sorted(left))
    right = tuple(sorted(right))
    if set(left) & set(right):
        raise ValueError("clusters overlap")
    idx = tuple(sorted(left + right))  # canonical order: role-swap is exact
    n = len(idx)
    joint = np.linalg.eigvalsh(mats[:, idx, :][:, :, idx])
    joint = np.maximum(joint, 0.0)[:, ::-1] / n
    lam_l = np.maximum(np.linalg.eigvalsh(mats[:, left, :][:, :, left]), 0.0)
    lam_r = np.maximum(np.linalg.eigvalsh(mats[:, right, :][:, :, right]), 0.0)
    pooled = np.sort(np.concatenate([lam_l, lam_r], axis=1), axis=1)[:, ::-1] / n
    diff = np.abs(joint - pooled)
    if p == 1:
        return diff.sum(axis=1)
    return np.sqrt(np.sum(diff**2, axis=1))


def cluster_coherence_curve(field: SpectralField, pair: ClusterPair,
                            p: int = 1) -> CoherenceCurve:
    """Pointwise cluster coherence across all Fourier frequencies."""
    if field.kind != COHERENCE:
        raise ValueError(f"expected a {COHERENCE} field, got {field.kind}")
    values = cluster_coherence_values(field.mats, pair.left, pair.right, p)
    return CoherenceCurve(field.freqs, values, f"cco-p{p}")


def _between_block(c: np.ndarray, pair: ClusterPair) -> np.ndarray:
    c = np.asarray(c, dtype=np.float64)
    return c[np.ix_(pair.left, pair.right)]


def average_coherence(c: np.ndarray, pair: ClusterPair) -> float:
    """Mean of the between-block coherence entries (ignores within-block structure)."""
    return float(_between_block(c, pair).mean())


def minimum_coherence(c: np.ndarray, pair: ClusterPair) -> float:
    """Minimum of the between-block coherence entries."""
    return float(_between_block(c, pair).min())


def average_coherence_curve(field: SpectralField, pair: ClusterPair) -> CoherenceCurve:
    if field.kind != COHERENCE:
        raise ValueError(f"expected a {COHERENCE} field, got {field.kind}")
    block = field.mats[np.ix_(range(field.n_freqs), pair.left, pair.right)]
    return CoherenceCurve(field.freqs, block.mean(axis=(1, 2)), "average")


def minimum_coherence_curve(field: SpectralField, pair: ClusterPair) -> CoherenceCurve:
    if field.kind != COHERENCE:
        raise ValueError(f"expected a {COHERENCE} field, got {field.kind}")
    block = field.mats[np.ix_(range(field.n_freqs), pair.left, pair.right)]
    return CoherenceCurve(field.freqs, block.min(axis=(1, 2)), "minimum")


def block_coherence(s: np.ndarray, pair: ClusterPair) -> float:
    """Determinant-based block coherence of a spectral matrix at one frequency:
    ``1 - det(S_joint) / (det(S_left) det(S_right))``.

    The submatrix is normalized by its diagonal first (the ratio is invariant
    to per-channel scale), and each within block must stay nonsingular after
    that normalization.
    """
    s = np.asarray(s, dtype=np.complex128)
    idx = pair.indices
    sub = s[np.ix_(idx, idx)]
    d = np.sqrt(np.abs(np.diag(sub).real))
    if np.any(d <= 0):
        raise ValueError("zero auto-spectrum inside block-coherence submatrix")
    sub = sub / d[:, None] / d[None, :]
    n1 = len(pair.left)
    det_l = np.linalg.det(sub[:n1, :n1]).real
    det_r = np.linalg.det(sub[n1:, n1:]).real
    for name, val in (("left", det_l), ("right", det_r)):
        if abs(val) <= 1e-12:
            raise ValueError(f"{name} block is numerically singular (det {val:g})")
    det_joint = np.linalg.det(sub).real
    return float(1.0 - det_joint / (det_l * det_r))


def block_coherence_curve(spec: SpectralField, pair: ClusterPair) -> CoherenceCurve:
    if spec.kind != SMOOTHED:
        raise ValueError(f"expected a {SMOOTHED} field, got {spec.kind}")
    values = np.array([block_coherence(m, pair) for m in spec.mats])
    # tiny negative excursions from determinant rounding are not meaningful
    values = np.maximum(values, 0.0)
    return CoherenceCurve(spec.freqs, values, "block")


def curve_to_csv(curve: CoherenceCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["freq", "value"])
    for f, v in zip(curve.freqs, curve.values):
        w.writerow([repr(float(f)), repr(float(v))])
    return buf.getvalue()


def curve_to_json(curve: CoherenceCurve) -> str:
    return json.dumps(
        {
            "measure": curve.measure,
            "freqs": [float(f) for f in curve.freqs],
            "values": [float(v) for v in curve.values],
        },
        indent=2,
    )
