"""Spectral matrix estimation for multichannel recordings.

The pipeline is: raw periodogram matrix at the Fourier frequencies,
kernel smoothing across frequency (same span for every entry, so the
estimate stays positive semidefinite), then the squared-coherence field
derived entrywise from the smoothed spectrum.

Frequencies run over ``j/T`` for ``j = 1..floor(T/2)``; the DC bin is
dropped because channels are mean-centered before transforming.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

from .core import FrequencyBand, TimeSeriesSet

__all__ = [
    "SpectralField",
    "SmoothingKernel",
    "periodogram_matrix",
    "daniell_kernel",
    "fejer_kernel",
    "smooth",
    "select_span_gcv",
    "coherence_field",
    "integrate_band",
    "auto_spectra",
    "field_to_json",
    "field_from_json",
    "save_field_npz",
    "load_field_npz",
]

RAW = "raw-periodogram"
SMOOTHED = "smoothed-spectrum"
COHERENCE = "coherence"
_KINDS = (RAW, SMOOTHED, COHERENCE)

_HERMITIAN_TOL = 1e-10
_FLOOR = 1e-300  # guards the GCV log against exact-zero periodogram ordinates


@dataclass(frozen=True)
class SpectralField:
    """Per-frequency N x N matrices: spectral (complex Hermitian) or coherence (real).

    ``mats`` has shape ``(J, N, N)`` aligned with ``freqs`` (Hz).
    """

    freqs: np.ndarray
    mats: np.ndarray
    kind: str
    fs: float
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        freqs = np.asarray(self.freqs, dtype=np.float64)
        mats = np.asarray(self.mats)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise ValueError("mats must have shape (J, N, N)")
        if freqs.shape != (mats.shape[0],):
            raise ValueError("freqs length must match number of matrices")
        if self.kind == COHERENCE:
            mats = mats.real.astype(np.float64)
            if mats.size and (mats.min() < -1e-9 or mats.max() > 1 + 1e-9):
                raise ValueError("coherence entries must lie in [0, 1]")
            d = np.diagonal(mats, axis1=1, axis2=2)
            if mats.size and np.max(np.abs(d - 1.0)) > 1e-9:
                raise ValueError("coherence diagonal must be 1")
            asym = np.max(np.abs(mats - mats.transpose(0, 2, 1))) if mats.size else 0.0
            if asym > _HERMITIAN_TOL:
                raise ValueError(f"coherence matrices asymmetric by {asym:g}")
        else:
            mats = mats.astype(np.complex128)
            herm = np.max(np.abs(mats - mats.conj().transpose(0, 2, 1))) if mats.size else 0.0
            if herm > _HERMITIAN_TOL:
                raise ValueError(f"matrices deviate from Hermitian by {herm:g}")
        mats = mats.copy()
        mats.flags.writeable = False
        freqs = freqs.copy()
        freqs.flags.writeable = False
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "mats", mats)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n_channels(self) -> int:
        return self.mats.shape[1]

    @property
    def n_freqs(self) -> int:
        return self.mats.shape[0]


@dataclass(frozen=True)
class SmoothingKernel:
    """Symmetric nonnegative weights over lags ``-m..m`` summing to one."""

    weights: np.ndarray
    family: str
    span: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if self.span < 1:
            raise ValueError("span must be >= 1 (a point mass does no smoothing)")
        if w.shape != (2 * self.span + 1,):
            raise ValueError("weights must have length 2*span + 1")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        if np.max(np.abs(w - w[::-1])) > 1e-12:
            raise ValueError("weights must be symmetric")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def center_weight(self) -> float:
        return float(self.weights[self.span])


def daniell_kernel(m: int) -> SmoothingKernel:
    """Uniform weights ``1/(2m+1)`` over lags ``-m..m``."""
    if m < 1:
        raise ValueError("span must be >= 1")
    return SmoothingKernel(np.full(2 * m + 1, 1.0 / (2 * m + 1)), "daniell", m)


def fejer_kernel(m: int) -> SmoothingKernel:
    """Triangular-squared weights ``(1 - |k|/(m+1))^2``, normalized to sum 1.

    This is the squared-triangle reading of the classic nonnegative taper;
    its peak sits at lag zero and it decays to zero at ``|k| = m + 1``.
    """
    if m < 1:
        raise ValueError("span must be >= 1")
    k = np.arange(-m, m + 1)
    w = (1.0 - np.abs(k) / (m + 1)) ** 2
    return SmoothingKernel(w / w.sum(), "fejer", m)


def make_kernel(family: str, m: int) -> SmoothingKernel:
    if family == "daniell":
        return daniell_kernel(m)
    if family == "fejer":
        return fejer_kernel(m)
    raise ValueError(f"unknown kernel family {family!r}")


def periodogram_matrix(ts: TimeSeriesSet) -> SpectralField:
    """Raw periodogram matrices ``(1/T) d(w_j) d(w_j)*`` at ``w_j = j/T``.

    Channels are mean-centered before the transform, so the DC bin carries
    nothing and is excluded. For even ``T`` the last bin is the Nyquist
    frequency. Diagonals are real and nonnegative by construction.
    """
    x = ts.data - ts.data.mean(axis=1, keepdims=True)
    t = ts.n_samples
    j_max = t // 2
    d = np.fft.rfft(x, axis=1)[:, 1:j_max + 1]  # (N, J)
    mats = d.T[:, :, None] * d.conj().T[:, None, :] / t  # (J, N, N)
    # enforce exact Hermitian symmetry against rounding in the outer product
    mats = 0.5 * (mats + mats.conj().transpose(0, 2, 1))
    freqs = np.arange(1, j_max + 1) * (ts.fs / t)
    return SpectralField(freqs, mats, RAW, ts.fs, ts.labels)


def smooth(pg: SpectralField, kernel: SmoothingKernel) -> SpectralField:
    """Kernel-weighted average of neighbouring periodogram matrices.

    Frequency indices reflect at the edges next to DC and the Nyquist bin,
    which keeps the total weight at one instead of shrinking edge estimates
    toward zero. A nonnegative kernel keeps the result positive semidefinite.
    """
    if pg.kind != RAW:
        raise ValueError(f"smooth expects a {RAW} field, got {pg.kind}")
    if 2 * kernel.span + 1 > pg.n_freqs:
        raise ValueError(
            f"span {kernel.span} too large for {pg.n_freqs} Fourier frequencies"
        )
    w = np.asarray(kernel.weights)
    sm_re = convolve1d(pg.mats.real, w, axis=0, mode="reflect")
    sm_im = convolve1d(pg.mats.imag, w, axis=0, mode="reflect")
    return SpectralField(pg.freqs, sm_re + 1j * sm_im, SMOOTHED, pg.fs, pg.labels)


def auto_spectra(field: SpectralField) -> np.ndarray:
    """Real ``(J, N)`` array of the per-channel (auto-)spectral diagonals."""
    return np.ascontiguousarray(np.diagonal(field.mats, axis1=1, axis2=2).real)


def gcv_score(pg: SpectralField, kernel: SmoothingKernel) -> float:
    """Gamma-deviance generalized cross-validation score for one span.

    The fit term sums ``r - log r - 1`` with ``r`` the ratio of each raw
    periodogram ordinate to its smoothed value (both floored at 1e-300);
    the penalty divides by ``J * N * (1 - W(0))^2`` where ``W(0)`` is the
    kernel's center weight.
    """
    diag = auto_spectra(pg)
    fhat = convolve1d(diag, np.asarray(kernel.weights), axis=0, mode="reflect")
    r = np.maximum(diag, _FLOOR) / np.maximum(fhat, _FLOOR)
    dev = float(np.sum(r - np.log(r) - 1.0))
    j, n = diag.shape
    return dev / (j * n * (1.0 - kernel.center_weight) ** 2)


def select_span_gcv(pg: SpectralField, candidates, family: str = "fejer") -> int:
    """Pick the smoothing span minimizing the GCV score; ties go to the smaller span."""
    spans = sorted(set(int(m) for m in candidates))
    if not spans:
        raise ValueError("no candidate spans")
    for m in spans:
        if 2 * m + 1 > pg.n_freqs:
            raise ValueError(f"candidate span {m} too large for {pg.n_freqs} frequencies")
    best_m, best_score = spans[0], None
    for m in spans:
        score = gcv_score(pg, make_kernel(family, m))
        if best_score is None or score < best_score:
            best_m, best_score = m, score
    return best_m


def default_span_candidates(n_freqs: int) -> list[int]:
    """The standard candidate grid {1, 2, 4, 8, 16, 32} restricted to legal spans."""
    return [m for m in (1, 2, 4, 8, 16, 32) if 2 * m + 1 <= n_freqs]


def coherence_field(spec: SpectralField) -> SpectralField:
    """Squared coherence ``|f_kl|^2 / (f_kk f_ll)`` per frequency.

    Entries are clamped to [0, 1] against rounding and the diagonal is set
    to exactly one. Requires strictly positive auto-spectra everywhere.
    """
    if spec.kind != SMOOTHED:
        raise ValueError(f"coherence_field expects a {SMOOTHED} field, got {spec.kind}")
    diag = np.diagonal(spec.mats, axis1=1, axis2=2).real  # (J, N)
    bad = np.argwhere(diag <= 0.0)
    if bad.size:
        j, k = bad[0]
        label = spec.labels[k] if spec.labels else str(k)
        raise ValueError(
            f"channel {label!r} has non-positive auto-spectrum at {spec.freqs[j]:g} Hz"
        )
    cross = np.abs(spec.mats) ** 2
    coh = cross / (diag[:, :, None] * diag[:, None, :])
    coh = np.clip(coh, 0.0, 1.0)
    idx = np.arange(coh.shape[1])
    coh[:, idx, idx] = 1.0
    coh = 0.5 * (coh + coh.transpose(0, 2, 1))
    return SpectralField(spec.freqs, coh, COHERENCE, spec.fs, spec.labels)


def integrate_band(field: SpectralField, band: FrequencyBand) -> np.ndarray:
    """Mean of the coherence matrices over the Fourier frequencies in ``[lo, hi)``."""
    if field.kind != COHERENCE:
        raise ValueError(f"integrate_band expects a {COHERENCE} field, got {field.kind}")
    band.validate_for(field.fs)
    mask = band.mask(field.freqs)
    if not mask.any():
        raise ValueError(f"band {band} contains no Fourier frequencies")
    out = field.mats[mask].mean(axis=0)
    out = np.clip(0.5 * (out + out.T), 0.0, 1.0)
    np.fill_diagonal(out, 1.0)
    return out


def smoothed_spectrum(ts: TimeSeriesSet, span: int | None = None,
                      family: str = "fejer", candidates=None) -> tuple[SpectralField, int]:
    """Convenience pipeline: periodogram then smoothing with a given or GCV span."""
    pg = periodogram_matrix(ts)
    if span is None:
        grid = candidates if candidates is not None else default_span_candidates(pg.n_freqs)
        span = select_span_gcv(pg, grid, family=family)
    return smooth(pg, make_kernel(family, span)), span


def field_to_json(field: SpectralField) -> str:
    """JSON text: frequencies plus row-major matrices, complex as [re, im] pairs."""
    mats = field.mats.astype(np.complex128)
    payload = {
        "kind": field.kind,
        "fs": field.fs,
        "labels": list(field.labels),
        "freqs": [float(f) for f in field.freqs],
        "mats": [
            [[[float(v.real), float(v.imag)] for v in row] for row in m]
            for m in mats
        ],
    }
    return json.dumps(payload, indent=2)


def field_from_json(text: str) -> SpectralField:
    payload = json.loads(text)
    raw = np.asarray(payload["mats"], dtype=np.float64)
    mats = raw[..., 0] + 1j * raw[..., 1]
    return SpectralField(
        np.asarray(payload["freqs"]), mats, payload["kind"],
        float(payload["fs"]), tuple(payload["labels"]),
    )


def save_field_npz(field: SpectralField, path) -> None:
    np.savez_compressed(
        path,
        freqs=field.freqs,
        mats=field.mats,
        kind=np.asarray(field.kind),
        fs=np.asarray(field.fs),
        labels=np.asarray(field.labels),
    )


def load_field_npz(path) -> SpectralField:
    with np.load(path, allow_pickle=False) as z:
        return SpectralField(
            z["freqs"], z["mats"], str(z["kind"]),
            float(z["fs"]), tuple(str(l) for l in z["labels"]),
        )
