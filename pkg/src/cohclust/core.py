"""Shared domain types: labeled multichannel recordings, frequency bands,
scalp layouts, and cluster partitions.

All types here are immutable after construction and safe to share between
threads. CSV ingestion follows a plain convention: one column per channel,
a header row of channel labels, and an optional leading ``t`` column of
sample times (used to infer the sampling rate).
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DataError",
    "TimeSeriesSet",
    "FrequencyBand",
    "ChannelLayout",
    "Partition",
    "standard_bands",
    "band_by_name",
    "standard_1020_layout",
    "read_timeseries_csv",
    "write_timeseries_csv",
    "read_layout_csv",
    "write_layout_csv",
]


class DataError(ValueError):
    """Malformed input data (CSV parse failures carry a 1-based line number)."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ChannelLayout:
    """2D scalp positions, one ``(x, y)`` pair per channel name.

    Positions live in the unit disk: the vertex projects to the origin and
    the outermost electrode ring to the unit circle.
    """

    positions: dict[str, tuple[float, float]]

    def __post_init__(self):
        pos = {str(k): (float(x), float(y)) for k, (x, y) in self.positions.items()}
        for name, (x, y) in pos.items():
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError(f"non-finite position for channel {name!r}")
            if math.hypot(x, y) > 1.0 + 1e-9:
                raise ValueError(f"channel {name!r} lies outside the unit disk")
        object.__setattr__(self, "positions", pos)

    def __contains__(self, name: str) -> bool:
        return name in self.positions

    def __getitem__(self, name: str) -> tuple[float, float]:
        return self.positions[name]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.positions)

    def distance(self, a: str, b: str) -> float:
        xa, ya = self.positions[a]
        xb, yb = self.positions[b]
        return math.hypot(xa - xb, ya - yb)

    def assert_matches(self, labels: tuple[str, ...]) -> None:
        missing = [l for l in labels if l not in self.positions]
        if missing:
            raise ValueError(f"layout is missing positions for channels {missing}")


@dataclass(frozen=True)
class TimeSeriesSet:
    """N-channel recording: an ``(N, T)`` array of real samples at rate ``fs``."""

    data: np.ndarray
    fs: float
    labels: tuple[str, ...]
    layout: ChannelLayout | None = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError("data must be a 2D (channels x samples) array")
        n, t = data.shape
        if n < 1 or t < 2:
            raise ValueError(f"need at least 1 channel and 2 samples, got {n}x{t}")
        if not np.all(np.isfinite(data)):
            raise ValueError("data contains non-finite samples")
        if self.fs <= 0:
            raise ValueError("sampling rate must be positive")
        labels = tuple(str(l) for l in self.labels)
        if len(labels) != n:
            raise ValueError(f"{n} channels but {len(labels)} labels")
        if len(set(labels)) != n:
            raise ValueError("channel labels must be unique")
        if self.layout is not None:
            self.layout.assert_matches(labels)
        object.__setattr__(self, "data", _freeze(data))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "fs", float(self.fs))

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration(self) -> float:
        return self.n_samples / self.fs

    def channel(self, name: str) -> np.ndarray:
        return self.data[self.labels.index(name)]

    def segment(self, seconds: float, index: int) -> "TimeSeriesSet":
        """Extract the ``index``-th disjoint segment of the given length."""
        step = int(round(seconds * self.fs))
        if step < 2:
            raise ValueError("segment too short")
        n_seg = self.n_samples // step
        if not 0 <= index < n_seg:
            raise ValueError(f"segment index {index} out of range (0..{n_seg - 1})")
        sl = self.data[:, index * step:(index + 1) * step]
        return TimeSeriesSet(sl, self.fs, self.labels, self.layout)

    def n_segments(self, seconds: float) -> int:
        step = int(round(seconds * self.fs))
        return self.n_samples // step


@dataclass(frozen=True)
class FrequencyBand:
    """Half-open frequency interval ``[lo, hi)`` in Hz, optionally named."""

    lo: float
    hi: float
    name: str | None = None

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise ValueError(f"invalid band ({self.lo}, {self.hi})")

    def validate_for(self, fs: float) -> None:
        if self.hi > fs / 2 + 1e-9:
            raise ValueError(
                f"band ({self.lo}, {self.hi}) exceeds the Nyquist frequency {fs / 2}"
            )

    def mask(self, freqs: np.ndarray) -> np.ndarray:
        """Boolean selector for Fourier frequencies in [lo, hi)."""
        freqs = np.asarray(freqs)
        return (freqs >= self.lo) & (freqs < self.hi)

    def __str__(self) -> str:
        rng = f"{self.lo:g}-{self.hi:g} Hz"
        return f"{self.name} ({rng})" if self.name else rng


_STANDARD_BANDS = (
    FrequencyBand(0.0, 4.0, "delta"),
    FrequencyBand(4.0, 8.0, "theta"),
    FrequencyBand(8.0, 12.0, "alpha"),
    FrequencyBand(12.0, 30.0, "beta"),
    FrequencyBand(30.0, 50.0, "gamma"),
)


def standard_bands() -> list[FrequencyBand]:
    """The five conventional EEG bands: delta, theta, alpha, beta, gamma."""
    return list(_STANDARD_BANDS)


def band_by_name(name: str) -> FrequencyBand:
    for b in _STANDARD_BANDS:
        if b.name == name.lower():
            return b
    raise KeyError(f"unknown band name {name!r}")


# Equal-angle unit-disk projection of the 19 standard 10-20 positions.
# Vertex (Cz) at the origin; the 90-degree-inclination ring on the unit
# circle; intermediate electrodes at radius inclination/90 with azimuths
# from the spherical midpoints of their neighbouring arcs.
_TEN_TWENTY: dict[str, tuple[float, float]] = {
    "Fp1": (-0.30902, 0.95105),
    "Fp2": (0.30902, 0.95105),
    "F7": (-0.80902, 0.58778),
    "F3": (-0.38368, 0.61399),
    "Fz": (0.0, 0.5),
    "F4": (0.38368, 0.61399),
    "F8": (0.80902, 0.58778),
    "T3": (-1.0, 0.0),
    "C3": (-0.5, 0.0),
    "Cz": (0.0, 0.0),
    "C4": (0.5, 0.0),
    "T4": (1.0, 0.0),
    "T5": (-0.80902, -0.58778),
    "P3": (-0.38368, -0.61399),
    "Pz": (0.0, -0.5),
    "P4": (0.38368, -0.61399),
    "T6": (0.80902, -0.58778),
    "O1": (-0.30902, -0.95105),
    "O2": (0.30902, -0.95105),
}


def standard_1020_layout() -> ChannelLayout:
    """Unit-disk coordinates of the 19 scalp channels of the 10-20 system."""
    return ChannelLayout(dict(_TEN_TWENTY))


@dataclass(frozen=True)
class Partition:
    """Assignment of N channels to clusters labeled ``0..k-1``."""

    assignment: tuple[int, ...]
    k: int

    def __post_init__(self):
        assignment = tuple(int(c) for c in self.assignment)
        if len(assignment) == 0:
            raise ValueError("empty partition")
        used = set(assignment)
        if used != set(range(self.k)):
            raise ValueError(
                f"cluster ids must cover 0..{self.k - 1} exactly, got {sorted(used)}"
            )
        object.__setattr__(self, "assignment", assignment)

    @property
    def n(self) -> int:
        return len(self.assignment)

    @classmethod
    def from_groups(cls, groups, n: int | None = None) -> "Partition":
        groups = [sorted(g) for g in groups]
        size = n if n is not None else sum(len(g) for g in groups)
        assignment = [-1] * size
        for cid, g in enumerate(groups):
            for ch in g:
                assignment[ch] = cid
        if any(a < 0 for a in assignment):
            raise ValueError("groups do not cover all channels")
        return cls(tuple(assignment), len(groups))

    def groups(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for ch, cid in enumerate(self.assignment):
            out[cid].append(ch)
        return out

    def members(self, cid: int) -> list[int]:
        return [ch for ch, c in enumerate(self.assignment) if c == cid]

    def cluster_of(self, channel: int) -> int:
        return self.assignment[channel]

    def co_membership(self) -> np.ndarray:
        """Boolean N x N matrix: True where two channels share a cluster."""
        a = np.asarray(self.assignment)
        return a[:, None] == a[None, :]

    def relabeled(self, perm: dict[int, int]) -> "Partition":
        """Apply a cluster-id permutation; co-membership is unchanged."""
        return Partition(tuple(perm[c] for c in self.assignment), self.k)


def read_timeseries_csv(path, fs: float | None = None,
                        layout: ChannelLayout | None = None) -> TimeSeriesSet:
    """Load a recording from CSV (header of labels, optional ``t`` column).

    When a ``t`` column is present the sampling rate is inferred from it;
    otherwise ``fs`` must be given. Parse errors report 1-based line numbers.
    """
    with open(path, newline="") as fh:
        return parse_timeseries_csv(fh, fs=fs, layout=layout)


def parse_timeseries_csv(lines, fs: float | None = None,
                         layout: ChannelLayout | None = None) -> TimeSeriesSet:
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("line 1: empty CSV") from None
    header = [h.strip() for h in header]
    if not header or any(not h for h in header):
        raise DataError("line 1: blank column name in header")
    has_time = header[0].lower() == "t"
    labels = header[1:] if has_time else header
    if not labels:
        raise DataError("line 1: no channel columns")
    width = len(header)
    rows: list[list[float]] = []
    times: list[float] = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or (len(rec) == 1 and not rec[0].strip()):
            continue  # ignore trailing blank lines
        if len(rec) != width:
            raise DataError(f"line {lineno}: expected {width} fields, got {len(rec)}")
        try:
            vals = [float(v) for v in rec]
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        if has_time:
            times.append(vals[0])
            rows.append(vals[1:])
        else:
            rows.append(vals)
    if len(rows) < 2:
        raise DataError("need at least 2 samples")
    if has_time:
        dt = np.diff(times)
        if np.any(dt <= 0):
            raise DataError("t column must be strictly increasing")
        fs = 1.0 / float(np.median(dt))
    elif fs is None:
        raise DataError("no t column in CSV; a sampling rate is required")
    data = np.asarray(rows, dtype=np.float64).T
    if layout is None:
        try:
            std = standard_1020_layout()
            if all(l in std for l in labels):
                layout = std
        except ValueError:  # pragma: no cover - defensive
            layout = None
    return TimeSeriesSet(data, fs, tuple(labels), layout)


def write_timeseries_csv(ts: TimeSeriesSet, path, include_time: bool = False) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = (["t"] if include_time else []) + list(ts.labels)
        w.writerow(header)
        for i in range(ts.n_samples):
            row = [repr(float(v)) for v in ts.data[:, i]]
            if include_time:
                row = [repr(i / ts.fs)] + row
            w.writerow(row)


def read_layout_csv(path) -> ChannelLayout:
    """Load a layout from CSV rows ``name,x,y``."""
    positions: dict[str, tuple[float, float]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError("line 1: empty layout CSV")
        if [h.strip().lower() for h in header[:3]] != ["name", "x", "y"]:
            raise DataError("line 1: layout header must be name,x,y")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != 3:
                raise DataError(f"line {lineno}: expected 3 fields, got {len(rec)}")
            try:
                positions[rec[0].strip()] = (float(rec[1]), float(rec[2]))
            except ValueError as exc:
                raise DataError(f"line {lineno}: {exc}") from None
    return ChannelLayout(positions)


def write_layout_csv(layout: ChannelLayout, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "x", "y"])
        for name, (x, y) in layout.positions.items():
            w.writerow([name, repr(x), repr(y)])
