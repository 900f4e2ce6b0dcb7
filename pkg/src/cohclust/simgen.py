"""Seeded generators for the simulation designs used throughout the tests
and experiments: second-order autoregressive latents mixed into channels,
spatially decaying mixtures on a scalp layout, and eye-blink artifacts.

Reproducibility: every generator is a pure function of its seed. Distinct
latents and the channel noise draw from independent substreams spawned
from one ``numpy.random.SeedSequence``; replicate seeds derive from
``SeedSequence((base_seed, replicate_index))`` (see ``derive_seed``).
"""

import json
import math
from dataclasses import dataclass, field, replace

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np
from scipy.signal import lfilter
from scipy.stats import gamma as gamma_dist

from .core import (
    ChannelLayout,
    FrequencyBand,
    Partition,
    TimeSeriesSet,
    band_by_name,
    standard_1020_layout,
)

__all__ = [
    "AR2Spec",
    "MixtureSpec",
    "ArtifactSpec",
    "ExperimentSpec",
    "ar2_coefficients",
    "simulate_mixture",
    "spatial_mixing",
    "eyeblink_series",
    "experiment",
    "artifact_pair",
    "illustration_mixture",
    "derive_seed",
    "EXPERIMENT_NAMES",
]

BURN_IN = 500  # samples discarded before recording starts

EXPERIMENT_NAMES = ("exp1", "exp2-case1", "exp2-case2", "exp3", "exp4", "artifact")


@dataclass(frozen=True)
class AR2Spec:
    """An AR(2) latent with a unimodal spectral peak.

    ``modulus`` is the shared modulus of the complex root pair; closer to
    one gives a sharper peak.
    """

    peak_hz: float
    modulus: float = 0.95
    innovation_sd: float = 1.0

    def __post_init__(self):
        if not 0 < self.modulus < 1:
            raise ValueError("root modulus must lie in (0, 1)")
        if self.peak_hz <= 0:
            raise ValueError("peak frequency must be positive")
        if self.innovation_sd < 0:
            raise ValueError("innovation sd must be nonnegative")


@dataclass(frozen=True)
class MixtureSpec:
    """Linear mixture of AR(2) latents plus white channel noise."""

    latents: tuple[AR2Spec, ...]
    mixing: np.ndarray            # (N, L)
    noise_sd: float
    length: int
    fs: float
    seed: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        a = np.asarray(self.mixing, dtype=np.float64)
        if a.ndim != 2 or a.shape[1] != len(self.latents):
            raise ValueError("mixing matrix must be (channels x latents)")
        if self.length < 2:
            raise ValueError("need at least 2 samples")
        if self.labels is not None and len(self.labels) != a.shape[0]:
            raise ValueError("one label per channel required")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "mixing", a)
        object.__setattr__(self, "latents", tuple(self.latents))


@dataclass(frozen=True)
class ArtifactSpec:
    """Eye-blink contamination: a difference of two gamma densities per onset.

    The blink shape is ``amplitude * (pdf(t; g1) - weight * pdf(t; g2))``
    evaluated over one second after each onset, plus optional white noise.
    """

    blink_times: tuple[float, ...]
    gamma1: tuple[float, float] = (6.0, 0.04)   # (shape, scale seconds)
    gamma2: tuple[float, float] = (10.0, 0.045)
    weight: float = 0.6
    amplitude: float = 1.0
    target_channels: tuple[str, ...] = ()
    noise_sd: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(t) and t >= 0 for t in self.blink_times):
            raise ValueError("blink onsets must be finite and nonnegative")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        object.__setattr__(self, "blink_times", tuple(float(t) for t in self.blink_times))
        object.__setattr__(self, "target_channels", tuple(self.target_channels))


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of a simulation run: design name, seeding,
    replicate count, and keyword overrides for the generator."""

    name: str
    seed: int = 0
    replicates: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in EXPERIMENT_NAMES:
            raise ValueError(f"unknown experiment {self.name!r}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")

    def to_json(self) -> str:
        return json.dumps(
            {"experiment": self.name, "seed": self.seed,
             "replicates": self.replicates, "params": self.params},
            indent=2,
        )

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentSpec":
        name = payload.get("experiment") or payload.get("name")
        if name is None:
            raise ValueError("experiment spec needs an 'experiment' key")
        return cls(
            name=str(name),
            seed=int(payload.get("seed", 0)),
            replicates=int(payload.get("replicates", 1)),
            params=dict(payload.get("params", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_toml(cls, text: str) -> "ExperimentSpec":
        return cls.from_dict(tomllib.loads(text))

    def replicate(self, index: int) -> "ExperimentSpec":
        return replace(self, seed=derive_seed(self.seed, index), replicates=1)


def derive_seed(base_seed: int, index: int) -> int:
    """Replicate-seed splitter: a 64-bit draw from SeedSequence((base, index))."""
    ss = np.random.SeedSequence((int(base_seed), int(index)))
    return int(ss.generate_state(1, np.uint64)[0])


def ar2_coefficients(spec: AR2Spec, fs: float) -> tuple[float, float]:
    """Coefficients placing the AR(2) root pair at the requested frequency:
    ``phi1 = 2 r cos(2 pi peak / fs)``, ``phi2 = -r^2``.

    The spectral mode sits essentially at ``peak_hz`` for moduli close to
    one; for broader peaks it shifts slightly toward zero frequency.
    """
    if spec.peak_hz >= fs / 2:
        raise ValueError(
            f"peak {spec.peak_hz} Hz is at or above the Nyquist frequency {fs / 2}"
        )
    phi1 = 2.0 * spec.modulus * math.cos(2.0 * math.pi * spec.peak_hz / fs)
    phi2 = -spec.modulus**2
    return phi1, phi2


def _simulate_ar2(spec: AR2Spec, fs: float, length: int,
                  rng: np.random.Generator) -> np.ndarray:
    phi1, phi2 = ar2_coefficients(spec, fs)
    innov = rng.normal(0.0, spec.innovation_sd, size=length + BURN_IN)
    series = lfilter([1.0], [1.0, -phi1, -phi2], innov)
    return series[BURN_IN:]


def simulate_mixture(spec: MixtureSpec, layout: ChannelLayout | None = None) -> TimeSeriesSet:
    """Mix independent AR(2) latents by the coefficient matrix and add
    white channel noise. Fully determined by ``spec.seed``."""
    n, l = spec.mixing.shape
    streams = np.random.SeedSequence(spec.seed).spawn(l + 1)
    z = np.empty((l, spec.length))
    for i, lat in enumerate(spec.latents):
        z[i] = _simulate_ar2(lat, spec.fs, spec.length, np.random.default_rng(streams[i]))
    x = spec.mixing @ z
    if spec.noise_sd > 0:
        x = x + np.random.default_rng(streams[l]).normal(
            0.0, spec.noise_sd, size=(n, spec.length))
    labels = spec.labels or tuple(f"ch{i + 1}" for i in range(n))
    return TimeSeriesSet(x, spec.fs, labels, layout)


def spatial_mixing(layout: ChannelLayout, sources, kappa: float = 1.0 / 3.0,
                   channel_order=None) -> np.ndarray:
    """Distance-decay coefficients ``exp(-||s - s_i|| / kappa)`` between every
    channel in the layout and each named source channel."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    sources = list(sources)
    for s in sources:
        if s not in layout:
            raise ValueError(f"unknown source channel {s!r}")
    names = list(channel_order) if channel_order is not None else list(layout.names)
    layout.assert_matches(tuple(names))
    a = np.empty((len(names), len(sources)))
    for i, ch in enumerate(names):
        for j, src in enumerate(sources):
            a[i, j] = math.exp(-layout.distance(ch, src) / kappa)
    return a


def eyeblink_series(spec: ArtifactSpec, length: int, fs: float, seed: int) -> np.ndarray:
    """Single-channel blink train: each onset contributes the gamma-difference
    bump over the following second, plus optional white noise."""
    duration = length / fs
    for onset in spec.blink_times:
        if onset >= duration:
            raise ValueError(f"blink onset {onset}s outside the {duration}s recording")
    out = np.zeros(length)
    t = np.arange(length) / fs
    k1, th1 = spec.gamma1
    k2, th2 = spec.gamma2
    for onset in spec.blink_times:
        tau = t - onset
        window = (tau >= 0) & (tau < 1.0)
        shape = (gamma_dist.pdf(tau[window], a=k1, scale=th1)
                 - spec.weight * gamma_dist.pdf(tau[window], a=k2, scale=th2))
        out[window] += spec.amplitude * shape
    if spec.noise_sd > 0:
        rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0xB111)))
        out = out + rng.normal(0.0, spec.noise_sd, size=length)
    return out


def _reference_by_loading(a: np.ndarray) -> Partition:
    """Ground-truth grouping by dominant mixing coefficient per channel."""
    dominant = np.argmax(np.abs(a), axis=1)
    ids = {lat: cid for cid, lat in enumerate(dict.fromkeys(dominant.tolist()))}
    return Partition(tuple(ids[l] for l in dominant.tolist()), len(ids))


def _nearest_source_reference(layout: ChannelLayout, sources, labels) -> Partition:
    """Group channels by their unique nearest source; channels equidistant to
    several sources (the vertex in the spatial designs) become singletons."""
    groups: dict[object, list[int]] = {}
    for i, ch in enumerate(labels):
        dists = [layout.distance(ch, s) for s in sources]
        dmin = min(dists)
        winners = [s for s, d in zip(sources, dists) if d <= dmin + 1e-12]
        key = winners[0] if len(winners) == 1 else ("tie", ch)
        groups.setdefault(key, []).append(i)
    return Partition.from_groups(groups.values(), len(labels))


_TEN_TWENTY_ORDER = tuple(standard_1020_layout().names)


def _spatial_design(source_peaks: dict[str, float], seed: int, length: int,
                    fs: float, modulus: float, kappa: float) -> tuple[TimeSeriesSet, Partition]:
    layout = standard_1020_layout()
    sources = list(source_peaks)
    a = spatial_mixing(layout, sources, kappa, channel_order=_TEN_TWENTY_ORDER)
    spec = MixtureSpec(
        latents=tuple(AR2Spec(source_peaks[s], modulus) for s in sources),
        mixing=a,
        noise_sd=0.0,
        length=length,
        fs=fs,
        seed=seed,
        labels=_TEN_TWENTY_ORDER,
    )
    ts = simulate_mixture(spec, layout=layout)
    return ts, _nearest_source_reference(layout, sources, _TEN_TWENTY_ORDER)


_EXP2_CASE1 = np.array([
    [1.0, 0.0], [1.0, 0.0], [0.2, 0.0],
    [0.0, 1.0], [0.0, 1.0], [0.0, 0.2],
])
_EXP2_CASE2 = np.array([
    [1.0, 0.0], [0.8, 0.2], [0.4, 0.1],
    [0.0, 1.0], [0.2, 0.8], [0.3, 0.2],
])


def _exp3_mixing() -> np.ndarray:
    rows = ([(1, 0.2, 0, 0, 0)] * 25 + [(0, 1, 0, 0, 0)] * 25
            + [(0, 0.2, 1, 0, 0)] * 25 + [(0, 0, 0, 1, 0)] * 25
            + [(0, 0, 0, 0, 1)] * 28)
    return np.asarray(rows, dtype=np.float64)


def experiment(name: str, seed: int, length: int = 1000, fs: float = 100.0,
               modulus: float = 0.95, noise_sd: float = 1.0,
               kappa: float = 1.0 / 3.0) -> tuple[TimeSeriesSet, Partition, FrequencyBand]:
    """Generate one replicate of a named design, together with its
    ground-truth grouping and analysis band."""
    if name == "exp1":
        mixing = np.array([[1.0, 0.0]] * 3 + [[0.0, 1.0]] * 3)
        spec = MixtureSpec((AR2Spec(2.0, modulus), AR2Spec(2.0, modulus)),
                           mixing, noise_sd, length, fs, seed)
        return simulate_mixture(spec), _reference_by_loading(mixing), FrequencyBand(0.0, fs / 2, "full")
    if name in ("exp2-case1", "exp2-case2"):
        mixing = _EXP2_CASE1 if name.endswith("case1") else _EXP2_CASE2
        spec = MixtureSpec((AR2Spec(2.0, modulus), AR2Spec(2.0, modulus)),
                           mixing, noise_sd, length, fs, seed)
        return simulate_mixture(spec), _reference_by_loading(mixing), band_by_name("delta")
    if name == "exp3":
        # the inter-group bridge (the 0.2 loadings on the 6 Hz latent) lives
        # in theta, which is where the merge-order comparison is informative
        mixing = _exp3_mixing()
        latents = tuple(AR2Spec(pk, modulus) for pk in (2.0, 6.0, 10.0, 15.0, 40.0))
        spec = MixtureSpec(latents, mixing, noise_sd, length, fs, seed)
        return simulate_mixture(spec), _reference_by_loading(mixing), band_by_name("theta")
    if name == "exp4":
        ts, ref = _spatial_design(
            {"C3": 9.0, "C4": 9.0, "Pz": 10.0, "Fz": 10.0},
            seed, length, fs, modulus, kappa)
        return ts, ref, band_by_name("alpha")
    if name == "artifact":
        _, contaminated, ref = artifact_pair(seed, length=length, fs=fs,
                                             modulus=modulus, kappa=kappa)
        return contaminated, ref, band_by_name("alpha")
    raise ValueError(f"unknown experiment {name!r}")


ARTIFACT_CHANNELS = ("Fp1", "Fp2", "F7", "F8")


def artifact_pair(seed: int, length: int = 1000, fs: float = 100.0,
                  modulus: float = 0.95, kappa: float = 1.0 / 3.0,
                  n_blinks: int = 4, amplitude_scale: float = 10.0,
                  ) -> tuple[TimeSeriesSet, TimeSeriesSet, Partition]:
    """Matched clean/contaminated pair for the eye-blink study.

    The clean recording mixes frontal 5 Hz latents (at Fp1/Fp2) with the
    usual central/parietal sources; the contaminated copy adds the same
    blink train to the frontal channels, scaled to ten channel standard
    deviations. Blink onsets are uniformly spaced over the recording.
    """
    clean, ref = _spatial_design(
        {"C3": 9.0, "C4": 9.0, "Pz": 10.0, "Fp1": 5.0, "Fp2": 5.0},
        seed, length, fs, modulus, kappa)
    duration = length / fs
    onsets = tuple((i + 0.5) * duration / n_blinks for i in range(n_blinks))
    data = np.array(clean.data)
    for ch in ARTIFACT_CHANNELS:
        i = clean.labels.index(ch)
        amp = amplitude_scale * float(np.std(data[i]))
        spec = ArtifactSpec(onsets, amplitude=amp, target_channels=(ch,),
                            noise_sd=0.05 * amp)
        data[i] = data[i] + eyeblink_series(spec, length, fs, derive_seed(seed, 1000 + i))
    contaminated = TimeSeriesSet(data, fs, clean.labels, clean.layout)
    return clean, contaminated, ref


def illustration_mixture(seed: int, length: int = 1000, fs: float = 100.0,
                         modulus: float = 0.95, noise_sd: float = 1.0) -> TimeSeriesSet:
    """Three-channel motivating mixture: two channels share a delta-band
    latent strongly; the third leans on a theta-band latent both share
    weakly, plus its own alpha-band latent."""
    mixing = np.array([
        [1.0, 0.2, 0.0],
        [1.0, 0.6, 0.0],
        [0.3, 0.7, 0.3],
    ])
    spec = MixtureSpec(
        (AR2Spec(3.0, modulus), AR2Spec(5.0, modulus), AR2Spec(9.0, modulus)),
        mixing, noise_sd, length, fs, seed)
    return simulate_mixture(spec)
