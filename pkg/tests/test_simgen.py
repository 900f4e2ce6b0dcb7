import math

import numpy as np
import pytest

from cohclust.core import Partition, standard_1020_layout
from cohclust.simgen import (
    AR2Spec,
    ArtifactSpec,
    ExperimentSpec,
    MixtureSpec,
    ar2_coefficients,
    artifact_pair,
    derive_seed,
    experiment,
    eyeblink_series,
    illustration_mixture,
    simulate_mixture,
    spatial_mixing,
)

from oracles import ar2_spectrum


def test_ar2_coefficients_2hz():
    phi1, phi2 = ar2_coefficients(AR2Spec(2.0, 0.95), fs=100.0)
    assert phi1 == pytest.approx(1.8850179325, abs=1e-9)
    assert phi2 == pytest.approx(-0.9025, abs=1e-15)


def test_ar2_quarter_rate_peak():
    phi1, phi2 = ar2_coefficients(AR2Spec(25.0, 0.7), fs=100.0)
    assert phi1 == pytest.approx(0.0, abs=1e-15)
    assert phi2 == pytest.approx(-0.49)


def test_ar2_sharp_peak_location():
    phi1, phi2 = ar2_coefficients(AR2Spec(10.0, 0.99), fs=100.0)
    grid = np.linspace(0.001, 0.499, 20000)
    spec = ar2_spectrum(phi1, phi2, 1.0, grid)
    peak_hz = grid[np.argmax(spec)] * 100.0
    assert abs(peak_hz - 10.0) <= 0.1


def test_ar2_rejects_nyquist_peak():
    with pytest.raises(ValueError):
        ar2_coefficients(AR2Spec(50.0, 0.9), fs=100.0)


def test_ar2_causality_region():
    for peak in (2.0, 6.0, 10.0, 15.0, 40.0):
        for r in (0.9, 0.95, 0.98):
            phi1, phi2 = ar2_coefficients(AR2Spec(peak, r), fs=100.0)
            assert abs(phi2) < 1.0
            assert phi2 + phi1 < 1.0
            assert phi2 - phi1 < 1.0


def test_mixture_identity_no_noise_returns_latents():
    spec = MixtureSpec((AR2Spec(5.0), AR2Spec(9.0)), np.eye(2), 0.0, 500, 100.0, 3)
    ts = simulate_mixture(spec)
    direct = simulate_mixture(spec)
    np.testing.assert_array_equal(ts.data, direct.data)
    assert ts.n_channels == 2 and ts.n_samples == 500


def test_mixture_shared_latent_structure():
    mixing = np.array([[1.0, 0.0], [1.0, 0.0], [0.2, 0.0],
                       [0.0, 1.0], [0.0, 1.0], [0.0, 0.2]])
    spec = MixtureSpec((AR2Spec(2.0), AR2Spec(2.0)), mixing, 0.0, 800, 100.0, 4)
    ts = simulate_mixture(spec)
    # channels 1, 2 differ only by scale of the shared latent
    np.testing.assert_allclose(ts.data[0], ts.data[1])
    np.testing.assert_allclose(ts.data[0] * 0.2, ts.data[2], atol=1e-12)
    corr = np.corrcoef(ts.data[0], ts.data[3])[0, 1]
    assert abs(corr) < 0.2  # independent latents


def test_seed_determinism_bitwise():
    for name in ("exp1", "exp2-case2", "exp4"):
        a, _, _ = experiment(name, seed=123)
        b, _, _ = experiment(name, seed=123)
        np.testing.assert_array_equal(a.data, b.data)
        c, _, _ = experiment(name, seed=124)
        assert not np.array_equal(a.data, c.data)


def test_latent_streams_independent():
    spec = MixtureSpec((AR2Spec(5.0), AR2Spec(5.0)), np.eye(2), 0.0, 100000, 100.0, 9)
    ts = simulate_mixture(spec)
    rho = np.corrcoef(ts.data)[0, 1]
    assert abs(rho) < 0.05


def test_derive_seed_splitter():
    seeds = {derive_seed(7, i) for i in range(100)}
    assert len(seeds) == 100
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert derive_seed(7, 3) != derive_seed(8, 3)


def test_spatial_mixing_values():
    layout = standard_1020_layout()
    a = spatial_mixing(layout, ["C3", "C4"], kappa=1.0 / 3.0)
    names = list(layout.names)
    assert a[names.index("C3"), 0] == pytest.approx(1.0)
    d = layout.distance("T3", "C3")
    assert a[names.index("T3"), 0] == pytest.approx(math.exp(-3.0 * d))


def test_spatial_mixing_kappa_distance_relation():
    layout = standard_1020_layout()
    kappa = layout.distance("T3", "C3")  # make the decay hit exactly e^-1
    a = spatial_mixing(layout, ["C3"], kappa=kappa)
    assert a[list(layout.names).index("T3"), 0] == pytest.approx(math.exp(-1.0))


def test_spatial_mixing_unknown_source():
    with pytest.raises(ValueError):
        spatial_mixing(standard_1020_layout(), ["XX"], kappa=0.5)


def test_exp4_nearest_channels_load_most():
    layout = standard_1020_layout()
    a = spatial_mixing(layout, ["C3", "C4", "Pz", "Fz"], 1.0 / 3.0)
    names = list(layout.names)
    # channels nearest C3 put their largest coefficient on that latent
    for ch in ("T3", "F7", "T5"):
        row = a[names.index(ch)]
        assert np.argmax(row) == 0


def test_eyeblink_zero_amplitude():
    spec = ArtifactSpec((1.0,), amplitude=0.0)
    series = eyeblink_series(spec, 500, 100.0, seed=0)
    np.testing.assert_array_equal(series, np.zeros(500))


def test_eyeblink_integrates_to_amplitude_times_weight():
    # densities integrate to one; the 1-second evaluation window truncates
    # ~0.1% of the subtracted bump's tail
    spec = ArtifactSpec((2.0,), amplitude=5.0, noise_sd=0.0)
    series = eyeblink_series(spec, 1000, 100.0, seed=0)
    integral = series.sum() / 100.0
    assert integral == pytest.approx(5.0 * (1 - spec.weight), rel=5e-3)


def test_eyeblink_support_is_sub_second():
    spec = ArtifactSpec((3.0,), amplitude=1.0)
    series = eyeblink_series(spec, 1000, 100.0, seed=0)
    assert np.all(series[:300] == 0.0)
    assert np.any(series[300:400] != 0.0)
    assert np.all(series[401:] == 0.0)


def test_eyeblink_onset_outside_recording():
    with pytest.raises(ValueError, match="outside"):
        eyeblink_series(ArtifactSpec((11.0,)), 1000, 100.0, seed=0)


def test_eyeblink_adds_low_frequency_power():
    from cohclust.spectral import auto_spectra, smoothed_spectrum

    clean, contaminated, _ = artifact_pair(seed=5)
    i = clean.labels.index("Fp1")
    sp_clean, _ = smoothed_spectrum(clean, span=8)
    sp_cont, _ = smoothed_spectrum(contaminated, span=8)
    low = sp_clean.freqs < 4.0
    clean_low = auto_spectra(sp_clean)[low, i].sum()
    cont_low = auto_spectra(sp_cont)[low, i].sum()
    assert cont_low > 2.0 * clean_low


def test_artifact_pair_clean_channels_untouched():
    clean, contaminated, _ = artifact_pair(seed=6)
    for ch in ("C3", "Pz", "O1"):
        i = clean.labels.index(ch)
        np.testing.assert_array_equal(clean.data[i], contaminated.data[i])
    for ch in ("Fp1", "Fp2", "F7", "F8"):
        i = clean.labels.index(ch)
        assert not np.array_equal(clean.data[i], contaminated.data[i])


def test_experiment_exp1_design():
    ts, ref, band = experiment("exp1", seed=0)
    assert ts.n_channels == 6 and ts.n_samples == 1000 and ts.fs == 100.0
    assert ref.groups() == [[0, 1, 2], [3, 4, 5]]
    assert (band.lo, band.hi) == (0.0, 50.0)


def test_experiment_exp3_design():
    ts, ref, band = experiment("exp3", seed=0)
    assert ts.n_channels == 128
    groups = ref.groups()
    assert groups[0] == list(range(0, 25))
    assert groups[1] == list(range(25, 50))
    assert groups[2] == list(range(50, 75))
    assert groups[3] == list(range(75, 100))
    assert groups[4] == list(range(100, 128))


def test_experiment_exp4_design():
    ts, ref, band = experiment("exp4", seed=0)
    assert ts.n_channels == 19
    assert ts.layout is not None
    assert band.name == "alpha"
    names = ts.labels
    groups = [[names[i] for i in g] for g in ref.groups()]
    assert ["Cz"] in groups  # vertex is equidistant from all four sources
    assert sorted(len(g) for g in groups) == [1, 4, 4, 5, 5]


def test_experiment_unknown_name():
    with pytest.raises(ValueError):
        experiment("exp9", seed=0)


def test_experiment_spec_serialization():
    spec = ExperimentSpec("exp1", seed=5, replicates=3, params={"modulus": 0.9})
    back = ExperimentSpec.from_json(spec.to_json())
    assert back == spec
    toml_text = 'experiment = "exp2-case1"\nseed = 7\nreplicates = 2\n'
    fromt = ExperimentSpec.from_toml(toml_text)
    assert fromt.name == "exp2-case1" and fromt.seed == 7


def test_illustration_mixture_shape():
    ts = illustration_mixture(seed=1)
    assert ts.n_channels == 3 and ts.n_samples == 1000
