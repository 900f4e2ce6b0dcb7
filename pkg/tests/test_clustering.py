import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohclust.core import FrequencyBand, TimeSeriesSet
from cohclust.clustering import (
    MergeHistory,
    MergeStep,
    ScreeCurve,
    cut,
    first_coresidence_k,
    hcc,
    history_from_json,
    history_to_json,
    linkage_cluster,
    scree,
    spectral_baseline,
    suggest_k,
)
from cohclust.evaluation import agreement
from cohclust.simgen import AR2Spec, MixtureSpec, derive_seed, experiment, simulate_mixture
from cohclust.spectral import (
    SpectralField,
    coherence_field,
    integrate_band,
    smoothed_spectrum,
)

from oracles import random_coherence_matrix


def make_field(mats, fs=100.0):
    mats = np.asarray(mats, dtype=float)
    j = mats.shape[0]
    freqs = np.arange(1, j + 1) * (fs / (2.0 * j + 2.0))
    labels = tuple(f"c{i}" for i in range(mats.shape[1]))
    return SpectralField(freqs, mats, "coherence", fs, labels)


def block_diag_field(bins=16):
    m = np.eye(4)
    m[0, 1] = m[1, 0] = 0.9
    m[2, 3] = m[3, 2] = 0.8
    return make_field(np.tile(m, (bins, 1, 1)))


FULL = FrequencyBand(0.0, 50.0)


def test_two_channels_single_step():
    m = np.array([[1.0, 0.4], [0.4, 1.0]])
    field = make_field(np.tile(m, (8, 1, 1)))
    h = hcc(field, FULL)
    assert h.n_steps == 1
    assert h.steps[0].dissimilarity == pytest.approx(0.6, abs=1e-12)
    assert h.steps[0].merged == (0, 1)


def test_block_diagonal_final_merge_is_one():
    h = hcc(block_diag_field(), FULL)
    assert h.steps[-1].dissimilarity == pytest.approx(1.0, abs=1e-12)
    assert cut(h, 2).groups() == [[0, 1], [2, 3]]


def test_first_merge_equals_pairwise_band_mean():
    rng = np.random.default_rng(0)
    mats = np.stack([random_coherence_matrix(rng, 5) for _ in range(12)])
    field = make_field(mats)
    h = hcc(field, FULL)
    a, b = h.steps[0].merged
    expected = 1.0 - mats[:, a, b].mean()
    assert h.steps[0].dissimilarity == pytest.approx(expected, abs=1e-12)


def test_step_count_and_memberships():
    rng = np.random.default_rng(1)
    mats = np.stack([random_coherence_matrix(rng, 6) for _ in range(10)])
    h = hcc(make_field(mats), FULL)
    assert h.n_steps == 5
    for i, step in enumerate(h.steps, start=1):
        assert len(set(step.membership)) == 6 - i


def test_refinement_between_cuts():
    rng = np.random.default_rng(2)
    mats = np.stack([random_coherence_matrix(rng, 7) for _ in range(10)])
    h = hcc(make_field(mats), FULL)
    for k in range(7, 1, -1):
        fine = cut(h, k)
        coarse = cut(h, k - 1)
        # every fine cluster maps into exactly one coarse cluster
        for g in fine.groups():
            assert len({coarse.assignment[ch] for ch in g}) == 1


def test_determinism_and_thread_counts():
    rng = np.random.default_rng(3)
    mats = np.stack([random_coherence_matrix(rng, 8) for _ in range(20)])
    field = make_field(mats)
    h1 = hcc(field, FULL, n_jobs=1)
    h2 = hcc(field, FULL, n_jobs=1)
    h4 = hcc(field, FULL, n_jobs=4)
    assert history_to_json(h1) == history_to_json(h2) == history_to_json(h4)


def test_channel_order_invariance():
    rng = np.random.default_rng(4)
    mats = np.stack([random_coherence_matrix(rng, 6) for _ in range(10)])
    perm = np.array([3, 0, 5, 1, 4, 2])
    permuted = mats[:, perm][:, :, perm]
    h1 = hcc(make_field(mats), FULL)
    h2 = hcc(make_field(permuted), FULL)
    part1 = cut(h1, 3)
    part2 = cut(h2, 3)
    co1 = part1.co_membership()
    co2 = part2.co_membership()[np.ix_(np.argsort(perm), np.argsort(perm))]
    assert np.array_equal(co1, co2)


def test_tie_break_prefers_smallest_pair():
    m = np.eye(3)  # all pairwise dissimilarities equal 1
    field = make_field(np.tile(m, (5, 1, 1)))
    h = hcc(field, FULL)
    assert h.steps[0].merged == (0, 1)


def test_hcc_rejects_empty_band():
    with pytest.raises(ValueError, match="no Fourier"):
        hcc(block_diag_field(), FrequencyBand(0.0, 1e-6))


def test_linkage_three_channel_arithmetic():
    c = np.array([
        [1.0, 0.9, 0.1],
        [0.9, 1.0, 0.5],
        [0.1, 0.5, 1.0],
    ])
    ha = linkage_cluster(c, "average")
    hm = linkage_cluster(c, "complete")
    assert ha.steps[0].merged == (0, 1) and hm.steps[0].merged == (0, 1)
    assert ha.steps[1].dissimilarity == pytest.approx(1 - 0.3, abs=1e-12)
    assert hm.steps[1].dissimilarity == pytest.approx(1 - 0.1, abs=1e-12)


def test_linkage_two_channels_identical_histories():
    c = np.array([[1.0, 0.6], [0.6, 1.0]])
    ha = linkage_cluster(c, "average")
    hm = linkage_cluster(c, "complete")
    assert ha.steps[0].dissimilarity == hm.steps[0].dissimilarity
    assert ha.steps[0].merged == hm.steps[0].merged


def test_linkage_matches_scipy_on_random_matrices():
    # independent oracle: scipy's linkage on the same condensed distances
    from scipy.cluster.hierarchy import fcluster, linkage as scipy_linkage
    from scipy.spatial.distance import squareform

    rng = np.random.default_rng(5)
    for _ in range(20):
        c = random_coherence_matrix(rng, 7)
        np.fill_diagonal(c, 1.0)
        d = 1.0 - c
        np.fill_diagonal(d, 0.0)
        condensed = squareform(d, checks=False)
        for ours, theirs in (("average", "average"), ("complete", "complete")):
            h = linkage_cluster(c, ours)
            z = scipy_linkage(condensed, method=theirs)
            np.testing.assert_allclose(
                sorted(s.dissimilarity for s in h.steps), np.sort(z[:, 2]),
                atol=1e-10)
            for k in (2, 3, 4):
                mine = cut(h, k)
                ref = fcluster(z, t=k, criterion="maxclust") - 1
                both = [tuple(sorted(np.flatnonzero(np.asarray(mine.assignment) == g)))
                        for g in range(k)]
                ref_groups = [tuple(sorted(np.flatnonzero(ref == g)))
                              for g in range(k)]
                assert sorted(both) == sorted(ref_groups)


def test_methods_agree_on_separated_blocks():
    field = block_diag_field()
    bm = integrate_band(field, FULL)
    parts = [
        cut(hcc(field, FULL), 2),
        cut(linkage_cluster(bm, "average"), 2),
        cut(linkage_cluster(bm, "complete"), 2),
    ]
    for p in parts[1:]:
        assert agreement(parts[0], p) == 1.0


def test_baseline_duplicated_channel_merges_first():
    rng = np.random.default_rng(6)
    x = rng.normal(size=600)
    y = rng.normal(size=600)
    ts = TimeSeriesSet(np.vstack([x, x, y * 3.0]), 100.0, ("a", "b", "c"))
    h = spectral_baseline(ts, span=8)
    assert h.steps[0].merged == (0, 1)
    assert h.steps[0].dissimilarity < 1e-6


def test_baseline_separates_distinct_peaks():
    def ar2(peak, seed):
        spec = MixtureSpec((AR2Spec(peak, 0.95),), np.array([[1.0]]), 0.0,
                           1000, 100.0, seed=seed)
        return simulate_mixture(spec).data[0]

    same = TimeSeriesSet(np.vstack([ar2(2.0, 1), ar2(2.0, 2)]), 100.0, ("a", "b"))
    far = TimeSeriesSet(np.vstack([ar2(2.0, 3), ar2(40.0, 4)]), 100.0, ("a", "b"))
    d_same = spectral_baseline(same, span=8).steps[0].dissimilarity
    d_far = spectral_baseline(far, span=8).steps[0].dissimilarity
    assert d_far > d_same


def test_baseline_method_label():
    rng = np.random.default_rng(7)
    ts = TimeSeriesSet(rng.normal(size=(3, 400)), 100.0, ("a", "b", "c"))
    h = spectral_baseline(ts, span=4)
    assert h.method == "spectral-baseline"
    assert all(0.0 <= s.dissimilarity <= 1.0 for s in h.steps)


def test_scree_extraction():
    steps = (
        MergeStep(1, (0, 1), 0.1, (0, 0, 1, 2)),
        MergeStep(2, (0, 2), 0.2, (0, 0, 0, 1)),
        MergeStep(3, (0, 3), 0.9, (0, 0, 0, 0)),
    )
    h = MergeHistory(steps, "hac", FULL, 4)
    curve = scree(h)
    assert curve.k == (3, 2, 1)
    assert curve.d == (0.1, 0.2, 0.9)


def test_scree_single_step():
    h = MergeHistory((MergeStep(1, (0, 1), 0.5, (0, 0)),), "hac", FULL, 2)
    assert len(scree(h).k) == 1


def test_cut_boundaries():
    steps = (
        MergeStep(1, (0, 1), 0.1, (0, 0, 1, 2)),
        MergeStep(2, (0, 2), 0.2, (0, 0, 0, 1)),
        MergeStep(3, (0, 3), 0.9, (0, 0, 0, 0)),
    )
    h = MergeHistory(steps, "hac", FULL, 4)
    assert cut(h, 4).groups() == [[0], [1], [2], [3]]
    assert cut(h, 1).groups() == [[0, 1, 2, 3]]
    with pytest.raises(ValueError):
        cut(h, 0)
    with pytest.raises(ValueError):
        cut(h, 5)


def test_suggest_k_jump_at_last_merge():
    assert suggest_k(ScreeCurve((3, 2, 1), (0.05, 0.06, 0.50))) == 2


def test_suggest_k_flat_curve():
    assert suggest_k(ScreeCurve((3, 2, 1), (0.2, 0.25, 0.3))) == 1


def test_suggest_k_takes_latest_jump():
    assert suggest_k(ScreeCurve((4, 3, 2, 1), (0.05, 0.4, 0.45, 0.9))) == 2


@given(st.lists(st.floats(0.0, 1.0), min_size=2, max_size=12))
@settings(max_examples=60)
def test_suggest_k_in_range(ds):
    curve = ScreeCurve(tuple(range(len(ds), 0, -1)), tuple(ds))
    k = suggest_k(curve)
    assert 1 <= k <= len(ds)


def test_history_json_roundtrip():
    rng = np.random.default_rng(8)
    mats = np.stack([random_coherence_matrix(rng, 5) for _ in range(8)])
    h = hcc(make_field(mats), FULL, p=2)
    back = history_from_json(history_to_json(h))
    assert back == h


def test_history_validation():
    with pytest.raises(ValueError):
        MergeHistory((), "hac", FULL, 3)  # needs 2 steps
    with pytest.raises(ValueError):
        MergeHistory((MergeStep(1, (0, 1), 1.5, (0, 0)),), "hac", FULL, 2)


def test_first_coresidence():
    steps = (
        MergeStep(1, (0, 1), 0.1, (0, 0, 1, 2)),
        MergeStep(2, (0, 2), 0.2, (0, 0, 0, 1)),
        MergeStep(3, (0, 3), 0.9, (0, 0, 0, 0)),
    )
    h = MergeHistory(steps, "hac", FULL, 4)
    assert first_coresidence_k(h, [0], [1]) == 3
    assert first_coresidence_k(h, [0, 1], [3]) == 1
    assert first_coresidence_k(h, [2], [3]) == 1


def test_exp1_recovers_two_groups():
    ts, ref, band = experiment("exp1", seed=derive_seed(42, 0))
    spec, _ = smoothed_spectrum(ts)
    coh = coherence_field(spec)
    h = hcc(coh, band)
    assert agreement(cut(h, 2), ref) == 1.0


def test_exp2_case1_all_methods_recover():
    ts, ref, band = experiment("exp2-case1", seed=derive_seed(43, 0))
    spec, _ = smoothed_spectrum(ts)
    coh = coherence_field(spec)
    bm = integrate_band(coh, band)
    assert agreement(cut(linkage_cluster(bm, "average", band), 2), ref) == 1.0
    assert agreement(cut(linkage_cluster(bm, "complete", band), 2), ref) == 1.0
