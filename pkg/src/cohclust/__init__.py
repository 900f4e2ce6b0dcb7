"""Coherence-based clustering of multichannel time series.

The package estimates spectral matrices from multichannel recordings,
derives pairwise squared coherence, measures dependence between whole
clusters of channels through eigenvalue spectra (cluster coherence), and
agglomerates channels hierarchically on those measures. Simulation
generators, replicate evaluation, a CLI, and an HTTP service round out
the toolkit.
"""

__version__ = "0.1.0"

from .core import (
    ChannelLayout,
    DataError,
    FrequencyBand,
    Partition,
    TimeSeriesSet,
    band_by_name,
    read_layout_csv,
    read_timeseries_csv,
    standard_1020_layout,
    standard_bands,
    write_layout_csv,
    write_timeseries_csv,
)
from .spectral import (
    SmoothingKernel,
    SpectralField,
    auto_spectra,
    coherence_field,
    daniell_kernel,
    fejer_kernel,
    integrate_band,
    periodogram_matrix,
    select_span_gcv,
    smooth,
    smoothed_spectrum,
)
from .coherence import (
    ClusterPair,
    CoherenceCurve,
    average_coherence,
    average_coherence_curve,
    block_coherence,
    block_coherence_curve,
    cluster_coherence,
    cluster_coherence_curve,
    minimum_coherence,
    minimum_coherence_curve,
    normalized_sorted_eigenvalues,
)
from .clustering import (
    MergeHistory,
    MergeStep,
    ScreeCurve,
    cut,
    first_coresidence_k,
    hcc,
    linkage_cluster,
    scree,
    spectral_baseline,
    suggest_k,
)
from .simgen import (
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
from .evaluation import (
    AffinityMatrix,
    ScreeBand,
    affinity,
    agreement,
    scree_band,
)
