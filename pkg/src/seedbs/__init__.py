"""Seeded binary segmentation and jump filtered noise level estimation."""

from .cusum import CusumResult, PrefixSums, cusum_at, max_cusum, max_cusum_many
from .estimators import DetectionConfig, NoiseLevelEstimator, SeedBSDetector
from .intervals import (
    IntervalSet,
    all_intervals,
    augment_small_intervals,
    random_intervals,
    seeded_intervals,
)
from .model_selection import (
    PiecewiseFit,
    bic_known_variance,
    bic_unknown_variance,
    fit_means,
    universal_threshold,
)
from .noise import (
    NoiseEstimate,
    empirical_variance,
    ensemble_sigma,
    jfnl,
    jfnl_lag,
    jfnl_tilde,
    mad_sigma,
)
from .segmentation import (
    ChangePointSet,
    PathNode,
    SolutionPath,
    aseedbs,
    greedy_path,
    not_select,
    seedbs_intervals,
    threshold_prune,
    wbs_baseline,
)
from .signals import (
    PiecewiseSignal,
    extreme_teeth,
    load_signal_spec,
    make_stairs,
    make_teeth,
    sample_noisy,
    stairs10,
)

__version__ = "0.1.0"
