"""scikit-learn style wrappers around the functional API."""

import math
from dataclasses import asdict, dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import ConfigError, check_int, check_real, check_series
from .intervals import _check_decay, random_intervals
from .model_selection import (
    bic_known_variance,
    bic_unknown_variance,
    fit_means,
    universal_threshold,
)
from .noise import METHODS as NOISE_METHODS
from .noise import estimate_noise
from .segmentation import (
    ChangePointSet,
    aseedbs,
    greedy_path,
    not_select,
    seedbs_intervals,
    threshold_prune,
)

SELECTIONS = ("greedy", "not", "aseedbs", "wbs")
MODEL_SELECTIONS = ("threshold", "bic_unknown", "bic_known")


@dataclass(frozen=True)
class DetectionConfig:
    """Fully resolved detection settings.

    ``M`` and ``seed`` apply to ``selection="wbs"`` only. ``lags`` is used by
    ``noise_method="jfnl_lag"``. ``penalty`` is the per-change-point penalty
    of ``bic_unknown`` (``None`` means ``log T``); ``beta_factor`` scales
    ``sigma2 * log T`` in ``bic_known``.
    """

    decay: float = 2 ** 0.5
    min_len: int = 2
    augment_below: int = 10
    selection: str = "greedy"
    M: int = None
    seed: int = None
    noise_method: str = "jfnl"
    lags: tuple = (2, 4)
    model_sel: str = "threshold"
    C: float = 1.0
    penalty: float = None
    beta_factor: float = 1.0

    def validate(self):
        _check_decay(self.decay)
        check_int(self.min_len, "min_len", minimum=2)
        check_int(self.augment_below, "augment_below", minimum=0)
        if self.selection not in SELECTIONS:
            raise ConfigError(
                f"unknown selection {self.selection!r}; expected one of {SELECTIONS}"
            )
        if self.noise_method not in NOISE_METHODS:
            raise ConfigError(
                f"unknown noise method {self.noise_method!r}; "
                f"expected one of {NOISE_METHODS}"
            )
        if self.model_sel not in MODEL_SELECTIONS:
            raise ConfigError(
                f"unknown model selection {self.model_sel!r}; "
                f"expected one of {MODEL_SELECTIONS}"
            )
        if self.selection == "wbs":
            if self.M is None:
                raise ConfigError("selection='wbs' requires M")
            check_int(self.M, "M", minimum=1)
            if self.seed is not None:
                check_int(self.seed, "seed")
        elif self.M is not None or self.seed is not None:
            raise ConfigError("M and seed are only valid with selection='wbs'")
        if self.selection in ("not", "aseedbs") and self.model_sel != "threshold":
            raise ConfigError(
                f"selection={self.selection!r} produces no solution path; "
                "use model_sel='threshold'"
            )
        if self.noise_method == "jfnl_lag":
            if len(self.lags) != 2:
                raise ConfigError("lags must be a pair (j1, j2)")
            j1 = check_int(self.lags[0], "j1", minimum=1)
            j2 = check_int(self.lags[1], "j2", minimum=1)
            if j1 >= j2:
                raise ConfigError(f"need j1 < j2, got {self.lags}")
        check_real(self.C, "C", minimum=0.0, strict=True)
        if self.penalty is not None:
            check_real(self.penalty, "penalty", minimum=0.0, strict=True)
        check_real(self.beta_factor, "beta_factor", minimum=0.0, strict=True)
        return self

    def to_dict(self):
        d = asdict(self)
        d["lags"] = list(self.lags)
        return d


class SeedBSDetector(ClusterMixin, TransformerMixin, BaseEstimator):
    """Change point detection in the mean of a univariate series.

    Seeded binary segmentation by default; ``selection`` switches to
    narrowest-over-threshold, the adaptive variant or the random-interval
    WBS baseline. The noise level is estimated from the data and feeds the
    threshold ``C * sigma_hat * sqrt(2 log T)`` or the BIC penalty.

    Parameters
    ----------
    decay : float, default=sqrt(2)
        Seeded interval decay, in ``(1, 2]``.
    min_len : int, default=2
        Smallest seeded interval length.
    augment_below : int, default=10
        Also scan every interval with fewer observations than this; 0 or 2
        disables.
    selection : {"greedy", "not", "aseedbs", "wbs"}, default="greedy"
    n_intervals : int, optional
        Number of random intervals; required for ``selection="wbs"``.
    random_state : int, optional
        Seed of the random intervals (``wbs`` only). Defaults to 0.
    noise_method : {"jfnl", "jfnl_tilde", "jfnl_lag", "mad", "ensemble"}, default="jfnl"
    lags : tuple of int, default=(2, 4)
        Lag pair for ``noise_method="jfnl_lag"``.
    model_sel : {"threshold", "bic_unknown", "bic_known"}, default="threshold"
    C : float, default=1.0
        Threshold constant.
    penalty : float, optional
        Per change point penalty of ``bic_unknown``; ``log T`` if None.
    beta_factor : float, default=1.0
        ``bic_known`` penalty is ``beta_factor * sigma2 * log T``.
    n_jobs : int, default=1
        Threads for interval evaluation. Results do not depend on it.

    Attributes
    ----------
    change_points_ : ndarray of int
        Detected positions ``k``; a new segment starts at 0-based index ``k``.
    scores_ : ndarray of float
        CUSUM value of each change point at detection.
    labels_ : ndarray of int
        Segment index of every observation.
    noise_ : NoiseEstimate
    sigma_ : float
    threshold_ : float or None
    path_ : SolutionPath or None
        Greedy solution path (``greedy`` and ``wbs`` only).
    fit_ : PiecewiseFit
    n_samples_fit_ : int
    """

    def __init__(
        self,
        decay=2 ** 0.5,
        min_len=2,
        augment_below=10,
        selection="greedy",
        n_intervals=None,
        random_state=None,
        noise_method="jfnl",
        lags=(2, 4),
        model_sel="threshold",
        C=1.0,
        penalty=None,
        beta_factor=1.0,
        n_jobs=1,
    ):
        self.decay = decay
        self.min_len = min_len
        self.augment_below = augment_below
        self.selection = selection
        self.n_intervals = n_intervals
        self.random_state = random_state
        self.noise_method = noise_method
        self.lags = lags
        self.model_sel = model_sel
        self.C = C
        self.penalty = penalty
        self.beta_factor = beta_factor
        self.n_jobs = n_jobs

    def get_config(self):
        seed = self.random_state
        if self.selection == "wbs" and seed is None:
            seed = 0
        return DetectionConfig(
            decay=float(self.decay),
            min_len=self.min_len,
            augment_below=self.augment_below,
            selection=self.selection,
            M=self.n_intervals,
            seed=seed,
            noise_method=self.noise_method,
            lags=tuple(self.lags),
            model_sel=self.model_sel,
            C=self.C,
            penalty=self.penalty,
            beta_factor=self.beta_factor,
        ).validate()

    def _path(self, x, cfg):
        if cfg.selection == "wbs":
            intervals = random_intervals(x.size, cfg.M, cfg.seed)
        else:
            intervals = seedbs_intervals(
                x.size, cfg.decay, cfg.min_len, cfg.augment_below
            )
        return greedy_path(x, intervals, n_jobs=self.n_jobs)

    def fit(self, X, y=None):
        cfg = self.get_config()
        x = check_series(X, min_length=3)
        T = x.size
        noise = estimate_noise(x, cfg.noise_method, cfg.lags)
        self.noise_ = noise
        self.sigma_ = noise.sigma
        self.threshold_ = None
        self.path_ = None

        if cfg.model_sel == "threshold":
            thr = universal_threshold(noise.sigma, T, cfg.C)
            self.threshold_ = thr
            if cfg.selection in ("greedy", "wbs"):
                self.path_ = self._path(x, cfg)
                cpts = threshold_prune(self.path_, thr)
            elif cfg.selection == "not":
                intervals = seedbs_intervals(T, cfg.decay, cfg.min_len, cfg.augment_below)
                cpts = not_select(x, intervals, thr, n_jobs=self.n_jobs)
            else:
                cpts = aseedbs(x, cfg.decay, cfg.min_len, thr, cfg.augment_below)
            self.fit_ = fit_means(x, cpts)
        else:
            self.path_ = self._path(x, cfg)
            if cfg.model_sel == "bic_unknown":
                self.fit_ = bic_unknown_variance(self.path_, x, cfg.penalty)
            else:
                # A zero noise estimate means the data admit an exact fit.
                sigma2 = noise.sigma2 if noise.sigma2 > 0 else np.finfo(float).tiny
                self.fit_ = bic_known_variance(self.path_, x, sigma2, cfg.beta_factor)

        cpts = self.fit_.change_points
        self.change_points_ = np.asarray(cpts.positions, dtype=np.int64)
        self.scores_ = np.asarray(cpts.scores, dtype=float)
        self.labels_ = self._labels(T)
        self.n_samples_fit_ = T
        return self

    def _labels(self, T):
        return np.searchsorted(self.change_points_, np.arange(T), side="right")

    def _check_same_length(self, X):
        check_is_fitted(self, "change_points_")
        x = check_series(X)
        if x.size != self.n_samples_fit_:
            raise ValueError(
                f"X has {x.size} observations, detector was fitted on "
                f"{self.n_samples_fit_}"
            )
        return x

    def predict(self, X):
        """Segment label of every observation of ``X`` under the fitted change points."""
        self._check_same_length(X)
        return self.labels_.copy()

    def transform(self, X):
        """Piecewise-constant least-squares fit of ``X`` on the fitted segments."""
        x = self._check_same_length(X)
        cpts = ChangePointSet(tuple(self.change_points_), tuple(self.scores_), x.size)
        return fit_means(x, cpts).fitted_values()

    def report(self):
        """Detection summary as a JSON-serializable dict."""
        check_is_fitted(self, "change_points_")
        cfg = self.get_config()
        if cfg.model_sel == "threshold":
            crit = {"type": "threshold", "value": self.threshold_, "C": cfg.C}
        elif cfg.model_sel == "bic_unknown":
            pen = cfg.penalty if cfg.penalty is not None else math.log(self.n_samples_fit_)
            crit = {"type": "bic_unknown", "penalty_per_cpt": pen,
                    "value": _finite_or_none(self.fit_.criterion)}
        else:
            crit = {"type": "bic_known", "beta_factor": cfg.beta_factor,
                    "sigma2": self.noise_.sigma2,
                    "value": _finite_or_none(self.fit_.criterion)}
        return {
            "n": int(self.n_samples_fit_),
            "sigma_hat": self.sigma_,
            "method": {
                "selection": cfg.selection,
                "noise_method": cfg.noise_method,
                "model_sel": cfg.model_sel,
                "config": cfg.to_dict(),
            },
            "threshold_or_criterion": crit,
            "change_points": self.change_points_.tolist(),
        }


def _finite_or_none(v):
    return float(v) if v is not None and math.isfinite(v) else None


class NoiseLevelEstimator(BaseEstimator):
    """Estimate the noise standard deviation of a piecewise-constant series.

    Parameters
    ----------
    method : {"jfnl", "jfnl_tilde", "jfnl_lag", "mad", "ensemble"}, default="jfnl"
    lags : tuple of int, default=(2, 4)
        Lag pair for ``method="jfnl_lag"``.
    centered : bool, default=True
        Centered variance for ``jfnl_lag``.
    """

    def __init__(self, method="jfnl", lags=(2, 4), centered=True):
        self.method = method
        self.lags = lags
        self.centered = centered

    def fit(self, X, y=None):
        self.estimate_ = estimate_noise(X, self.method, tuple(self.lags), self.centered)
        self.sigma2_ = self.estimate_.sigma2
        self.sigma_ = self.estimate_.sigma
        return self
