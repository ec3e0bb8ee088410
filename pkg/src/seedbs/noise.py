"""Noise level estimators for the change-in-mean model.

All estimators work on scaled differences ``(X[t+j] - X[t]) / sqrt(2)``.
Under i.i.d. noise of variance ``sigma^2`` and a piecewise-constant mean
with segments of at least ``j`` observations, each jump contributes to
exactly ``j`` of the lag-``j`` differences. Comparing two lags therefore
cancels the jump contribution, which is what the jump filtered noise level
(JFNL) estimator does.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import ConfigError, check_int, check_series

# Gaussian consistency factor for the median absolute deviation.
MAD_CONSTANT = 1.4826

METHODS = ("jfnl", "jfnl_tilde", "jfnl_lag", "mad", "ensemble")


@dataclass(frozen=True)
class NoiseEstimate:
    sigma2: float
    method: str
    lags: tuple = None

    def __post_init__(self):
        if not self.sigma2 >= 0:
            raise ValueError(f"sigma2 must be non-negative, got {self.sigma2}")
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def sigma(self):
        return math.sqrt(self.sigma2)

    def to_dict(self):
        return {
            "method": self.method,
            "sigma2": self.sigma2,
            "sigma": self.sigma,
            "lags": list(self.lags) if self.lags is not None else None,
        }


def empirical_variance(Y, centered=True):
    """Mean squared deviation of ``Y`` (divisor ``len(Y)``).

    With ``centered=False`` the mean is not subtracted, giving the average
    of ``Y**2``.
    """
    Y = np.asarray(Y, dtype=np.float64).reshape(-1)
    if Y.size == 0:
        raise ValueError("empirical_variance of an empty vector")
    if centered:
        return float(np.mean((Y - Y.mean()) ** 2))
    return float(np.mean(Y * Y))


def _lag_diffs(x, lag):
    return (x[lag:] - x[:-lag]) / math.sqrt(2.0)


def _two_lag(x, j1, j2, centered):
    v1 = empirical_variance(_lag_diffs(x, j1), centered)
    v2 = empirical_variance(_lag_diffs(x, j2), centered)
    return (j2 * v1 - j1 * v2) / (j2 - j1)


def jfnl(series):
    """Jump filtered noise level estimate.

    ``max(0, 2 v(lag-1 diffs / sqrt 2) - v(lag-2 diffs / sqrt 2))`` with
    ``v`` the divisor-``l`` empirical variance. Needs ``T >= 3``.
    """
    x = check_series(series, min_length=3)
    return NoiseEstimate(max(0.0, _two_lag(x, 1, 2, True)), "jfnl", (1, 2))


def jfnl_tilde(series):
    """JFNL using the uncentered second moment instead of the variance."""
    x = check_series(series, min_length=3)
    return NoiseEstimate(max(0.0, _two_lag(x, 1, 2, False)), "jfnl_tilde", (1, 2))


def jfnl_lag(series, j1, j2, centered=True):
    """Two-lag generalization of JFNL.

    With ``v_j`` the (centered or uncentered) variance of the scaled lag-``j``
    differences, returns ``max(0, (j2 v_j1 - j1 v_j2) / (j2 - j1))``. Valid
    when every true segment has at least ``j2`` observations, which cannot
    be checked from the data. ``(1, 2, centered=True)`` is :func:`jfnl`.
    """
    j1 = check_int(j1, "j1", minimum=1)
    j2 = check_int(j2, "j2", minimum=1)
    if j1 >= j2:
        raise ConfigError(f"need j1 < j2, got j1={j1}, j2={j2}")
    x = check_series(series, min_length=j2 + 1)
    return NoiseEstimate(max(0.0, _two_lag(x, j1, j2, centered)), "jfnl_lag", (j1, j2))


def jfnl_inner(series):
    """The JFNL expression before clipping at zero (may be negative)."""
    x = check_series(series, min_length=3)
    return _two_lag(x, 1, 2, True)


def mad_sigma(series):
    """MAD of the scaled lag-1 differences times 1.4826."""
    x = check_series(series, min_length=2)
    d = _lag_diffs(x, 1)
    sigma = MAD_CONSTANT * float(np.median(np.abs(d - np.median(d))))
    return NoiseEstimate(sigma * sigma, "mad")


def ensemble_sigma(estimates):
    """Median of the ``sigma2`` values; lower median for even counts."""
    estimates = list(estimates)
    if not estimates:
        raise ValueError("ensemble_sigma needs at least one estimate")
    vals = sorted(e.sigma2 for e in estimates)
    return NoiseEstimate(vals[(len(vals) - 1) // 2], "ensemble")


def estimate_noise(series, method="jfnl", lags=(2, 4), centered=True):
    """Dispatch to a named estimator.

    ``ensemble`` takes the median of ``jfnl``, ``jfnl_tilde`` and ``mad``.
    """
    if method == "jfnl":
        return jfnl(series)
    if method == "jfnl_tilde":
        return jfnl_tilde(series)
    if method == "jfnl_lag":
        j1, j2 = lags
        return jfnl_lag(series, j1, j2, centered)
    if method == "mad":
        return mad_sigma(series)
    if method == "ensemble":
        return ensemble_sigma([jfnl(series), jfnl_tilde(series), mad_sigma(series)])
    raise ConfigError(f"unknown noise method {method!r}; expected one of {METHODS}")
