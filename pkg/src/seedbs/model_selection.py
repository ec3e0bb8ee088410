"""Turning solution paths into final piecewise-constant fits.

Candidate models are the prefixes of a solution path: the first ``k``
nodes in detection order, ``k = 0, ..., len(path)``. Detection order is
parent-closed, so each prefix is a valid binary segmentation.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import ConfigError, check_int, check_real, check_series
from .cusum import PrefixSums
from .segmentation import ChangePointSet


@dataclass(frozen=True)
class PiecewiseFit:
    change_points: ChangePointSet
    means: np.ndarray
    rss: float
    criterion: float = None

    @property
    def mse(self):
        return self.rss / self.change_points.T

    @property
    def n_change_points(self):
        return len(self.change_points)

    def fitted_values(self):
        bounds = np.array([0, *self.change_points.positions, self.change_points.T])
        return np.repeat(self.means, np.diff(bounds))


def _as_cpts(cpts, T):
    if isinstance(cpts, ChangePointSet):
        if cpts.T != T:
            raise ValueError(f"change points are for T={cpts.T}, series has T={T}")
        return cpts
    cpts = [int(c) for c in cpts]
    return ChangePointSet(tuple(cpts), (float("nan"),) * len(cpts), T)


def fit_means(series, cpts):
    """Least-squares piecewise-constant fit with the given change points."""
    x = check_series(series)
    cpts = _as_cpts(cpts, x.size)
    bounds = np.array([0, *cpts.positions, x.size], dtype=np.int64)
    lengths = np.diff(bounds)
    means = np.add.reduceat(x, bounds[:-1]) / lengths
    resid = x - np.repeat(means, lengths)
    return PiecewiseFit(cpts, means, float(resid @ resid))


def universal_threshold(sigma_hat, T, C=1.0):
    """``C * sigma_hat * sqrt(2 log T)``."""
    sigma_hat = check_real(sigma_hat, "sigma_hat", minimum=0.0)
    C = check_real(C, "C", minimum=0.0, strict=True)
    if T < 2:
        raise ConfigError(f"T must be >= 2, got {T}")
    return C * sigma_hat * math.sqrt(2.0 * math.log(T))


class _SegmentCosts:
    def __init__(self, x):
        # Centering keeps the sum-of-squares identity well conditioned.
        xc = x - x.mean()
        self.s1 = PrefixSums(xc).cumulative
        self.s2 = PrefixSums(xc * xc).cumulative

    def __call__(self, s, e):
        tot = self.s1[e] - self.s1[s]
        return max(0.0, float(self.s2[e] - self.s2[s] - tot * tot / (e - s)))


def path_rss(path, series):
    """Residual sum of squares of every path prefix, ``k = 0..len(path)``.

    Adding node ``k`` replaces its recursion segment by its two halves, so
    each step costs O(1) with prefix sums of ``x`` and ``x**2``.
    """
    x = check_series(series)
    if path.T != x.size:
        raise ValueError(f"path is for T={path.T}, series has T={x.size}")
    cost = _SegmentCosts(x)
    rss = np.empty(len(path) + 1)
    rss[0] = cost(0, x.size)
    cols = zip(path.segment_starts.tolist(), path.splits.tolist(),
               path.segment_ends.tolist())
    for k, (s, b, e) in enumerate(cols, start=1):
        rss[k] = max(0.0, rss[k - 1] - cost(s, e) + cost(s, b) + cost(b, e))
    return rss


def _zero_fit(rss):
    # Residuals at round-off level relative to the null model count as exact.
    return rss <= 1e-10 * rss[0]


def _select_prefix(path, series, k, criterion):
    cpts = ChangePointSet(
        tuple(path.splits[:k].tolist()), tuple(path.values[:k].tolist()), path.T
    )
    fit = fit_means(series, cpts)
    return PiecewiseFit(fit.change_points, fit.means, fit.rss, float(criterion))


def bic_unknown_variance(path, series, penalty_per_cpt=None, max_cpts=None):
    """Minimize ``(T/2) log(mse_k) + k * penalty_per_cpt`` over path prefixes.

    ``penalty_per_cpt`` defaults to ``log T``. If some prefix fits the data
    exactly (``mse_k = 0``) the first such ``k`` is selected.

    ``max_cpts`` bounds ``k`` and defaults to ``T // 2``. Without a bound a
    complete path always ends in the all-singletons model, whose zero mse
    would win on any data.
    """
    x = check_series(series)
    T = x.size
    pen = math.log(T) if penalty_per_cpt is None else check_real(
        penalty_per_cpt, "penalty_per_cpt", minimum=0.0, strict=True
    )
    k_max = T // 2 if max_cpts is None else check_int(max_cpts, "max_cpts", minimum=0)
    rss = path_rss(path, x)[: k_max + 1]
    exact = np.flatnonzero(_zero_fit(rss))
    if exact.size:
        return _select_prefix(path, x, int(exact[0]), -np.inf)
    if math.isinf(pen):
        return _select_prefix(path, x, 0, np.inf)
    crit = 0.5 * T * np.log(rss / T) + np.arange(rss.size) * pen
    k = int(np.argmin(crit))
    return _select_prefix(path, x, k, crit[k])


def bic_known_variance(path, series, sigma2, beta_factor=1.0):
    """Minimize ``rss_k + k * beta`` with ``beta = beta_factor * sigma2 * log T``."""
    x = check_series(series)
    T = x.size
    sigma2 = check_real(sigma2, "sigma2", minimum=0.0, strict=True)
    beta_factor = check_real(beta_factor, "beta_factor", minimum=0.0, strict=True)
    beta = beta_factor * sigma2 * math.log(T)
    if math.isinf(beta):
        return _select_prefix(path, x, 0, np.inf)
    rss = path_rss(path, x)
    crit = rss + np.arange(rss.size) * beta
    k = int(np.argmin(crit))
    return _select_prefix(path, x, k, crit[k])
