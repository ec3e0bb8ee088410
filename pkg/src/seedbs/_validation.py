"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np
from sklearn.utils.validation import check_array


class ConfigError(ValueError):
    """Invalid parameter or parameter combination."""


class InputError(ValueError):
    """Series data that cannot be parsed or used."""


def check_series(X, min_length=2, name="series"):
    """Validate a univariate series and return it as a 1-D float array.

    Accepts any array-like of shape (T,) or (T, 1). Values must be finite.

    Parameters
    ----------
    X : array-like
        Observed values.
    min_length : int, default=2
        Smallest admissible length.
    name : str
        Used in error messages.

    Returns
    -------
    ndarray of shape (T,)
    """
    if isinstance(X, np.ndarray) and X.ndim == 1 and X.dtype == np.float64:
        arr = X
        if not np.all(np.isfinite(arr)):
            raise InputError(f"{name} contains non-finite values")
    else:
        try:
            arr = check_array(
                X, ensure_2d=False, dtype=np.float64, ensure_all_finite=True,
                ensure_min_samples=0,
            )
        except ValueError as exc:
            raise InputError(f"invalid {name}: {exc}") from exc
        if arr.ndim == 2:
            if arr.shape[1] != 1:
                raise InputError(
                    f"{name} must be univariate, got shape {arr.shape}"
                )
            arr = arr[:, 0]
        elif arr.ndim != 1:
            raise InputError(f"{name} must be 1-D, got {arr.ndim} dimensions")
    if arr.shape[0] < min_length:
        raise InputError(
            f"{name} needs at least {min_length} observations, got {arr.shape[0]}"
        )
    return arr


def check_int(value, name, minimum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_real(value, name, minimum=None, strict=False):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if np.isnan(value):
        raise ConfigError(f"{name} must not be NaN")
    if minimum is not None:
        if strict and not value > minimum:
            raise ConfigError(f"{name} must be > {minimum}, got {value}")
        if not strict and value < minimum:
            raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value
