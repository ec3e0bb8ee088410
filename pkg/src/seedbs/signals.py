"""Piecewise-constant test signals and reproducible noisy realizations.

Noise is drawn with ``numpy.random.Generator(PCG64(seed)).standard_normal``,
i.e. the PCG64 bit generator combined with numpy's ziggurat normal sampler.
Both are fixed by numpy's stream-compatibility policy, so a given seed
reproduces the same series on every platform.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._validation import ConfigError, InputError, check_int, check_real


@dataclass(frozen=True)
class PiecewiseSignal:
    """Noise-free piecewise-constant mean signal.

    Parameters
    ----------
    length : int
        Number of observations ``T``.
    change_points : tuple of int
        Strictly increasing positions in ``[1, T-1]``. A change point ``k``
        means observations ``k`` and ``k+1`` (1-based) have different means,
        i.e. the 0-based slice ``[:k]`` is the segment before the jump.
    segment_means : tuple of float
        One mean per segment, ``len(change_points) + 1`` entries.
    name : str
        Label used in reports.
    """

    length: int
    change_points: tuple
    segment_means: tuple
    name: str = field(default="signal", compare=False)

    def __post_init__(self):
        T = check_int(self.length, "length", minimum=2)
        cpts = tuple(int(c) for c in self.change_points)
        means = tuple(float(m) for m in self.segment_means)
        if any(b <= a for a, b in zip(cpts, cpts[1:])):
            raise InputError("change_points must be strictly increasing")
        if cpts and (cpts[0] < 1 or cpts[-1] > T - 1):
            raise InputError(f"change_points must lie in [1, {T - 1}]")
        if len(means) != len(cpts) + 1:
            raise InputError(
                f"expected {len(cpts) + 1} segment means, got {len(means)}"
            )
        if not all(np.isfinite(means)):
            raise InputError("segment means must be finite")
        if any(a == b for a, b in zip(means, means[1:])):
            raise InputError("adjacent segment means must differ")
        object.__setattr__(self, "length", T)
        object.__setattr__(self, "change_points", cpts)
        object.__setattr__(self, "segment_means", means)

    @property
    def n_change_points(self):
        return len(self.change_points)

    @property
    def min_segment_length(self):
        bounds = np.array([0, *self.change_points, self.length])
        return int(np.diff(bounds).min())

    def values(self):
        """Return the mean vector of length ``T``."""
        bounds = np.array([0, *self.change_points, self.length])
        return np.repeat(np.asarray(self.segment_means), np.diff(bounds))

    def to_dict(self):
        return {
            "T": self.length,
            "change_points": list(self.change_points),
            "means": list(self.segment_means),
            "name": self.name,
        }


def make_teeth(segment_len, num_segments, low=0.0, high=1.0, name="teeth"):
    """Alternating ``low, high, low, ...`` segments of equal length."""
    segment_len = check_int(segment_len, "segment_len", minimum=2)
    num_segments = check_int(num_segments, "num_segments", minimum=2)
    if low == high:
        raise ConfigError("low and high must differ")
    cpts = tuple(segment_len * i for i in range(1, num_segments))
    means = tuple(low if i % 2 == 0 else high for i in range(num_segments))
    return PiecewiseSignal(segment_len * num_segments, cpts, means, name)


def make_stairs(step_len, num_steps, step_height=1.0, name="stairs"):
    """Monotone staircase with means ``0, h, 2h, ...``."""
    step_len = check_int(step_len, "step_len", minimum=2)
    num_steps = check_int(num_steps, "num_steps", minimum=2)
    step_height = check_real(step_height, "step_height")
    if step_height == 0:
        raise ConfigError("step_height must be non-zero")
    cpts = tuple(step_len * i for i in range(1, num_steps))
    means = tuple(step_height * i for i in range(num_steps))
    return PiecewiseSignal(step_len * num_steps, cpts, means, name)


def extreme_teeth():
    """Teeth signal of length 1000 with 199 change points (segments of 5)."""
    return make_teeth(5, 200, 0.0, 1.0, name="extreme.teeth")


def stairs10():
    """Staircase of 50 unit steps, each 10 observations long."""
    return make_stairs(10, 50, 1.0, name="stairs10")


NAMED_SIGNALS = {
    "extreme.teeth": extreme_teeth,
    "stairs10": stairs10,
}


def load_signal_spec(path):
    """Read a JSON signal description.

    The file holds an object ``{"T": int, "change_points": [int, ...],
    "means": [float, ...], "name": str}``; ``name`` is optional.
    """
    path = Path(path)
    try:
        spec = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read signal spec {path}: {exc}") from exc
    if not isinstance(spec, dict):
        raise InputError("signal spec must be a JSON object")
    missing = {"T", "change_points", "means"} - spec.keys()
    if missing:
        raise InputError(f"signal spec is missing keys: {sorted(missing)}")
    T, cpts, means = spec["T"], spec["change_points"], spec["means"]
    if isinstance(T, bool) or not isinstance(T, int):
        raise InputError("T must be an integer")
    if not isinstance(cpts, list) or not all(
        isinstance(c, int) and not isinstance(c, bool) for c in cpts
    ):
        raise InputError("change_points must be a list of integers")
    if not isinstance(means, list) or not all(
        isinstance(m, (int, float)) and not isinstance(m, bool) for m in means
    ):
        raise InputError("means must be a list of numbers")
    try:
        return PiecewiseSignal(T, cpts, means, str(spec.get("name", path.stem)))
    except ConfigError as exc:
        raise InputError(str(exc)) from exc


def resolve_signal(name_or_path):
    """Look up a named signal, falling back to a spec file path."""
    if name_or_path in NAMED_SIGNALS:
        return NAMED_SIGNALS[name_or_path]()
    path = Path(name_or_path)
    if path.suffix == ".json" or path.exists():
        return load_signal_spec(path)
    raise ConfigError(
        f"unknown scenario {name_or_path!r}; expected one of "
        f"{sorted(NAMED_SIGNALS)} or a signal spec file"
    )


def sample_noisy(signal, sigma, seed):
    """Return ``signal.values() + sigma * Z`` with Z i.i.d. standard normal.

    The result depends only on ``(signal, sigma, seed)``.
    """
    sigma = check_real(sigma, "sigma", minimum=0.0)
    mu = signal.values()
    if sigma == 0:
        return mu
    rng = np.random.Generator(np.random.PCG64(seed))
    return mu + sigma * rng.standard_normal(signal.length)
