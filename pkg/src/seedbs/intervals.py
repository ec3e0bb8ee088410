"""Candidate interval collections for CUSUM scans.

Intervals are half-open and 0-based: ``(s, e]`` covers observations
``s+1, ..., e`` (1-based), i.e. the slice ``x[s:e]``. An interval needs at
least two observations to admit a split.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import ConfigError, check_int, check_real

# Guards ceil() against representation error in decay**k, e.g.
# sqrt(2)**2 == 2.0000000000000004.
_CEIL_EPS = 1e-9


@dataclass(frozen=True)
class IntervalSet:
    """Ordered, duplicate-free collection of intervals on ``(0, T]``.

    Attributes
    ----------
    starts, ends : ndarray of int64
        Interval ``i`` is ``(starts[i], ends[i]]``.
    T : int
        Series length the intervals refer to.
    meta : dict
        Generation record (kind, decay, min_len, augment_max_len, M, seed).
    """

    starts: np.ndarray
    ends: np.ndarray
    T: int
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        starts = np.asarray(self.starts, dtype=np.int64).reshape(-1)
        ends = np.asarray(self.ends, dtype=np.int64).reshape(-1)
        if starts.shape != ends.shape:
            raise ValueError("starts and ends must have the same length")
        if starts.size and (
            starts.min() < 0 or ends.max() > self.T or np.any(ends - starts < 2)
        ):
            raise ValueError(f"intervals must satisfy 0 <= s, s + 2 <= e <= {self.T}")
        starts.setflags(write=False)
        ends.setflags(write=False)
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "ends", ends)

    @classmethod
    def empty(cls, T, **meta):
        return cls(np.empty(0, np.int64), np.empty(0, np.int64), T, meta)

    def __len__(self):
        return int(self.starts.size)

    def __iter__(self):
        return iter(zip(self.starts.tolist(), self.ends.tolist()))

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return (
            self.T == other.T
            and np.array_equal(self.starts, other.starts)
            and np.array_equal(self.ends, other.ends)
        )

    __hash__ = None

    @property
    def lengths(self):
        return self.ends - self.starts

    @property
    def total_length(self):
        return int(self.lengths.sum())

    def as_tuples(self):
        return list(self)

    def as_set(self):
        return set(self)


def _dedup(starts, ends, T):
    """Drop repeated ``(s, e)`` pairs, keeping first occurrences in order."""
    keys = starts * (T + 1) + ends
    _, first = np.unique(keys, return_index=True)
    first.sort()
    return starts[first], ends[first]


def _check_decay(decay):
    decay = check_real(decay, "decay")
    if not 1.0 < decay <= 2.0:
        raise ConfigError(f"decay must lie in (1, 2], got {decay}")
    return decay


def seeded_layers(T, decay=2 ** 0.5, min_len=2):
    """Yield ``(starts, ends)`` per layer of the seeded construction.

    Layer ``k`` (1-based) holds ``2 * ceil(decay**(k-1)) - 1`` intervals of
    length ``ceil(T / decay**(k-1))`` with evenly spaced starts from ``0`` to
    ``T - length`` (round half up). Generation stops before the first layer
    whose length falls below ``min_len``.
    """
    T = check_int(T, "T", minimum=2)
    decay = _check_decay(decay)
    min_len = check_int(min_len, "min_len", minimum=2)
    k = 0
    while True:
        scale = decay ** k
        length = math.ceil(T / scale - _CEIL_EPS)
        if length < min_len:
            return
        n = 2 * math.ceil(scale - _CEIL_EPS) - 1
        if n == 1:
            starts = np.zeros(1, dtype=np.int64)
        else:
            i = np.arange(n, dtype=np.int64)
            starts = (2 * i * (T - length) + (n - 1)) // (2 * (n - 1))
        yield starts, starts + length
        k += 1


def seeded_intervals(T, decay=2 ** 0.5, min_len=2):
    """Deterministic multi-scale seeded intervals on ``(0, T]``.

    Parameters
    ----------
    T : int
        Series length, at least 2.
    decay : float, default=sqrt(2)
        Length shrink factor between consecutive layers, in ``(1, 2]``.
    min_len : int, default=2
        Smallest interval length. With ``min_len=2`` every length-2 interval
        is included, so greedy selection yields a complete solution path.

    Returns
    -------
    IntervalSet
        Ordered by (layer, start), duplicates removed.
    """
    layers = list(seeded_layers(T, decay, min_len))
    meta = {"kind": "seeded", "decay": float(decay), "min_len": int(min_len)}
    if not layers:
        return IntervalSet.empty(T, **meta)
    starts = np.concatenate([s for s, _ in layers])
    ends = np.concatenate([e for _, e in layers])
    starts, ends = _dedup(starts, ends, T)
    return IntervalSet(starts, ends, T, meta)


def _short_intervals(T, max_len):
    lengths = np.arange(2, min(max_len, T + 1), dtype=np.int64)
    if lengths.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    starts = np.concatenate([np.arange(T - L + 1, dtype=np.int64) for L in lengths])
    ends = starts + np.repeat(lengths, T - lengths + 1)
    return starts, ends


def augment_small_intervals(intervals, T, max_len):
    """Add every interval with ``2 <= e - s < max_len`` to ``intervals``.

    Existing intervals keep their order; missing short ones are appended
    ordered by (length, start).
    """
    max_len = check_int(max_len, "max_len", minimum=2)
    T = check_int(T, "T", minimum=2)
    if intervals.T != T:
        raise ConfigError(f"interval set is for T={intervals.T}, not {T}")
    short_s, short_e = _short_intervals(T, max_len)
    starts, ends = _dedup(
        np.concatenate([intervals.starts, short_s]),
        np.concatenate([intervals.ends, short_e]),
        T,
    )
    meta = dict(intervals.meta)
    meta["base_kind"] = meta.get("kind")
    meta["kind"] = "augmented"
    meta["augment_max_len"] = max_len
    return IntervalSet(starts, ends, T, meta)


def all_intervals(T):
    """Every interval ``(s, e]`` with ``e - s >= 2`` (quadratic in ``T``)."""
    T = check_int(T, "T", minimum=2)
    starts, ends = _short_intervals(T, T + 1)
    return IntervalSet(starts, ends, T, {"kind": "exhaustive"})


def random_intervals(T, M, seed):
    """Draw ``M`` intervals with uniformly random endpoints, WBS-style.

    Each draw picks two endpoints independently and uniformly from
    ``{0, ..., T}``; pairs spanning fewer than two observations are redrawn.
    Repeated draws are stored once.
    """
    T = check_int(T, "T", minimum=2)
    M = check_int(M, "M", minimum=1)
    rng = np.random.Generator(np.random.PCG64(seed))
    lo = np.empty(M, dtype=np.int64)
    hi = np.empty(M, dtype=np.int64)
    todo = np.arange(M)
    while todo.size:
        pair = rng.integers(0, T + 1, size=(2, todo.size))
        a, b = pair.min(axis=0), pair.max(axis=0)
        ok = b - a >= 2
        lo[todo[ok]] = a[ok]
        hi[todo[ok]] = b[ok]
        todo = todo[~ok]
    starts, ends = _dedup(lo, hi, T)
    return IntervalSet(starts, ends, T, {"kind": "random", "M": M, "seed": seed})
