"""CUSUM statistics for the Gaussian change-in-mean model via prefix sums."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import check_series

# Above this length the prefix pass uses blocked summation with compensated
# block offsets.
COMPENSATED_MIN_LENGTH = 2 ** 20
_BLOCK = 4096
# Upper bound on split points evaluated per vectorized chunk.
_CHUNK_SPLITS = 1 << 15


def _compensated_cumsum(x):
    n = x.size
    out = np.empty(n + 1)
    out[0] = 0.0
    offset = 0.0
    comp = 0.0
    for lo in range(0, n, _BLOCK):
        block = np.cumsum(x[lo:lo + _BLOCK])
        out[lo + 1:lo + 1 + block.size] = offset + block
        # Kahan update of the running offset by the block total.
        y = float(block[-1]) - comp
        t = offset + y
        comp = (t - offset) - y
        offset = t
    return out


class PrefixSums:
    """Cumulative sums ``cumulative[t] = x_1 + ... + x_t`` with ``cumulative[0] = 0``.

    Immutable after construction, so one instance can be shared between
    threads evaluating different intervals.
    """

    def __init__(self, x):
        x = check_series(x, min_length=1)
        if x.size >= COMPENSATED_MIN_LENGTH:
            cumulative = _compensated_cumsum(x)
        else:
            cumulative = np.empty(x.size + 1)
            cumulative[0] = 0.0
            np.cumsum(x, out=cumulative[1:])
        cumulative.setflags(write=False)
        self.cumulative = cumulative

    @property
    def T(self):
        return self.cumulative.size - 1

    def segment_sum(self, s, e):
        return self.cumulative[e] - self.cumulative[s]


def as_prefix_sums(x):
    return x if isinstance(x, PrefixSums) else PrefixSums(x)


@dataclass(frozen=True)
class CusumResult:
    """Maximal absolute CUSUM on ``(start, end]`` attained at ``split``."""

    start: int
    end: int
    split: int
    value: float

    @property
    def interval(self):
        return (self.start, self.end)

    @property
    def length(self):
        return self.end - self.start


def _cusum(cumulative, s, e, b):
    # sqrt((b-s)(e-b)/n) * |mean(s, b] - mean(b, e]|, algebraically equal to
    # the weighted-sum form; the mean-difference form is exactly zero on
    # constant stretches of exactly representable data.
    left = b - s
    right = e - b
    c_b = cumulative[b]
    diff = (c_b - cumulative[s]) / left - (cumulative[e] - c_b) / right
    return np.sqrt(left * right / (e - s)) * np.abs(diff)


def cusum_at(ps, s, e, b):
    """Absolute CUSUM statistic of split ``b`` within ``(s, e]``.

    Equals ``|sqrt((e-b)/(n(b-s))) S(s,b) - sqrt((b-s)/(n(e-b))) S(b,e)|``
    with ``n = e - s`` and ``S(i, j)`` the sum of observations ``i+1..j``.
    """
    ps = as_prefix_sums(ps)
    if not 0 <= s < b < e <= ps.T:
        raise ValueError(f"need 0 <= s < b < e <= {ps.T}, got s={s}, b={b}, e={e}")
    return float(_cusum(ps.cumulative, s, e, b))


def max_cusum(ps, interval):
    """Maximize the CUSUM over all splits of ``interval = (s, e)``.

    Ties resolve to the smallest split.
    """
    ps = as_prefix_sums(ps)
    s, e = (int(v) for v in interval)
    if not (0 <= s and s + 2 <= e <= ps.T):
        raise ValueError(f"invalid interval ({s}, {e}] for T={ps.T}")
    b = np.arange(s + 1, e)
    vals = _cusum(ps.cumulative, s, e, b)
    i = int(np.argmax(vals))
    return CusumResult(s, e, s + 1 + i, float(vals[i]))


def _max_chunk(cumulative, starts, ends):
    n_splits = ends - starts - 1
    offsets = np.zeros(starts.size, dtype=np.int64)
    np.cumsum(n_splits[:-1], out=offsets[1:])
    total = int(offsets[-1] + n_splits[-1])
    owner_start = np.repeat(starts, n_splits)
    owner_end = np.repeat(ends, n_splits)
    j = np.arange(total, dtype=np.int64) - np.repeat(offsets, n_splits)
    vals = _cusum(cumulative, owner_start, owner_end, owner_start + 1 + j)
    best = np.maximum.reduceat(vals, offsets)
    hit = np.where(vals == np.repeat(best, n_splits), j, np.iinfo(np.int64).max)
    first = np.minimum.reduceat(hit, offsets)
    return best, starts + 1 + first


def _chunk_bounds(starts, ends):
    work = np.cumsum(ends - starts - 1)
    bounds = [0]
    while bounds[-1] < starts.size:
        lo = bounds[-1]
        base = work[lo - 1] if lo else 0
        hi = int(np.searchsorted(work, base + _CHUNK_SPLITS, side="right"))
        bounds.append(max(hi, lo + 1))
    return bounds


def max_cusum_many(ps, starts, ends, n_jobs=1):
    """Vectorized :func:`max_cusum` over many intervals.

    Intervals are processed in fixed-size chunks that do not depend on
    ``n_jobs``, so the result is identical for any worker count.

    Returns
    -------
    values : ndarray of float
    splits : ndarray of int64
    """
    ps = as_prefix_sums(ps)
    starts = np.asarray(starts, dtype=np.int64)
    ends = np.asarray(ends, dtype=np.int64)
    if starts.size == 0:
        return np.empty(0), np.empty(0, dtype=np.int64)
    bounds = _chunk_bounds(starts, ends)
    pieces = list(zip(bounds[:-1], bounds[1:]))

    def run(piece):
        lo, hi = piece
        return _max_chunk(ps.cumulative, starts[lo:hi], ends[lo:hi])

    if n_jobs is None or n_jobs == 1 or len(pieces) == 1:
        results = [run(p) for p in pieces]
    else:
        workers = n_jobs if n_jobs > 0 else None
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, pieces))
    values = np.concatenate([r[0] for r in results])
    splits = np.concatenate([r[1] for r in results])
    return values, splits

