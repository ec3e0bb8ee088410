"""Binary segmentation over candidate interval sets.

Greedy selection and NOT selection both reduce to the same scan: sort the
candidate intervals by a fixed total order, then walk them once while
maintaining the current set of segment boundaries. An interval is accepted
when no boundary lies strictly inside it, which happens exactly when it is
the first interval (in that order) contained in the current segment. This
reproduces the recursive definition without re-scanning intervals per
segment, and is schedule independent because the order is total.
"""

import heapq
from bisect import bisect_right, insort
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from ._validation import check_int, check_real, check_series
from .cusum import CusumResult, PrefixSums, max_cusum_many
from .intervals import (
    augment_small_intervals,
    random_intervals,
    seeded_intervals,
)


@dataclass(frozen=True)
class PathNode:
    """One split of the greedy recursion.

    ``segment`` is the recursion segment ``(s, e]`` the node was chosen in;
    ``candidate`` is the winning interval inside it. ``parent`` is the order
    of the node that created ``segment`` (``None`` for the root segment).
    """

    candidate: CusumResult
    segment: tuple
    parent: object
    order: int

    @property
    def split(self):
        return self.candidate.split

    @property
    def value(self):
        return self.candidate.value


@dataclass(frozen=True)
class SolutionPath:
    """Greedy solution path, nodes in detection order.

    Stored column-wise: node ``k`` chose interval ``(starts[k], ends[k]]``
    inside recursion segment ``(segment_starts[k], segment_ends[k]]`` and
    split at ``splits[k]``; ``parents[k]`` is -1 for the root. Every node's
    value is at most its parent's, so detection order is non-increasing in
    value and each prefix of the path is parent-closed.
    """

    T: int
    starts: np.ndarray
    ends: np.ndarray
    splits: np.ndarray
    values: np.ndarray
    segment_starts: np.ndarray
    segment_ends: np.ndarray
    parents: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return int(self.splits.size)

    @cached_property
    def nodes(self):
        cols = zip(
            self.starts.tolist(), self.ends.tolist(), self.splits.tolist(),
            self.values.tolist(), self.segment_starts.tolist(),
            self.segment_ends.tolist(), self.parents.tolist(),
        )
        return tuple(
            PathNode(CusumResult(a, c, b, v), (s, e), None if p < 0 else p, k)
            for k, (a, c, b, v, s, e, p) in enumerate(cols)
        )


def _empty_path(T, meta):
    z = np.empty(0, dtype=np.int64)
    return SolutionPath(T, z, z, z, np.empty(0), z, z, z, meta)


@dataclass(frozen=True)
class ChangePointSet:
    """Sorted change point positions with the CUSUM value at detection."""

    positions: tuple
    scores: tuple
    T: int

    def __post_init__(self):
        order = np.argsort(np.asarray(self.positions, dtype=np.int64), kind="stable")
        pos = tuple(int(self.positions[i]) for i in order)
        scores = tuple(float(self.scores[i]) for i in order)
        if len(set(pos)) != len(pos):
            raise ValueError("change point positions must be distinct")
        if pos and (pos[0] < 1 or pos[-1] > self.T - 1):
            raise ValueError(f"change points must lie in [1, {self.T - 1}]")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "scores", scores)

    def __len__(self):
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)


def _evaluate(ps, intervals, n_jobs):
    if intervals.T != ps.T:
        raise ValueError(f"interval set is for T={intervals.T}, series has T={ps.T}")
    return max_cusum_many(ps, intervals.starts, intervals.ends, n_jobs=n_jobs)


def _scan(order, starts, ends, splits, T):
    """Accept intervals in ``order`` that fit inside a current segment.

    ``nxt[p]`` is the smallest boundary > p and ``prv[p]`` the largest
    boundary <= p. Splitting ``(s, e]`` at ``b`` rewrites both tables on
    that segment only.

    Returns accepted indices and their segment starts and ends.
    """
    nxt = np.full(T, T, dtype=np.int64)
    prv = np.zeros(T, dtype=np.int64)
    accepted, seg_s, seg_e = [], [], []
    remaining = T - 1
    for i in order:
        a = starts[i]
        e = int(nxt[a])
        if e < ends[i]:
            continue
        s = int(prv[a])
        b = splits[i]
        nxt[s:b] = b
        prv[b:e] = b
        accepted.append(i)
        seg_s.append(s)
        seg_e.append(e)
        remaining -= 1
        if remaining == 0:
            break
    return accepted, seg_s, seg_e


def greedy_path(series, intervals, n_jobs=1):
    """Complete greedy solution path over a candidate interval set.

    On the current segment the winner is the contained interval with the
    largest maximal CUSUM; ties go to the shorter interval, then the smaller
    start, then the smaller split. The segment is split at the winner's
    argmax and both halves are processed the same way until no candidate
    interval fits.

    Parameters
    ----------
    series : array-like of shape (T,)
    intervals : IntervalSet
    n_jobs : int, default=1
        Threads used to evaluate the intervals. Does not affect the result.

    Returns
    -------
    SolutionPath
    """
    x = check_series(series)
    ps = PrefixSums(x)
    T = ps.T
    meta = {"selection": "greedy", "intervals": dict(intervals.meta)}
    if len(intervals) == 0:
        return _empty_path(T, meta)
    values, splits = _evaluate(ps, intervals, n_jobs)
    starts, ends = intervals.starts, intervals.ends
    order = np.lexsort((splits, starts, ends - starts, -values))
    acc, seg_s, seg_e = _scan(order.tolist(), starts.tolist(), ends.tolist(),
                              splits.tolist(), T)
    acc = np.asarray(acc, dtype=np.int64)
    seg_s = np.asarray(seg_s, dtype=np.int64)
    seg_e = np.asarray(seg_e, dtype=np.int64)
    node_splits = splits[acc]
    # The segment was created by whichever of its two boundaries was
    # inserted last; 0 and T are never inserted.
    creator = np.full(T + 1, -1, dtype=np.int64)
    creator[node_splits] = np.arange(acc.size)
    parents = np.maximum(creator[seg_s], creator[seg_e])
    return SolutionPath(
        T, starts[acc], ends[acc], node_splits, values[acc], seg_s, seg_e,
        parents, meta,
    )


def threshold_prune(path, threshold):
    """Keep nodes whose value exceeds ``threshold`` and whose parent is kept."""
    threshold = check_real(threshold, "threshold", minimum=0.0)
    keep = np.zeros(len(path), dtype=bool)
    above = path.values > threshold
    for k, p in enumerate(path.parents.tolist()):
        keep[k] = above[k] and (p < 0 or keep[p])
    return ChangePointSet(
        tuple(path.splits[keep].tolist()), tuple(path.values[keep].tolist()), path.T
    )


def not_select(series, intervals, threshold, n_jobs=1):
    """Narrowest-over-threshold selection.

    Within the current segment, among contained intervals whose maximal
    CUSUM exceeds ``threshold``, the narrowest one (then the one with the
    smaller start) is accepted and the segment is split at its argmax.
    """
    threshold = check_real(threshold, "threshold", minimum=0.0)
    x = check_series(series)
    ps = PrefixSums(x)
    if len(intervals) == 0:
        return ChangePointSet((), (), ps.T)
    values, splits = _evaluate(ps, intervals, n_jobs)
    idx = np.flatnonzero(values > threshold)
    starts, ends = intervals.starts[idx], intervals.ends[idx]
    order = idx[np.lexsort((starts, ends - starts))]
    acc, _, _ = _scan(
        order.tolist(), intervals.starts.tolist(), intervals.ends.tolist(),
        splits.tolist(), ps.T,
    )
    return ChangePointSet(
        tuple(splits[acc].tolist()), tuple(values[acc].tolist()), ps.T
    )


@lru_cache(maxsize=4096)
def _local_intervals(length, decay, min_len, augment_below):
    base = seeded_intervals(length, decay, min_len)
    if augment_below > 2:
        base = augment_small_intervals(base, length, augment_below)
    return base.starts, base.ends


def _segment_best(ps, s, e, decay, min_len, augment_below):
    if e - s < 2:
        return None
    starts, ends = _local_intervals(e - s, decay, min_len, augment_below)
    if starts.size == 0:
        return None
    starts, ends = starts + s, ends + s
    values, splits = max_cusum_many(ps, starts, ends)
    i = np.lexsort((splits, starts, ends - starts, -values))[0]
    return CusumResult(int(starts[i]), int(ends[i]), int(splits[i]), float(values[i]))


def _priority(c):
    return (-c.value, c.length, c.start, c.split)


def aseedbs(series, decay=2 ** 0.5, min_len=2, threshold=0.0, augment_below=0):
    """Adaptive seeded binary segmentation.

    Starting from the single segment ``(0, T]``, every round draws seeded
    intervals scaled to each current segment, picks the best candidate over
    all segments and inserts it if its CUSUM exceeds ``threshold``.
    A segment's best candidate only changes when the segment is split, so
    candidates are cached per segment; the outcome equals recomputing every
    segment each round.

    Parameters
    ----------
    augment_below : int, default=0
        If above 2, short intervals with fewer than this many observations
        are added to each segment's seeded set.
    """
    x = check_series(series)
    threshold = check_real(threshold, "threshold", minimum=0.0)
    min_len = check_int(min_len, "min_len", minimum=2)
    augment_below = check_int(augment_below, "augment_below", minimum=0)
    seeded_intervals(2, decay, 2)  # validates decay
    ps = PrefixSums(x)
    heap = []

    def push(s, e):
        best = _segment_best(ps, s, e, float(decay), min_len, augment_below)
        if best is not None:
            heapq.heappush(heap, (_priority(best), best))

    push(0, ps.T)
    positions, scores = [], []
    bounds = [0, ps.T]
    while heap:
        _, best = heapq.heappop(heap)
        if not best.value > threshold:
            break
        b = best.split
        j = bisect_right(bounds, b)
        s, e = bounds[j - 1], bounds[j]
        insort(bounds, b)
        positions.append(b)
        scores.append(best.value)
        push(s, b)
        push(b, e)
    return ChangePointSet(tuple(positions), tuple(scores), ps.T)


def seedbs_intervals(T, decay=2 ** 0.5, min_len=2, augment_below=10):
    """Seeded intervals plus, if ``augment_below > 2``, all shorter intervals."""
    intervals = seeded_intervals(T, decay, min_len)
    if augment_below > 2:
        intervals = augment_small_intervals(intervals, T, augment_below)
    return intervals


def wbs_baseline(series, M, seed, threshold, n_jobs=1):
    """Wild binary segmentation: greedy path over ``M`` random intervals, pruned."""
    x = check_series(series)
    intervals = random_intervals(x.size, M, seed)
    return threshold_prune(greedy_path(x, intervals, n_jobs=n_jobs), threshold)


__all__ = [
    "ChangePointSet",
    "PathNode",
    "SolutionPath",
    "aseedbs",
    "greedy_path",
    "not_select",
    "seedbs_intervals",
    "threshold_prune",
    "wbs_baseline",
]
