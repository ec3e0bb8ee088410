"""Brute-force reference implementations used as independent test oracles.

They share no code with the package: sums are taken directly over slices
and the recursions follow the textbook definitions.
"""

import math

import numpy as np


def cusum(x, s, e, b):
    """Weighted-sum form on 0-based half-open (s, e], split b."""
    n = e - s
    left = float(np.sum(x[s:b]))
    right = float(np.sum(x[b:e]))
    return abs(
        math.sqrt((e - b) / (n * (b - s))) * left
        - math.sqrt((b - s) / (n * (e - b))) * right
    )


def max_cusum(x, s, e):
    best_b, best_v = None, -1.0
    for b in range(s + 1, e):
        v = cusum(x, s, e, b)
        if v > best_v:
            best_b, best_v = b, v
    return best_b, best_v


def greedy_recursion(x, intervals, s=0, e=None, parent=None, out=None):
    """Depth-first greedy segmentation.

    Returns a list of dicts with keys segment, interval, split, value and
    parent (the parent's split, or None).
    """
    if e is None:
        e = len(x)
    if out is None:
        out = []
    cands = []
    for a, c in intervals:
        if s <= a and c <= e:
            b, v = max_cusum(x, a, c)
            cands.append((-v, c - a, a, b, (a, c)))
    if not cands:
        return out
    negv, _, _, b, iv = min(cands)
    out.append({"segment": (s, e), "interval": iv, "split": b, "value": -negv,
                "parent": parent})
    greedy_recursion(x, intervals, s, b, b, out)
    greedy_recursion(x, intervals, b, e, b, out)
    return out


def not_recursion(x, intervals, threshold, s=0, e=None, out=None):
    if e is None:
        e = len(x)
    if out is None:
        out = set()
    cands = []
    for a, c in intervals:
        if s <= a and c <= e:
            b, v = max_cusum(x, a, c)
            if v > threshold:
                cands.append((c - a, a, b))
    if not cands:
        return out
    _, _, b = min(cands)
    out.add(b)
    not_recursion(x, intervals, threshold, s, b, out)
    not_recursion(x, intervals, threshold, b, e, out)
    return out


def exhaustive_intervals(T):
    return [(s, e) for s in range(T) for e in range(s + 2, T + 1)]


def piecewise_rss(x, cpts):
    bounds = [0, *sorted(cpts), len(x)]
    total = 0.0
    for s, e in zip(bounds, bounds[1:]):
        seg = x[s:e]
        total += float(np.sum((seg - seg.mean()) ** 2))
    return total


def smallest_jump_cusum(signal, intervals):
    """Smallest over jumps of the best CUSUM among candidate intervals that
    contain that jump and no other.

    Every true split on the noiseless greedy path scores at least this much.
    """
    x = signal.values()
    b = [0, *signal.change_points, signal.length]
    best = []
    for i in range(1, len(b) - 1):
        vals = [cusum(x, s, e, b[i]) for s, e in intervals
                if b[i - 1] <= s < b[i] < e <= b[i + 1]]
        best.append(max(vals))
    return min(best)
