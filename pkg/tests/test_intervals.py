import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seedbs._validation import ConfigError
from seedbs.intervals import (
    IntervalSet,
    all_intervals,
    augment_small_intervals,
    random_intervals,
    seeded_intervals,
    seeded_layers,
)

# Frozen from an oracle run over T = 2^8 .. 2^16 (max observed 3.414 and 3.771).
C_COUNT = 4.0
C_LENGTH = 4.0


def test_dyadic_example():
    T = 64
    got = seeded_intervals(T, 2, T // 4).as_tuples()
    assert got[:4] == [(0, T), (0, T // 2), (T // 4, 3 * T // 4), (T // 2, T)]
    assert got[4:6] == [(0, T // 4), (T // 8, 3 * T // 8)]
    assert all(e - s >= T // 4 for s, e in got)


def test_two_layers_hand_enumerated():
    # layer 1: (0,4]; layer 2: three length-2 intervals at starts 0, 1, 2.
    assert seeded_intervals(4, 2, 2).as_tuples() == [(0, 4), (0, 2), (1, 3), (2, 4)]


def test_single_layer():
    assert seeded_intervals(2, math.sqrt(2), 2).as_tuples() == [(0, 2)]


@pytest.mark.parametrize("decay", [1.0, 0.5, 2.01])
def test_rejects_decay(decay):
    with pytest.raises(ConfigError):
        seeded_intervals(100, decay, 2)


def test_rejects_min_len():
    with pytest.raises(ConfigError):
        seeded_intervals(100, 2, 1)


@pytest.mark.parametrize("T", [2, 3, 7, 16, 33, 100, 257])
@pytest.mark.parametrize("decay", [2 ** 0.5, 2, 2 ** 0.125, 1.7])
def test_min_len_two_contains_all_pairs(T, decay):
    got = seeded_intervals(T, decay, 2).as_set()
    assert {(s, s + 2) for s in range(T - 1)} <= got


@pytest.mark.parametrize("T", [5, 64, 100, 1000, 4099])
@pytest.mark.parametrize("decay", [2 ** 0.5, 2, 2 ** 0.125])
def test_layer_coverage(T, decay):
    positions = np.arange(1, T)
    for starts, ends in seeded_layers(T, decay, 2):
        covered = np.zeros(T + 2, dtype=int)
        np.add.at(covered, starts + 1, 1)
        np.add.at(covered, ends + 1, -1)
        assert np.all(np.cumsum(covered)[positions] > 0)


def test_no_duplicates_and_valid():
    for T in (10, 77, 1024):
        iv = seeded_intervals(T, 2 ** 0.125, 2)
        pairs = iv.as_tuples()
        assert len(pairs) == len(set(pairs))
        assert np.all(iv.lengths >= 2) and iv.ends.max() <= T and iv.starts.min() >= 0


def test_deterministic():
    assert seeded_intervals(999, 1.3, 3) == seeded_intervals(999, 1.3, 3)


@pytest.mark.parametrize("T", [2 ** k for k in range(8, 17)])
def test_count_and_total_length(T):
    iv = seeded_intervals(T, 2 ** 0.5, 2)
    assert len(iv) <= C_COUNT * T
    assert iv.total_length <= C_LENGTH * T * math.log2(T)


@pytest.mark.parametrize("T", [2 ** k for k in range(10, 15)])
def test_denser_decay_workload(T):
    ratio = len(seeded_intervals(T, 2 ** 0.125, 2)) / len(seeded_intervals(T, 2 ** 0.5, 2))
    assert 2 <= ratio <= 8


def test_augment_from_empty():
    got = augment_small_intervals(IntervalSet.empty(5), 5, 3)
    assert got.as_tuples() == [(0, 2), (1, 3), (2, 4), (3, 5)]


def test_augment_noop_when_present():
    base = seeded_intervals(4, 2, 2)
    assert augment_small_intervals(base, 4, 3).as_set() == base.as_set()


def test_augment_max_len_two_is_empty():
    base = seeded_intervals(50, 2, 8)
    got = augment_small_intervals(base, 50, 2)
    assert got.as_tuples() == base.as_tuples()


@given(T=st.integers(2, 60), max_len=st.integers(2, 15), m=st.integers(2, 20))
def test_augment_is_union(T, max_len, m):
    base = seeded_intervals(T, 2 ** 0.5, m)
    got = augment_small_intervals(base, T, max_len)
    small = {(s, e) for s in range(T) for e in range(s + 2, min(s + max_len, T + 1))}
    assert got.as_set() == base.as_set() | small
    assert got.as_tuples()[: len(base)] == base.as_tuples()
    assert len(got.as_tuples()) == len(got.as_set())


def test_random_only_legal_interval():
    assert random_intervals(2, 5, 3).as_tuples() == [(0, 2)]


def test_random_deterministic():
    assert random_intervals(500, 200, 9) == random_intervals(500, 200, 9)
    assert random_intervals(500, 200, 9) != random_intervals(500, 200, 10)


def test_random_valid():
    iv = random_intervals(1000, 100, 5)
    assert np.all(iv.starts >= 0) and np.all(iv.ends <= 1000)
    assert np.all(iv.ends - iv.starts >= 2)
    assert len(iv) <= 100
    assert iv.meta["M"] == 100 and iv.meta["seed"] == 5


def test_random_exhaustive_draw_covers_everything():
    assert random_intervals(12, 20_000, 0).as_set() == all_intervals(12).as_set()


@settings(max_examples=30)
@given(T=st.integers(2, 400))
def test_seeded_pure_function_of_inputs(T):
    assert seeded_intervals(T) == seeded_intervals(T)
    assert seeded_intervals(T).as_tuples()[0] == (0, T)
