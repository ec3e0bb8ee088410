"""Monte Carlo comparison of detection methods, and scaling benchmarks.

Every replication draws its noise from a seed derived from
``(base_seed, replication)`` only, so all methods see the same noisy series
and the result set does not depend on how replications are distributed
over worker processes.
"""

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._validation import ConfigError, check_int, check_real
from .estimators import SeedBSDetector
from .intervals import seeded_intervals
from .segmentation import greedy_path
from .signals import sample_noisy

WBS_DEFAULT_M = 5000

# name -> SeedBSDetector parameters. WBS seeds are filled in per replication.
METHODS = {
    "seedbs_thr_jfnl": dict(selection="greedy", noise_method="jfnl"),
    "seedbs_thr_mad": dict(selection="greedy", noise_method="mad"),
    "seedbs_not_jfnl": dict(selection="not", noise_method="jfnl"),
    "aseedbs_thr_jfnl": dict(selection="aseedbs", noise_method="jfnl"),
    "wbs_thr_jfnl": dict(selection="wbs", noise_method="jfnl", n_intervals=WBS_DEFAULT_M),
    "wbs_thr_mad": dict(selection="wbs", noise_method="mad", n_intervals=WBS_DEFAULT_M),
    "seedbs_bic_known_jfnl": dict(selection="greedy", noise_method="jfnl", model_sel="bic_known"),
    "seedbs_bic_unknown": dict(selection="greedy", noise_method="jfnl", model_sel="bic_unknown"),
}

CSV_COLUMNS = (
    "replication", "method", "sigma_true", "sigma_hat", "n_detected", "runtime_ms", "seed",
)


def derive_seed(base_seed, *key):
    """Deterministic 63-bit seed from ``base_seed`` and an integer key."""
    ss = np.random.SeedSequence([int(base_seed), *(int(k) for k in key)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def _run_task(task):
    signal, sigma, rep, methods, base_seed = task
    seed = derive_seed(base_seed, rep)
    x = sample_noisy(signal, sigma, seed)
    rows = []
    for name in methods:
        params = dict(METHODS[name])
        if params["selection"] == "wbs":
            params["random_state"] = derive_seed(base_seed, rep, 1)
        det = SeedBSDetector(**params)
        t0 = time.perf_counter()
        det.fit(x)
        runtime = (time.perf_counter() - t0) * 1e3
        rows.append({
            "replication": rep,
            "method": name,
            "sigma_true": float(sigma),
            "sigma_hat": float(det.sigma_),
            "n_detected": int(det.change_points_.size),
            "runtime_ms": runtime,
            "seed": seed,
        })
    return rows


def _quartiles(values):
    q1, med, q3 = np.percentile(np.asarray(values, dtype=float), [25, 50, 75])
    return {"q1": float(q1), "median": float(med), "q3": float(q3)}


@dataclass
class SimulationReport:
    rows: list
    config: dict
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.summary:
            self.summary = self._summarize()

    def _summarize(self):
        out = {}
        for sigma in self.config["sigmas"]:
            per = {}
            for name in self.config["methods"]:
                sel = [r for r in self.rows if r["method"] == name and r["sigma_true"] == sigma]
                per[name] = {
                    "n_detected": _quartiles([r["n_detected"] for r in sel]),
                    "sigma_hat": _quartiles([r["sigma_hat"] for r in sel]),
                    "replications": len(sel),
                }
            out[repr(float(sigma))] = per
        return out

    def n_detected(self, method, sigma):
        return np.array([
            r["n_detected"] for r in self.rows
            if r["method"] == method and r["sigma_true"] == sigma
        ])

    def sigma_hat(self, method, sigma):
        return np.array([
            r["sigma_hat"] for r in self.rows
            if r["method"] == method and r["sigma_true"] == sigma
        ])

    def to_csv(self, path=None, runtime=True):
        """Write the rows as CSV; returns the text when ``path`` is None.

        ``runtime=False`` drops the ``runtime_ms`` column, which is the only
        non-deterministic field.
        """
        cols = [c for c in CSV_COLUMNS if runtime or c != "runtime_ms"]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({**row, "sigma_hat": repr(row["sigma_hat"]),
                             "runtime_ms": f"{row['runtime_ms']:.3f}"})
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w", newline="") as fh:
            fh.write(text)
        return text

    def to_json(self):
        return {"config": self.config, "summary": self.summary}


def simulate(signal, sigmas, reps, methods, base_seed=0, workers=1):
    """Run every method on ``reps`` noisy realizations per noise level.

    Parameters
    ----------
    signal : PiecewiseSignal
    sigmas : sequence of float
    reps : int
    methods : sequence of str
        Keys of :data:`METHODS`.
    base_seed : int
    workers : int, default=1
        Worker processes. The rows are identical for any value.

    Returns
    -------
    SimulationReport
        Rows ordered by (sigma, replication, method).
    """
    reps = check_int(reps, "reps", minimum=1)
    sigmas = [check_real(s, "sigma", minimum=0.0) for s in sigmas]
    if not sigmas:
        raise ConfigError("at least one sigma is required")
    methods = list(methods)
    unknown = [m for m in methods if m not in METHODS]
    if unknown or not methods:
        raise ConfigError(f"unknown methods {unknown}; expected some of {sorted(METHODS)}")
    workers = check_int(workers, "workers", minimum=1)
    tasks = [(signal, s, r, methods, base_seed) for s in sigmas for r in range(reps)]
    if workers == 1:
        chunks = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    rows = [row for chunk in chunks for row in chunk]
    config = {
        "signal": signal.to_dict(),
        "sigmas": sigmas,
        "reps": reps,
        "methods": methods,
        "base_seed": base_seed,
        "wbs_M": WBS_DEFAULT_M,
        "method_params": {m: METHODS[m] for m in methods},
    }
    return SimulationReport(rows, config)


BENCH_COLUMNS = ("T", "n_intervals", "total_length", "length_per_TlogT",
                 "time_median_s", "time_min_s")


def bench(T_list, decay=2 ** 0.5, min_len=2, repeats=5, seed=0):
    """Interval counts, total lengths and greedy path timings per ``T``.

    The timed work is :func:`greedy_path` on a standard normal series with
    the seeded intervals generated beforehand.
    """
    repeats = check_int(repeats, "repeats", minimum=1)
    rows = []
    for T in T_list:
        T = check_int(T, "T", minimum=4)
        intervals = seeded_intervals(T, decay, min_len)
        x = np.random.Generator(np.random.PCG64(derive_seed(seed, T))).standard_normal(T)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            greedy_path(x, intervals)
            times.append(time.perf_counter() - t0)
        rows.append({
            "T": T,
            "n_intervals": len(intervals),
            "total_length": intervals.total_length,
            "length_per_TlogT": intervals.total_length / (T * math.log2(T)),
            "time_median_s": float(np.median(times)),
            "time_min_s": float(np.min(times)),
        })
    return rows


def bench_csv(rows, path=None):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)
