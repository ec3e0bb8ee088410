"""Command line interface: ``seedbs detect | noise | simulate | bench``.

Exit codes: 0 success, 2 invalid configuration, 3 unreadable input.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from ._validation import ConfigError, InputError, check_series
from .estimators import MODEL_SELECTIONS, SELECTIONS, SeedBSDetector
from .noise import METHODS as NOISE_METHODS
from .noise import ensemble_sigma, jfnl, jfnl_lag, jfnl_tilde, mad_sigma
from .signals import resolve_signal
from .simulation import METHODS, bench, bench_csv, dumps, simulate

EXIT_CONFIG = 2
EXIT_INPUT = 3


def read_series(path):
    """Read one value per line; ``#`` starts a comment.

    A non-numeric first line is taken as a CSV header. Lines with more than
    one comma-separated field are rejected.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    values = []
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 1:
            raise InputError(f"{path}:{lineno}: expected a single column, got {len(fields)}")
        try:
            values.append(float(fields[0]))
        except ValueError:
            if first:
                first = False
                continue
            raise InputError(f"{path}:{lineno}: not a number: {fields[0]!r}") from None
        first = False
    return check_series(values, min_length=1, name=str(path))


def _add_detection_flags(p):
    p.add_argument("--decay", type=float, default=2 ** 0.5)
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--augment-below", type=int, default=10,
                   help="scan all intervals shorter than this (0 disables)")
    p.add_argument("--selection", choices=SELECTIONS, default="greedy")
    p.add_argument("--M", type=int, default=None, help="random intervals (wbs only)")
    p.add_argument("--seed", type=int, default=None, help="interval seed (wbs only)")
    p.add_argument("--noise-method", choices=NOISE_METHODS, default="jfnl")
    p.add_argument("--lags", type=int, nargs=2, default=(2, 4), metavar=("J1", "J2"))
    p.add_argument("--model-sel", choices=MODEL_SELECTIONS, default="threshold")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--penalty", type=float, default=None)
    p.add_argument("--beta-factor", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)


def _detector(args):
    return SeedBSDetector(
        decay=args.decay,
        min_len=args.min_len,
        augment_below=args.augment_below,
        selection=args.selection,
        n_intervals=args.M,
        random_state=args.seed,
        noise_method=args.noise_method,
        lags=tuple(args.lags),
        model_sel=args.model_sel,
        C=args.C,
        penalty=args.penalty,
        beta_factor=args.beta_factor,
        n_jobs=args.workers,
    )


def _emit(text, output):
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_detect(args):
    det = _detector(args)
    det.get_config()
    x = read_series(args.input)
    t0 = time.perf_counter()
    det.fit(x)
    report = det.report()
    report["runtime_ms"] = (time.perf_counter() - t0) * 1e3
    _emit(json.dumps(report, indent=2), args.output)


def cmd_noise(args):
    x = read_series(args.input)
    x = check_series(x, min_length=3, name=str(args.input))
    estimates = [jfnl(x), jfnl_tilde(x), mad_sigma(x)]
    j1, j2 = args.lags
    if x.size > j2:
        estimates.append(jfnl_lag(x, j1, j2))
    estimates.append(ensemble_sigma(estimates[:3]))
    out = {"n": int(x.size), "estimates": [e.to_dict() for e in estimates]}
    _emit(json.dumps(out, indent=2), args.output)


def cmd_simulate(args):
    signal = resolve_signal(args.scenario)
    report = simulate(signal, args.sigma, args.reps, args.methods,
                      base_seed=args.base_seed, workers=args.workers)
    if args.csv:
        report.to_csv(args.csv)
    else:
        sys.stdout.write(report.to_csv())
    summary = dumps(report.to_json())
    if args.summary:
        Path(args.summary).write_text(summary + "\n")
    elif args.csv:
        sys.stdout.write(summary + "\n")


def cmd_bench(args):
    rows = bench(args.T, args.decay, args.min_len, args.repeats, args.seed)
    text = bench_csv(rows, args.csv)
    if not args.csv:
        sys.stdout.write(text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="seedbs",
        description="Seeded binary segmentation change point detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect change points in a series file")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    _add_detection_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("noise", help="print every noise level estimate")
    p.add_argument("input")
    p.add_argument("--lags", type=int, nargs=2, default=(2, 4), metavar=("J1", "J2"))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("simulate", help="Monte Carlo comparison on a test signal")
    p.add_argument("--scenario", default="extreme.teeth",
                   help="extreme.teeth, stairs10 or a signal spec JSON file")
    p.add_argument("--sigma", type=float, nargs="+", default=[0.3])
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--methods", nargs="+", default=["seedbs_thr_jfnl", "seedbs_thr_mad"],
                   help=f"any of: {', '.join(METHODS)}")
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", help="write rows here instead of stdout")
    p.add_argument("--summary", help="write the JSON summary here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="interval counts and greedy path timings")
    p.add_argument("--T", type=int, nargs="+",
                   default=[2 ** k for k in range(10, 17)])
    p.add_argument("--decay", type=float, default=2 ** 0.5)
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        print(f"seedbs: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, ValueError) as exc:
        print(f"seedbs: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
