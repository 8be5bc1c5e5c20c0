"""Batch command-line front end.

Subcommands: ``generate`` (synthetic curve CSVs, optionally contaminated),
``depth`` (score a query file against a reference file), ``robustness``
(Kendall-distance stability sweep) and ``detect`` (severity/detection sweep).
Exit codes: 0 success, 1 I/O failure, 2 validation failure; errors go to
stderr one per line.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from .curves import read_csv, write_csv
from .depth import DepthConfig, depth_report
from .evaluation import detection_bench, robustness_bench
from .synthdata import (
    ANOMALY_KINDS,
    AnomalySpec,
    GenSpec,
    generate,
    inject,
    write_labels_csv,
)

_ROBUSTNESS_KIND = {
    "location": "location_scale",
    "isolated": "isolated_peak",
    "shape": "shape_oscillation",
}
_DETECT_KIND = {
    "location": "location_scale",
    "isolated": "isolated_peak",
    "amplitude": "amplitude_scale",
    "shape": "amplitude_scale",  # severity sweeps amplify oscillations
}
_DEFAULT_DATASET = {
    "location_scale": "gbm",
    "isolated_peak": "sinusoid",
    "shape_oscillation": "sinusoid",
    "amplitude_scale": "gbm",
}


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="numba thread cap (default: HULLDEPTH_THREADS or all)")


def _threads(args) -> int | None:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("HULLDEPTH_THREADS")
    return int(env) if env else None


def _genspec(args, kind=None) -> GenSpec:
    return GenSpec(
        kind=kind or args.kind,
        n=args.n,
        p=args.p,
        seed=args.seed,
        mu=args.mu,
        sigma=math.sqrt(args.sigma2),
        x0=args.x0,
        coef_lo=args.lo,
        coef_hi=args.hi,
    )


def _add_gen_params(p):
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--p", type=int, default=100)
    p.add_argument("--mu", type=float, default=2.0, help="GBM drift")
    p.add_argument("--sigma2", type=float, default=0.5, help="GBM variance")
    p.add_argument("--x0", type=float, default=1.0, help="GBM start value")
    p.add_argument("--lo", type=float, default=0.0, help="sinusoid coefficient low")
    p.add_argument("--hi", type=float, default=0.05, help="sinusoid coefficient high")


def _parse_alphas(text: str):
    try:
        vals = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ValueError(f"bad --alphas value {text!r}; expected e.g. 0,5,10") from None
    if not vals:
        raise ValueError("--alphas is empty")
    return [v / 100.0 for v in vals]


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad --grid value {text!r}; expected lo:hi:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"bad --grid value {text!r}; expected lo:hi:count") from None
    if count < 1:
        raise ValueError("--grid count must be >= 1")
    return np.linspace(lo, hi, count)


def cmd_generate(args) -> int:
    spec = _genspec(args)
    batch = generate(spec)
    if args.anomaly is not None:
        aspec = AnomalySpec(kind=args.anomaly, fraction=args.fraction, seed=args.seed)
        batch, labels = inject(batch, aspec)
        labels_path = args.labels or (str(args.output) + ".labels.csv")
        write_labels_csv(batch.ids, labels, labels_path)
    write_csv(batch, args.output)
    return 0


def cmd_depth(args) -> int:
    if args.queries is not None and str(args.queries) == str(args.input):
        queries_path = None  # scoring the reference against itself
    else:
        queries_path = args.queries
    if str(args.output) in (str(args.input), str(args.queries)):
        raise ValueError("output path must differ from input paths")
    batch = read_csv(args.input, rescale=args.rescale)
    queries = read_csv(queries_path, rescale=args.rescale) if queries_path else batch
    config = DepthConfig(
        J=args.J,
        estimator="exact" if args.estimator == "exact" else "monte_carlo",
        K=args.K,
        averaged=args.averaged,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    report = depth_report(batch, queries, config, threads=_threads(args))
    elapsed = time.perf_counter() - t0
    report.write_csv(args.output)
    print(f"scored {len(queries)} queries against {len(batch)} curves "
          f"in {elapsed:.3f}s")
    return 0


def cmd_robustness(args) -> int:
    kind = _ROBUSTNESS_KIND[args.kind]
    dataset = args.dataset or _DEFAULT_DATASET[kind]
    spec = _genspec(args, kind=dataset)
    config = DepthConfig(J=args.J, estimator="monte_carlo", K=args.K,
                         averaged=args.averaged, seed=args.seed)
    alphas = _parse_alphas(args.alphas)
    result = robustness_bench(spec, [kind], alphas, config, reps=args.reps)
    result.write_csv(args.output)
    if args.json:
        result.write_json(args.json)
    return 0


def cmd_detect(args) -> int:
    kind = _DETECT_KIND[args.kind]
    dataset = args.dataset or _DEFAULT_DATASET[kind]
    spec = _genspec(args, kind=dataset)
    config = DepthConfig(J=args.J, estimator="monte_carlo", K=args.K,
                         averaged=args.averaged, seed=args.seed)
    severities = _parse_grid(args.grid)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    result = detection_bench(spec, kind, severities, args.m, config,
                             reps=args.reps, methods=methods)
    result.write_csv(args.output)
    if args.json:
        result.write_json(args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hulldepth",
        description="Convex-hull-area depth for sampled curves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic curve CSV")
    p.add_argument("--kind", choices=("gbm", "sinusoid"), required=True)
    _add_gen_params(p)
    p.add_argument("--anomaly", choices=ANOMALY_KINDS, default=None)
    p.add_argument("--fraction", type=float, default=0.1,
                   help="fraction of curves replaced when --anomaly is set")
    p.add_argument("--labels", default=None, help="labels CSV path")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("depth", help="score queries against a reference CSV")
    p.add_argument("--input", required=True, help="reference curves CSV")
    p.add_argument("--queries", default=None,
                   help="query curves CSV (default: score the reference itself)")
    p.add_argument("--J", type=int, default=2)
    p.add_argument("--K", type=int, default=None, help="Monte-Carlo draws (default 5n)")
    p.add_argument("--estimator", choices=("exact", "mc"), default="mc")
    p.add_argument("--averaged", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--rescale", action="store_true",
                   help="affinely map the input time span onto [0, 1]")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("robustness", help="ranking-stability sweep over contamination")
    p.add_argument("--kind", choices=tuple(_ROBUSTNESS_KIND), required=True)
    p.add_argument("--alphas", default="0,5,10,15,25,30",
                   help="comma-separated contamination percentages")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--dataset", choices=("gbm", "sinusoid"), default=None)
    _add_gen_params(p)
    p.add_argument("--J", type=int, default=2)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--averaged", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", default=None, help="JSON summary path")
    _add_common(p)
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("detect", help="anomaly-detection sweep over severity")
    p.add_argument("--kind", choices=tuple(_DETECT_KIND), required=True)
    p.add_argument("--grid", default="0:3:7", help="severity grid lo:hi:count")
    p.add_argument("--m", type=int, default=15, help="anomalies injected / flagged")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--methods", default="ach", help="comma list: ach,baseline")
    p.add_argument("--dataset", choices=("gbm", "sinusoid"), default=None)
    _add_gen_params(p)
    p.add_argument("--J", type=int, default=2)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--averaged", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", default=None, help="JSON summary path")
    _add_common(p)
    p.set_defaults(func=cmd_detect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own message
        return int(exc.code) if exc.code else 0
    try:
        if args.threads is not None or os.environ.get("HULLDEPTH_THREADS"):
            threads = _threads(args)
            if threads is not None:
                import numba

                numba.set_num_threads(
                    max(1, min(threads, numba.config.NUMBA_NUM_THREADS))
                )
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
