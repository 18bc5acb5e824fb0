"""Command-line entry point.

Subcommands: ``sweep`` runs a config file, ``figure`` reproduces a preset
experiment, ``verify`` runs the check suites, ``bound`` evaluates an error
bound.  Exit codes: 0 success, 1 verification failure, 2 usage or parse
error, 3 violated theorem hypothesis.

The environment variable MOMLAB_SEED, when set, overrides the master seed.
"""

import argparse
import math
import os
import sys
from pathlib import Path

from . import __version__
from .checks import SUITE_NAMES, run_suites
from .config import dump_config, parse_config, parse_dist
from .distributions import block_mean_quantile_analytic
from .errors import ConfigError, HypothesisError, NumericError, ParameterError
from .estimators import MedianOfMeans
from .harness import (
    DEFAULT_MASTER_SEED,
    FIGURE_IDS,
    RESULTS_COLUMNS,
    SLOPE_COLUMNS,
    fit_slope,
    figure_preset,
    results_rows,
    run_sweep,
    slope_rows,
    write_csv,
)
from .svg import render_loglog_svg
from .theory import bound_finite_variance, bound_general_quantile, bound_infinite_variance


def _master_seed(default: int) -> int:
    env = os.environ.get("MOMLAB_SEED")
    return int(env) if env else default


def _curve_points(rows):
    curves = {}
    for row in rows:
        key = f"{row['label']}:{row['estimator']}"
        curves.setdefault(key, []).append((float(row["alpha"]), float(row["error_q"])))
    return curves


def cmd_sweep(args) -> int:
    text = Path(args.config).read_text()
    config = parse_config(text)
    if args.dump_config:
        sys.stdout.write(dump_config(config))
        return 0
    seed = _master_seed(config.seed)
    if seed != config.seed:
        from dataclasses import replace

        config = replace(config, seed=seed)
    threads = args.threads if args.threads else config.threads
    out_dir = Path(args.out if args.out else config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    plan = config.to_plan()
    records = run_sweep(plan, threads=threads)
    rows = results_rows(plan, records)
    write_csv(out_dir / "results.csv", RESULTS_COLUMNS, rows)
    print(f"wrote {out_dir / 'results.csv'} ({len(rows)} rows)")
    if config.emit_svg:
        svg = render_loglog_svg(_curve_points(rows), plan.label, plan.reference_slope, __version__)
        (out_dir / "sweep.svg").write_text(svg)
        print(f"wrote {out_dir / 'sweep.svg'}")
    return 0


def cmd_figure(args) -> int:
    preset = figure_preset(args.id, args.scale, _master_seed(DEFAULT_MASTER_SEED))
    plans = preset if isinstance(preset, list) else [preset]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    all_rows, slope_table = [], []
    reference_slope = plans[0].reference_slope
    for plan in plans:
        records = run_sweep(plan, threads=args.threads)
        all_rows.extend(results_rows(plan, records))
        window = (plan.alpha_grid[0], plan.alpha_grid[-1])
        by_est = {}
        for rec in records:
            by_est.setdefault(rec.estimator, []).append(rec)
        for est_label, recs in sorted(by_est.items()):
            fit = fit_slope(recs, window)
            slope_table.append(slope_rows(plan.label, est_label, fit))
            print(f"{plan.label} {est_label}: slope {fit.slope:.4f} (r2 {fit.r_squared:.3f})")
    write_csv(out_dir / "results.csv", RESULTS_COLUMNS, all_rows)
    write_csv(out_dir / "slopes.csv", SLOPE_COLUMNS, slope_table)
    svg = render_loglog_svg(
        _curve_points(all_rows), f"figure {args.id}", reference_slope, __version__
    )
    (out_dir / f"figure-{args.id}.svg").write_text(svg)
    print(f"wrote {out_dir / 'results.csv'}, {out_dir / 'slopes.csv'}, {out_dir / f'figure-{args.id}.svg'}")
    return 0


def cmd_verify(args) -> int:
    suites = SUITE_NAMES if args.suite == "all" else (args.suite,)
    rows = run_suites(suites, master_seed=_master_seed(args.seed), threads=args.threads)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = [
        {
            "suite": row.suite,
            "check": row.check,
            "anchor": row.anchor,
            "measured": repr(row.measured),
            "comparison": row.comparison,
            "threshold": repr(row.threshold),
            "passed": "pass" if row.passed else "FAIL",
        }
        for row in rows
    ]
    write_csv(out_dir / "verify.csv", list(report[0].keys()), report)
    failures = 0
    for row in rows:
        status = "pass" if row.passed else "FAIL"
        print(f"[{status}] {row.suite}/{row.check}: {row.measured:.6g} {row.comparison} {row.threshold:.6g} ({row.anchor})")
        failures += 0 if row.passed else 1
    print(f"{len(rows) - failures}/{len(rows)} checks passed; report at {out_dir / 'verify.csv'}")
    return 0 if failures == 0 else 1


def cmd_bound(args) -> int:
    params, constant, value, regime = "", "", 0.0, ""
    if args.theorem == "3.2":
        if args.sigma is None or args.gamma is None:
            raise ParameterError("theorem 3.2 needs --gamma and --sigma")
        bv = bound_finite_variance(args.n, args.alpha, args.delta, args.gamma, args.sigma)
        params = f"gamma={args.gamma:g};sigma={args.sigma:g}"
        constant, value, regime = repr(bv.constant_used), bv.value, bv.regime
    elif args.theorem == "3.3":
        if args.gamma is None or args.r is None or args.v_r is None:
            raise ParameterError("theorem 3.3 needs --gamma, --r and --v-r")
        bv = bound_infinite_variance(
            args.n, args.alpha, args.delta, args.gamma, args.v_r, args.r, args.constant
        )
        params = f"gamma={args.gamma:g};r={args.r:g};v_r={args.v_r:g}"
        constant, value, regime = repr(bv.constant_used), bv.value, bv.regime
    else:  # 3.1
        if args.k is None or args.m is None or args.dist is None:
            raise ParameterError("theorem 3.1 needs --k, --m and --dist")
        dist = parse_dist(args.dist)
        if block_mean_quantile_analytic(dist, 1, 0.5) is None:
            raise ParameterError(f"no analytic block-mean quantile for {args.dist!r}")
        value = bound_general_quantile(
            lambda q: block_mean_quantile_analytic(dist, args.m, q),
            args.k, args.m, args.alpha, args.delta,
        )
        params = f"k={args.k};m={args.m};dist={args.dist}"
        s = math.sqrt(math.log(2.0 / args.delta) / (2.0 * args.k))
        regime = "iid_term_dominant" if s >= args.alpha * args.m else "bias_term_dominant"
    print("theorem,n,alpha,delta,params,constant,value,regime")
    print(
        f"{args.theorem},{args.n},{args.alpha!r},{args.delta!r},{params},{constant},{value!r},{regime}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momlab",
        description="median-of-means contamination experiments, bounds, and checks",
    )
    parser.add_argument("--version", action="version", version=f"momlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a sweep from a config file")
    p.add_argument("config")
    p.add_argument("--dump-config", action="store_true", help="print the canonical config and exit")
    p.add_argument("--out", default=None, help="output directory (overrides config)")
    p.add_argument("--threads", type=int, default=0, help="worker threads (overrides config)")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("figure", help="reproduce a preset figure experiment")
    p.add_argument("id", help=f"one of {', '.join(FIGURE_IDS)}")
    p.add_argument("--scale", type=float, default=0.1, help="sample-size scale factor")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_figure)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=SUITE_NAMES + ("all",))
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bound", help="evaluate an error bound as CSV")
    p.add_argument("--theorem", choices=("3.2", "3.3", "3.1"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--v-r", dest="v_r", type=float, default=None)
    p.add_argument("--constant", type=float, default=None, help="override the 3.3 constant")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--dist", default=None, help="gaussian(mu, sigma) or negexp(rate)")
    p.set_defaults(fn=cmd_bound)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except (HypothesisError, NumericError) as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
