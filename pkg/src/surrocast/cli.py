"""Command-line interface for reproducible fit/forecast/simulate pipelines.

Every subcommand is a pure function of its inputs, flags, and seed: reruns
produce byte-identical outputs. Failures print one machine-readable JSON line
on stderr (fields ``code`` and ``detail``) and exit with status 3 for data
errors or 4 for numerical errors; argparse reports usage errors with 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .errors import (
    DataError,
    InvalidData,
    MissingExogenous,
    NumericalError,
    SurrocastError,
)
from .estimation import (
    fit_arx,
    fit_joint,
    joint_fit_from_dict,
    joint_fit_to_dict,
    residual_pairs,
)
from .forecasting import (
    FutureExogenous,
    Method,
    forecast_arx,
    forecast_ave,
    forecast_joint,
    forecast_rw,
)
from .intervals import BootstrapConfig, bj_interval, boot_interval, efficiency_gain
from .panels import (
    aggregate_daily,
    read_daily_csv,
    read_monthly_csv,
    read_surrogate_csv,
    standardize_cpi,
    standardize_z,
    write_surrogate_csv,
    _numbered_columns,
    _parse_float,
    _read_rows,
)
from .selection import correlation_pursuit
from .simulation import ExperimentGrid, run_experiment

__all__ = ["main"]


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [repr(float(v)) if isinstance(v, float) else v for v in row]
            )


def _read_future_csv(path: str) -> FutureExogenous:
    """Future covariate rows: ``month[,z_1..][,x_1..][,ys_1..]``."""
    header, rows = _read_rows(path)
    if header[:1] != ["month"]:
        raise InvalidData(f"{path}: header must start with 'month'")
    z_cols = _numbered_columns(header, "z_")
    x_cols = _numbered_columns(header, "x_")
    ys_cols = _numbered_columns(header, "ys_")
    H = len(rows)
    if H == 0:
        raise MissingExogenous(f"{path}: no future rows")

    def block(cols: list[int]) -> np.ndarray:
        out = np.empty((H, len(cols)))
        for i, row in enumerate(rows):
            if len(row) != len(header):
                raise InvalidData(f"{path}:{i + 2}: expected {len(header)} fields")
            for j, c in enumerate(cols):
                out[i, j] = _parse_float(row[c], f"{path}:{i + 2} {header[c]}")
        return out

    return FutureExogenous(block(z_cols), block(x_cols), block(ys_cols))


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# Subcommand implementations.
# ---------------------------------------------------------------------------

def _cmd_fit(args) -> int:
    mp = read_monthly_csv(args.monthly)
    sp = read_surrogate_csv(args.surrogate)
    jf, sf = fit_joint(mp, sp, args.q1, args.q2)
    doc = joint_fit_to_dict(jf, sf)
    with open(args.out, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")
    if args.residual_pairs:
        pairs = residual_pairs(jf, sf)
        header = ["e"] + [f"eps_s_{k + 1}" for k in range(sf.K)]
        _write_csv(args.residual_pairs, header,
                   [[float(v) for v in row] for row in pairs])
    print(f"fitted joint model (q1={args.q1}, q2={args.q2}) "
          f"on {mp.T} months -> {args.out}")
    return 0


def _load_fit_and_history(args):
    with open(args.fit) as fh:
        jf, sf = joint_fit_from_dict(json.load(fh))
    mp = read_monthly_csv(args.monthly)
    sp = read_surrogate_csv(args.surrogate)
    fut = _read_future_csv(args.future)
    return jf, sf, mp, sp, fut


def _cmd_forecast(args) -> int:
    jf, sf, mp, sp, fut = _load_fit_and_history(args)
    H = args.horizon
    rows = []
    fc = forecast_joint(jf, sf, mp, sp, fut, H)
    rows += [[Method.JOINT.value, h + 1, float(v)] for h, v in enumerate(fc.point)]
    ar = fit_arx(mp.y, jf.q1)
    fc_ar = forecast_arx(ar, mp.y, None, H, method=Method.AR)
    rows += [[Method.AR.value, h + 1, float(v)] for h, v in enumerate(fc_ar.point)]
    fc_rw = forecast_rw(mp.y, H)
    rows += [[Method.RW.value, h + 1, float(v)] for h, v in enumerate(fc_rw.point)]
    fc_ave = forecast_ave(mp.y, H)
    rows += [[Method.AVE.value, h + 1, float(v)] for h, v in enumerate(fc_ave.point)]
    _write_csv(args.out, ["method", "h", "point"], rows)
    print(f"wrote {len(rows)} forecast rows -> {args.out}")
    return 0


def _cmd_interval(args) -> int:
    jf, sf, mp, sp, fut = _load_fit_and_history(args)
    H = args.horizon
    fc = forecast_joint(jf, sf, mp, sp, fut, H)
    if args.method == "bj":
        iv = bj_interval(fc, jf, args.alpha)
    else:
        cfg = BootstrapConfig(B=args.B, seed=args.seed,
                              quantile_rule=args.quantile_rule)
        iv = boot_interval(jf, sf, mp, sp, fut, H, cfg, args.alpha)
    rows = [[h + 1, float(fc.point[h]), float(iv.lower[h]), float(iv.upper[h])]
            for h in range(H)]
    _write_csv(args.out, ["h", "point", "lower", "upper"], rows)
    print(f"{args.method} interval at alpha={args.alpha} -> {args.out}")
    return 0


def _cmd_select(args) -> int:
    mp = read_monthly_csv(args.monthly)
    if mp.p < 1:
        raise InvalidData("selection needs at least one x_ column")
    res = correlation_pursuit(
        mp.y, mp.x, args.q_max,
        min_decrease=args.min_decrease,
        rerank_each_step=args.rerank,
    )
    rows = [[0, "", float(res.aic_path[0]), 1]]
    for step, (col, aic) in enumerate(zip(res.chosen, res.aic_path[1:]), start=1):
        rows.append([step, col + 1, float(aic), 1])
    if res.rejected_aic is not None:
        rows.append([len(res.chosen) + 1, "", float(res.rejected_aic), 0])
    _write_csv(args.out, ["step", "column", "aic", "accepted"], rows)
    chosen = ", ".join(f"x_{j + 1}" for j in res.chosen) or "(none)"
    print(f"AR order {res.ar_order}; selected columns: {chosen}")
    return 0


def _cmd_simulate(args) -> int:
    grid = ExperimentGrid(
        rhos=tuple(_floats(args.rho_grid)),
        horizons=tuple(_ints(args.H_grid)),
        variant=args.variant,
        total_months=args.total_months,
        alpha=args.alpha,
        B=args.B,
        x_scale=args.x_scale,
        include_intervals=not args.skip_intervals,
        include_boot=not args.skip_boot,
        workers=args.workers,
    )
    report = run_experiment(grid, args.Q, args.seed)
    report.to_csv(args.out)
    print(f"{len(report.rows)} report rows (Q={args.Q}) -> {args.out}")
    return 0


def _parse_matrix(text: str) -> np.ndarray:
    return np.array([_floats(row) for row in text.split(";")])


def _cmd_efficiency(args) -> int:
    if args.sigma_ts is not None or args.sigma_ss is not None:
        if args.sigma_ts is None or args.sigma_ss is None:
            raise InvalidData("provide both --sigma-ts and --sigma-ss")
        sigma_ts = np.array(_floats(args.sigma_ts))
        sigma_ss = _parse_matrix(args.sigma_ss)
    else:
        sigma_ts = np.full(args.K, args.rho)
        sigma_ss = np.eye(args.K)
    value = efficiency_gain(args.sigma_tt, sigma_ts, sigma_ss)
    print(repr(value))
    return 0


def _cmd_aggregate_daily(args) -> int:
    idx = read_daily_csv(args.daily)
    sp = aggregate_daily(idx, K=args.K)
    write_surrogate_csv(args.out, sp)
    print(f"aggregated {len(idx.dates)} daily rows into {sp.T} months x K={sp.K} "
          f"-> {args.out}")
    return 0


def _cmd_standardize(args) -> int:
    header, rows = _read_rows(args.input)
    if len(header) != 2:
        raise InvalidData(f"{args.input}: expected a two-column CSV (label,value)")
    labels = [row[0] for row in rows]
    values = np.array([_parse_float(row[1], f"{args.input}:{i + 2}")
                       for i, row in enumerate(rows)])
    if args.mode == "cpi":
        std = standardize_cpi(values, base=args.base, train_size=args.train_size)
    else:
        std = standardize_z(values, train_size=args.train_size)
    _write_csv(args.out, header, [[lab, float(v)] for lab, v in zip(labels, std.values)])
    print(json.dumps({"offset": std.offset, "scale": std.scale}, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# Argument parsing.
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="surrocast",
        description="Surrogate-assisted time-series prediction pipelines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="two-step estimation of the joint model")
    p.add_argument("--monthly", required=True,
                   help="target panel CSV: month,y[,z_*][,x_*]")
    p.add_argument("--surrogate", required=True,
                   help="surrogate panel CSV: month,ys_1..ys_K")
    p.add_argument("--q1", type=int, default=2,
                   help="target autoregressive lag order (default 2)")
    p.add_argument("--q2", type=int, default=1,
                   help="surrogate autoregressive lag order (default 1)")
    p.add_argument("--out", required=True, help="output fit document (JSON)")
    p.add_argument("--residual-pairs", default=None,
                   help="optional CSV of aligned target/surrogate residuals")
    p.set_defaults(func=_cmd_fit)

    for name, helptext in (
        ("forecast", "multi-step point forecasts for all methods"),
        ("interval", "prediction interval around the joint forecast"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--fit", required=True, help="fit document from 'fit'")
        p.add_argument("--monthly", required=True, help="history target CSV")
        p.add_argument("--surrogate", required=True, help="history surrogate CSV")
        p.add_argument("--future", required=True,
                       help="future covariates CSV: month[,z_*][,x_*][,ys_*]")
        p.add_argument("--horizon", type=int, required=True,
                       help="number of months ahead to forecast")
        p.add_argument("--out", required=True, help="output CSV")
        if name == "forecast":
            p.set_defaults(func=_cmd_forecast)
        else:
            p.add_argument("--method", choices=("bj", "boot"), default="bj",
                           help="normal-quantile or residual-bootstrap interval")
            p.add_argument("--alpha", type=float, default=0.05,
                           help="interval miss rate (default 0.05)")
            p.add_argument("--B", type=int, default=500,
                           help="bootstrap replicates (default 500)")
            p.add_argument("--seed", type=int, default=0,
                           help="bootstrap resampling seed")
            p.add_argument("--quantile-rule", choices=("ceil", "linear"),
                           default="ceil", help="bootstrap quantile convention")
            p.set_defaults(func=_cmd_interval)

    p = sub.add_parser("select",
                       help="stepwise embedding-feature selection by corrected AIC")
    p.add_argument("--monthly", required=True,
                   help="training panel CSV with candidate x_ columns")
    p.add_argument("--q-max", type=int, default=4,
                   help="largest autoregressive order to consider (default 4)")
    p.add_argument("--min-decrease", type=float, default=1e-8,
                   help="required AIC improvement per accepted feature")
    p.add_argument("--rerank", action="store_true",
                   help="re-rank remaining candidates after each acceptance")
    p.add_argument("--out", required=True, help="output CSV of the AIC path")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("simulate", help="Monte Carlo evaluation harness")
    p.add_argument("--rho-grid", default="0.1,0.2,0.3,0.4",
                   help="comma-separated error-correlation levels")
    p.add_argument("--H-grid", default="8,9,10,11,12,13,14,15",
                   help="comma-separated holdout horizons")
    p.add_argument("--Q", type=int, default=500, help="repetitions per cell")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--variant", choices=("base", "omitted", "overfit", "student-t"),
                   default="base", help="robustness scenario")
    p.add_argument("--B", type=int, default=500,
                   help="bootstrap replicates per repetition")
    p.add_argument("--alpha", type=float, default=0.05, help="interval miss rate")
    p.add_argument("--total-months", type=int, default=60,
                   help="panel length before the H-month holdout")
    p.add_argument("--x-scale", type=float, default=6.0,
                   help="stationary sd of the synthetic embedding columns")
    p.add_argument("--skip-boot", action="store_true",
                   help="skip the bootstrap interval (much faster)")
    p.add_argument("--skip-intervals", action="store_true",
                   help="point-forecast metrics only")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel worker processes (same output as 1)")
    p.add_argument("--out", required=True, help="report CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("efficiency",
                       help="prediction-error variance ratio from the surrogate")
    p.add_argument("--sigma-tt", type=float, default=1.0,
                   help="target error variance")
    p.add_argument("--rho", type=float, default=0.1,
                   help="common target/surrogate error correlation")
    p.add_argument("--K", type=int, default=3, help="surrogate dimension")
    p.add_argument("--sigma-ts", default=None,
                   help="explicit cross-covariances, comma-separated")
    p.add_argument("--sigma-ss", default=None,
                   help="explicit surrogate covariance, rows separated by ';'")
    p.set_defaults(func=_cmd_efficiency)

    p = sub.add_parser("aggregate-daily",
                       help="average a daily index into per-month blocks")
    p.add_argument("--daily", required=True, help="daily CSV: date,score")
    p.add_argument("--K", type=int, default=3, help="blocks per month (default 3)")
    p.add_argument("--out", required=True, help="output surrogate CSV")
    p.set_defaults(func=_cmd_aggregate_daily)

    p = sub.add_parser("standardize", help="standardize a monthly value column")
    p.add_argument("--input", required=True, help="two-column CSV (label,value)")
    p.add_argument("--mode", choices=("cpi", "z"), default="cpi",
                   help="'cpi': center at --base; 'z': center at the mean")
    p.add_argument("--base", type=float, default=100.0,
                   help="structural base value for cpi mode")
    p.add_argument("--train-size", type=int, default=None,
                   help="rows used for the spread estimate (default: all)")
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=_cmd_standardize)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as err:
        print(json.dumps({"code": err.code, "detail": str(err)}), file=sys.stderr)
        return 3
    except NumericalError as err:
        print(json.dumps({"code": err.code, "detail": str(err)}), file=sys.stderr)
        return 4
    except SurrocastError as err:  # future subclasses outside the two families
        print(json.dumps({"code": err.code, "detail": str(err)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
