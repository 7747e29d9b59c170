"""Command-line interface.

Subcommands: ``gen-table``, ``rate-bench``, ``flops-bench``,
``scaling-check``, ``select``.  Results go to stdout or ``--out`` as CSV.
Exit codes: 0 success, 2 configuration error, 3 enumeration budget error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench, thresholds
from .errors import BudgetExceededError, CfselectError, ConfigError
from .rate import Channel
from .rings import RingId
from .selectors import (
    exhaustive_select,
    linear_select,
    lll_select,
    midpoint_select,
    vertex_select,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3


def _ring(text: str) -> RingId:
    try:
        return RingId(text)
    except ValueError:
        raise ConfigError(f"unknown ring {text!r} (use zi or zw)") from None


def _float_list(text: str) -> list[float]:
    """Parse '5,10,15' or '5:40:5' into a list of floats."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ConfigError(f"bad range {text!r}, expected lo:hi:step")
        lo, hi, step = parts
        out = []
        v = lo
        while v <= hi + 1e-9:
            out.append(round(v, 9))
            v += step
        return out
    return [float(p) for p in text.split(",") if p]


def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p]


def _parse_h(text: str) -> np.ndarray:
    comps = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        re_im = part.split(",")
        if len(re_im) != 2:
            raise ConfigError(f"bad channel component {part!r}, expected re,im")
        comps.append(complex(float(re_im[0]), float(re_im[1])))
    if not comps:
        raise ConfigError("empty channel vector")
    return np.asarray(comps)


def _load_table(path: str | None):
    if path is None:
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return thresholds.parse(fh.read())


def _emit(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_common(p):
    p.add_argument("--ring", default="zi", help="integer domain: zi or zw")
    p.add_argument("--users", default="5", help="number of users")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")


def _cmd_gen_table(args) -> int:
    users = _int_list(args.users)
    edges = _float_list(args.snr_bins)
    table = thresholds.build_table(
        _ring(args.ring), users, edges, trials=args.trials, seed=args.seed
    )
    _emit(thresholds.serialize(table), args.table_out)
    return EXIT_OK


def _bench_config(args, count_flops: bool) -> bench.ExperimentConfig:
    return bench.ExperimentConfig(
        ring=_ring(args.ring),
        users=int(args.users),
        snr_points_db=tuple(_float_list(args.snr)),
        trials=args.trials,
        seed=args.seed,
        algorithms=tuple(args.algorithms.split(",")),
        table=_load_table(args.table),
        count_flops=count_flops,
    )


def _cmd_rate_bench(args) -> int:
    rows = bench.run_rate_experiment(_bench_config(args, count_flops=False))
    _emit(bench.rows_to_csv(rows), args.out)
    return EXIT_OK


def _cmd_flops_bench(args) -> int:
    rows = bench.run_complexity_experiment(_bench_config(args, count_flops=True))
    _emit(bench.rows_to_csv(rows), args.out)
    return EXIT_OK


def _cmd_scaling_check(args) -> int:
    args.algorithms = "ex2"
    report = bench.scaling_check(_bench_config(args, count_flops=True))
    lines = [
        f"ex2 candidate-count slope vs SNR: {report.snr_slope_ex2:.4f}",
        f"ex2 flop-growth exponent L -> 2L: {report.l_flops_exponent:.4f}",
    ]
    if report.snr_slope_linear is not None:
        lines.append(f"linear sample-grid slope vs SNR: {report.snr_slope_linear:.4f}")
    if report.linear_candidate_ratio is not None:
        lines.append(
            f"linear grid size / predicted: {report.linear_candidate_ratio:.4f}"
        )
    for nusers, (emp, bound) in sorted(report.hmax_checks.items()):
        ok = "ok" if emp <= bound else "VIOLATED"
        lines.append(
            f"E[max |h_l|^2] at L={nusers}: {emp:.4f} <= bound {bound:.4f} [{ok}]"
        )
    _emit("\n".join(lines) + "\n" + bench.rows_to_csv(report.rows), args.out)
    return EXIT_OK


def _cmd_select(args) -> int:
    ring = _ring(args.ring)
    h = _parse_h(args.h)
    ch = Channel(h, snr=10.0 ** (args.snr_db / 10.0))
    table = _load_table(args.table)
    runners = {
        "ex1": lambda: exhaustive_select(ch, ring),
        "ex2": lambda: vertex_select(ch, ring),
        "ll": lambda: midpoint_select(ch, ring),
        "clll": lambda: lll_select(ch, ring),
        "linear": lambda: linear_select(ch, ring, table),
    }
    out = []
    for name in args.algorithms.split(","):
        if name not in runners:
            raise ConfigError(f"unknown algorithm {name!r}")
        if name == "linear" and table is None:
            raise ConfigError("the linear search needs --table")
        res = runners[name]()
        coeffs = " ".join(repr(e) for e in res.coeffs.elements)
        out.append(
            f"{name}: a = [{coeffs}]  rate = {res.rate:.6f}  "
            f"alpha = {res.alpha.real:.6f}{res.alpha.imag:+.6f}i  "
            f"candidates = {res.candidates_examined}"
        )
    _emit("\n".join(out) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfselect",
        description="Coefficient selection for compute-and-forward relaying.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-table", help="build a step-size threshold table")
    p.add_argument("--ring", default="zi")
    p.add_argument("--users", default="5,10", help="comma-separated user counts")
    p.add_argument("--snr-bins", default="5:40:5", help="bin edges in dB")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--table-out", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_gen_table)

    p = sub.add_parser("rate-bench", help="average-rate comparison sweep")
    _add_common(p)
    p.add_argument("--snr", default="5:40:5", help="SNR points in dB")
    p.add_argument("--algorithms", default="ex2,ll,clll")
    p.add_argument("--table", default=None, help="threshold table path")
    p.set_defaults(func=_cmd_rate_bench)

    p = sub.add_parser("flops-bench", help="flop-counted complexity sweep")
    _add_common(p)
    p.add_argument("--snr", default="5:40:5")
    p.add_argument("--algorithms", default="ex2,ll,linear")
    p.add_argument("--table", default=None)
    p.set_defaults(func=_cmd_flops_bench)

    p = sub.add_parser("scaling-check", help="growth-rate diagnostics")
    _add_common(p)
    p.add_argument("--snr", default="10,20,30")
    p.add_argument("--table", default=None)
    p.set_defaults(func=_cmd_scaling_check)

    p = sub.add_parser("select", help="run selectors on one explicit channel")
    p.add_argument("--h", required=True, help='channel as "re,im;re,im;..."')
    p.add_argument("--ring", default="zi")
    p.add_argument("--snr-db", type=float, default=20.0)
    p.add_argument("--algorithms", default="ex2,ll,clll")
    p.add_argument("--table", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_select)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, CfselectError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
