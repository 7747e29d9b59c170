"""Experiment harness: seeded channels, rate/complexity sweeps, CSV output.

All algorithms inside one run see identical channels per trial index
(paired comparisons), and the channel stream is split per trial from the
run seed, so any (config, seed) pair reproduces byte-identical CSV.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, ConfigError
from .flops import FlopCounter
from .rate import Channel
from .rings import RingId, spec_of
from .selectors import (
    DEFAULT_EX1_BUDGET,
    exhaustive_select,
    linear_select,
    lll_select,
    midpoint_select,
    vertex_select,
)
from .thresholds import ThresholdTable

CSV_HEADER = "snr_db,algorithm,mean_rate,rate_std,mean_flops,mean_candidates,trials"

ALGORITHM_NAMES = ("ex1", "ex2", "ll", "clll", "linear")


@dataclass
class ExperimentConfig:
    ring: RingId
    users: int
    snr_points_db: tuple[float, ...]
    trials: int
    seed: int
    algorithms: tuple[str, ...] = ("ex2", "ll", "clll")
    table: ThresholdTable | None = None
    count_flops: bool = False
    ex1_budget: float = DEFAULT_EX1_BUDGET

    def __post_init__(self):
        self.snr_points_db = tuple(float(s) for s in self.snr_points_db)
        self.algorithms = tuple(self.algorithms)
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.users < 1:
            raise ConfigError("users must be >= 1")
        if not self.snr_points_db:
            raise ConfigError("need at least one SNR point")
        unknown = set(self.algorithms) - set(ALGORITHM_NAMES)
        if unknown:
            raise ConfigError(f"unknown algorithms: {sorted(unknown)}")
        if "linear" in self.algorithms and self.table is None:
            raise ConfigError("the linear search needs a threshold table")


@dataclass(frozen=True)
class ResultRow:
    snr_db: float
    algorithm: str
    mean_rate: float
    rate_std: float
    mean_flops: float
    mean_candidates: float
    trials: int


@dataclass
class ScalingReport:
    snr_slope_ex2: float
    snr_slope_linear: float | None
    l_flops_exponent: float
    hmax_checks: dict[int, tuple[float, float]]
    linear_candidate_ratio: float | None
    rows: list[ResultRow] = field(default_factory=list)


def gen_channel(nusers: int, rng: np.random.Generator, snr: float = 1.0) -> Channel:
    """One Rayleigh-fading draw: i.i.d. unit-variance circular Gaussians."""
    h = (rng.standard_normal(nusers) + 1j * rng.standard_normal(nusers)) / math.sqrt(2.0)
    return Channel(h, snr=snr)


def _run_algorithm(name: str, ch: Channel, cfg: ExperimentConfig, counter):
    if name == "ex1":
        return exhaustive_select(ch, cfg.ring, budget=cfg.ex1_budget, counter=counter)
    if name == "ex2":
        return vertex_select(ch, cfg.ring, counter=counter)
    if name == "ll":
        return midpoint_select(ch, cfg.ring, counter=counter)
    if name == "clll":
        return lll_select(ch, cfg.ring, counter=counter)
    if name == "linear":
        return linear_select(ch, cfg.ring, cfg.table, counter=counter)
    raise ConfigError(f"unknown algorithm {name!r}")


def _collect(cfg: ExperimentConfig) -> list[ResultRow]:
    rates = {(s, a): np.zeros(cfg.trials) for s in cfg.snr_points_db for a in cfg.algorithms}
    flops = {k: np.zeros(cfg.trials) for k in rates}
    cands = {k: np.zeros(cfg.trials) for k in rates}
    for t in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, t])
        base = gen_channel(cfg.users, rng)
        for snr_db in cfg.snr_points_db:
            ch = base.with_snr(10.0 ** (snr_db / 10.0))
            for alg in cfg.algorithms:
                counter = FlopCounter() if cfg.count_flops else None
                try:
                    res = _run_algorithm(alg, ch, cfg, counter)
                except BudgetExceededError as exc:
                    raise BudgetExceededError(f"trial {t}, {alg}: {exc}") from exc
                key = (snr_db, alg)
                rates[key][t] = res.rate
                cands[key][t] = res.candidates_examined
                if counter is not None:
                    flops[key][t] = counter.total_flops
    rows = []
    for snr_db in cfg.snr_points_db:
        for alg in cfg.algorithms:
            key = (snr_db, alg)
            rows.append(
                ResultRow(
                    snr_db=snr_db,
                    algorithm=alg,
                    mean_rate=float(np.mean(rates[key])),
                    rate_std=float(np.std(rates[key])),
                    mean_flops=float(np.mean(flops[key])),
                    mean_candidates=float(np.mean(cands[key])),
                    trials=cfg.trials,
                )
            )
    return rows


def run_rate_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Mean/std of the achieved rate per (SNR point, algorithm)."""
    return _collect(cfg)


def run_complexity_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Like the rate sweep but with flop counting forced on."""
    if not cfg.count_flops:
        cfg = ExperimentConfig(
            ring=cfg.ring,
            users=cfg.users,
            snr_points_db=cfg.snr_points_db,
            trials=cfg.trials,
            seed=cfg.seed,
            algorithms=cfg.algorithms,
            table=cfg.table,
            count_flops=True,
            ex1_budget=cfg.ex1_budget,
        )
    return _collect(cfg)


def _loglog_slope(x, y):
    return float(np.polyfit(np.log10(np.asarray(x)), np.log10(np.asarray(y)), 1)[0])


def scaling_check(cfg: ExperimentConfig, hmax_draws: int = 100_000) -> ScalingReport:
    """Growth-rate diagnostics for the exact and sampled searches.

    Requires an SNR grid spanning at least two decades.  Reports the
    log-log slope of exact-search candidate counts versus SNR, the
    flop-growth exponent between L and 2L, the empirical max-gain second
    moment against its 4 log(L) / (1 - 1/L) bound, and (when a table is
    available) the linear-search sample-grid growth.  Grid sizes, not
    examined counts, are the complexity object for the sampled search:
    the early-exit bound makes examined counts sublinear in SNR.
    """
    pts = sorted(cfg.snr_points_db)
    if 10.0 ** ((pts[-1] - pts[0]) / 10.0) < 100.0:
        raise ConfigError("scaling check needs an SNR grid spanning >= 2 decades")
    base = ExperimentConfig(
        ring=cfg.ring,
        users=cfg.users,
        snr_points_db=tuple(pts),
        trials=cfg.trials,
        seed=cfg.seed,
        algorithms=("ex2",),
        count_flops=True,
    )
    rows = _collect(base)
    by = {(r.snr_db, r.algorithm): r for r in rows}
    snr_lin = [10.0 ** (s / 10.0) for s in pts]
    slope_ex2 = _loglog_slope(snr_lin, [by[(s, "ex2")].mean_candidates for s in pts])

    mid = pts[len(pts) // 2]
    flops_small = by[(mid, "ex2")].mean_flops
    big = ExperimentConfig(
        ring=cfg.ring,
        users=2 * cfg.users,
        snr_points_db=(mid,),
        trials=cfg.trials,
        seed=cfg.seed,
        algorithms=("ex2",),
        count_flops=True,
    )
    big_rows = _collect(big)
    rows.extend(big_rows)
    l_exponent = math.log(big_rows[0].mean_flops / flops_small) / math.log(2.0)

    hmax_checks = {}
    for nusers in (cfg.users, 2 * cfg.users):
        rng = np.random.default_rng([cfg.seed, 987, nusers])
        h = (
            rng.standard_normal((hmax_draws, nusers))
            + 1j * rng.standard_normal((hmax_draws, nusers))
        ) / math.sqrt(2.0)
        emp = float(np.mean(np.max(np.abs(h) ** 2, axis=1)))
        bound = 4.0 * math.log(nusers) / (1.0 - 1.0 / nusers)
        hmax_checks[nusers] = (emp, bound)

    slope_linear = None
    linear_ratio = None
    if cfg.table is not None:
        from .selectors import _sample_grid
        from .thresholds import lookup

        grid_means = []
        for snr_db in pts:
            gamma = lookup(cfg.table, cfg.users, snr_db)
            if gamma is None:
                grid_means.append(np.nan)
                continue
            sizes = np.zeros(cfg.trials)
            for t in range(cfg.trials):
                rng = np.random.default_rng([cfg.seed, t])
                ch = gen_channel(cfg.users, rng, snr=10.0 ** (snr_db / 10.0))
                grid, _ = _sample_grid(ch, cfg.ring, gamma)
                sizes[t] = 0 if grid is None else grid[0].size
            grid_means.append(float(sizes.mean()))
        ok = ~np.isnan(grid_means)
        if ok.sum() >= 2:
            slope_linear = _loglog_slope(
                np.asarray(snr_lin)[ok], np.asarray(grid_means)[ok]
            )
        top = pts[-1]
        gamma = lookup(cfg.table, cfg.users, top)
        if gamma is not None and not np.isnan(grid_means[-1]):
            snr = 10.0 ** (top / 10.0)
            area = spec_of(cfg.ring).fundamental_area
            predicted = snr * hmax_checks[cfg.users][0] / (gamma * gamma * area)
            linear_ratio = grid_means[-1] / predicted

    return ScalingReport(
        snr_slope_ex2=slope_ex2,
        snr_slope_linear=slope_linear,
        l_flops_exponent=l_exponent,
        hmax_checks=hmax_checks,
        linear_candidate_ratio=linear_ratio,
        rows=rows,
    )


def write_csv(rows, fh) -> None:
    fh.write(CSV_HEADER + "\n")
    for r in rows:
        fh.write(
            f"{r.snr_db:.10g},{r.algorithm},{r.mean_rate:.10g},{r.rate_std:.10g},"
            f"{r.mean_flops:.10g},{r.mean_candidates:.10g},{r.trials}\n"
        )


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()
