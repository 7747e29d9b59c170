import math

import numpy as np
import pytest

from cfselect import ExperimentConfig, RingId, gen_channel
from cfselect.bench import (
    CSV_HEADER,
    rows_to_csv,
    run_complexity_experiment,
    run_rate_experiment,
    scaling_check,
)
from cfselect.cli import main
from cfselect.errors import ConfigError
from cfselect.flops import FlopCounter
from cfselect.thresholds import ThresholdBin, make_table, serialize

ZI = RingId.GAUSSIAN


def test_gen_channel_moments():
    rng = np.random.default_rng(0)
    h = np.concatenate([gen_channel(4, rng).h for _ in range(25_000)])
    assert abs(np.mean(np.abs(h) ** 2) - 1.0) < 0.02
    assert abs(np.mean(np.abs(h)) - math.sqrt(math.pi / 4)) < 0.02


def test_gen_channel_deterministic():
    a = gen_channel(6, np.random.default_rng(42)).h
    b = gen_channel(6, np.random.default_rng(42)).h
    assert np.array_equal(a, b)


def test_flop_counter_identity():
    c = FlopCounter()
    c.add(cmul=1, cadd=1)  # one complex multiply-accumulate
    assert c.total_flops == 8
    c.add(cmul=3, cadd=5)
    assert c.total_flops == 2 * c.complex_adds + 6 * c.complex_muls


def test_single_user_rates_age_equal_for_all_algorithms():
    table = make_table(ZI, {1: (ThresholdBin(5.0, 99.0, 0.5),)}, 1, 0)
    cfg = ExperimentConfig(
        ring=ZI,
        users=1,
        snr_points_db=(13.0,),
        trials=1,
        seed=7,
        algorithms=("ex1", "ex2", "ll", "clll", "linear"),
        table=table,
    )
    rows = run_rate_experiment(cfg)
    snr = 10.0 ** 1.3
    for r in rows:
        assert abs(r.mean_rate - math.log2(1 + snr)) < 1e-9


def test_csv_schema_and_determinism():
    cfg = dict(
        ring=ZI,
        users=2,
        snr_points_db=(5.0, 10.0),
        trials=4,
        seed=3,
        algorithms=("ex2", "clll"),
    )
    rows1 = run_rate_experiment(ExperimentConfig(**cfg))
    rows2 = run_rate_experiment(ExperimentConfig(**cfg))
    csv1, csv2 = rows_to_csv(rows1), rows_to_csv(rows2)
    assert csv1 == csv2
    assert csv1.splitlines()[0] == CSV_HEADER
    assert len(csv1.splitlines()) == 1 + 2 * 2


def test_paired_trials_share_channels():
    cfg = ExperimentConfig(
        ring=ZI,
        users=1,
        snr_points_db=(20.0,),
        trials=6,
        seed=11,
        algorithms=("ex2", "ll", "clll"),
    )
    rows = run_rate_experiment(cfg)
    # single-user: every algorithm is exact, so paired channels mean
    # identical statistics across algorithms
    assert len({(r.mean_rate, r.rate_std) for r in rows}) == 1


def test_complexity_experiment_counts_flops():
    cfg = ExperimentConfig(
        ring=ZI,
        users=2,
        snr_points_db=(10.0,),
        trials=3,
        seed=1,
        algorithms=("ex2", "ll"),
    )
    rows = run_complexity_experiment(cfg)
    by = {r.algorithm: r for r in rows}
    assert by["ex2"].mean_flops > 0 and by["ll"].mean_flops > 0


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(ring=ZI, users=2, snr_points_db=(), trials=1, seed=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(ring=ZI, users=2, snr_points_db=(5,), trials=0, seed=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(
            ring=ZI, users=2, snr_points_db=(5,), trials=1, seed=0, algorithms=("nope",)
        )
    with pytest.raises(ConfigError):
        ExperimentConfig(
            ring=ZI, users=2, snr_points_db=(5,), trials=1, seed=0, algorithms=("linear",)
        )


def test_scaling_check_requires_two_decades():
    cfg = ExperimentConfig(
        ring=ZI, users=2, snr_points_db=(10.0, 15.0), trials=2, seed=0
    )
    with pytest.raises(ConfigError):
        scaling_check(cfg)


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def test_cli_select(capsys):
    rc = main(
        [
            "select",
            "--h",
            "1,0;0.7071,0.7071",
            "--ring",
            "zi",
            "--snr-db",
            "20",
            "--algorithms",
            "ex2,clll",
        ]
    )
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("rate =") == 2
    assert "ex2:" in out and "clll:" in out


def test_cli_rate_bench_stdout(capsys):
    rc = main(
        [
            "rate-bench",
            "--ring",
            "zw",
            "--users",
            "2",
            "--snr",
            "5,10",
            "--trials",
            "3",
            "--seed",
            "2",
            "--algorithms",
            "ex2",
        ]
    )
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines()[0] == CSV_HEADER
    assert len(out.splitlines()) == 3


def test_cli_gen_table_and_flops_bench(tmp_path, capsys):
    table_path = tmp_path / "theta.txt"
    rc = main(
        [
            "gen-table",
            "--ring",
            "zi",
            "--users",
            "2",
            "--snr-bins",
            "5,10",
            "--trials",
            "8",
            "--seed",
            "1",
            "--table-out",
            str(table_path),
        ]
    )
    assert rc == 0
    text = table_path.read_text()
    assert text.startswith("zi,1,8,1")
    rc = main(
        [
            "flops-bench",
            "--ring",
            "zi",
            "--users",
            "2",
            "--snr",
            "7",
            "--trials",
            "2",
            "--seed",
            "0",
            "--algorithms",
            "ex2,linear",
            "--table",
            str(table_path),
        ]
    )
    out = capsys.readouterr().out
    assert rc == 0
    rows = out.strip().splitlines()[1:]
    assert all(float(r.split(",")[4]) > 0 for r in rows)  # mean_flops column


def test_cli_exit_codes(capsys):
    assert main(["rate-bench", "--algorithms", "bogus", "--snr", "5", "--trials", "1"]) == 2
    assert main(["rate-bench", "--algorithms", "linear", "--snr", "5", "--trials", "1"]) == 2
    # enumeration budget: ex1 at high SNR with 3 users must refuse
    rc = main(
        [
            "rate-bench",
            "--users",
            "3",
            "--snr",
            "40",
            "--trials",
            "1",
            "--seed",
            "0",
            "--algorithms",
            "ex1",
        ]
    )
    assert rc == 3
    capsys.readouterr()
