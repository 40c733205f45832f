"""Exit-code contract, config round-trip, CSV reproducibility, smoke runs."""

import dataclasses

import pytest

from mlpicard.cli import (
    CONFIG_GRAMMAR,
    ConfigError,
    RunConfig,
    main,
    parse_config,
    serialize_config,
)
from mlpicard.oracles import allen_cahn_reference


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def stdout_fields(out: str) -> dict:
    fields = {}
    for line in out.splitlines():
        if " = " in line:
            key, value = line.split(" = ", 1)
            fields[key] = value
    return fields


def strip_wall(text: str) -> list:
    return [",".join(line.split(",")[:-1]) for line in text.splitlines()]


# configuration ---------------------------------------------------------------


def test_config_round_trip_default_and_modified():
    for config in (
        RunConfig(),
        dataclasses.replace(RunConfig(), dimension=10, radius=3.5,
                            n_list=(0, 1, 2), a=-0.25, oracle_kind="fd",
                            times=(0.0, 0.5), kappa=1.5, data="cosine_mean"),
    ):
        assert parse_config(serialize_config(config)) == config


def test_config_rejects_unknown_key_and_section():
    with pytest.raises(ConfigError):
        parse_config("[problem]\nwibble = 3\n")
    with pytest.raises(ConfigError):
        parse_config("[wibble]\nx = 3\n")
    with pytest.raises(ConfigError):
        parse_config("[problem]\ndimension = banana\n")


def test_help_config_prints_grammar(capsys):
    code, out, _ = run(capsys, "--help-config")
    assert code == 0
    assert out == CONFIG_GRAMMAR


# exit codes ------------------------------------------------------------------


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "8/8 checks passed" in out


def test_estimate_default_prints_datum(capsys):
    code, out, _ = run(capsys, "estimate")
    assert code == 0
    fields = stdout_fields(out)
    assert fields["value_mean"] == "2.0"
    assert fields["draws"] == "1"
    assert fields["cost_model"] == "3"


def test_estimate_zero_levels(tmp_path, capsys):
    cfg = tmp_path / "n0.ini"
    cfg.write_text("[estimator]\nlevels = 0\n", encoding="utf-8")
    code, out, _ = run(capsys, "estimate", "--config", str(cfg))
    assert code == 0
    fields = stdout_fields(out)
    assert fields["value_mean"] == "0.0"
    assert fields["draws"] == "0"


def test_bad_config_value_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[problem]\ndimension = banana\n", encoding="utf-8")
    code, _, err = run(capsys, "estimate", "--config", str(cfg))
    assert code == 2
    assert "config error" in err


def test_missing_config_file_exits_2(capsys):
    code, _, err = run(capsys, "estimate", "--config", "/nonexistent.ini")
    assert code == 2
    assert "config" in err


def test_unknown_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "unknown.ini"
    cfg.write_text("[estimator]\nbogus = 1\n", encoding="utf-8")
    code, _, err = run(capsys, "estimate", "--config", str(cfg))
    assert code == 2
    assert "bogus" in err


def test_numeric_failure_exits_3(tmp_path, capsys):
    # strongly expanding linear ODE: RK4 step-doubling check fails
    cfg = tmp_path / "blow.ini"
    cfg.write_text(
        "[problem]\nnonlinearity = linear\na = 60.0\nhorizon = 1.0\n",
        encoding="utf-8",
    )
    code, _, err = run(capsys, "oracle", "--config", str(cfg),
                       "--out", str(tmp_path / "x.csv"))
    assert code == 3
    assert "numeric failure" in err


def test_cap_exceeded_exits_4(tmp_path, capsys):
    cfg = tmp_path / "cap.ini"
    cfg.write_text(
        "[experiment]\nconstants = surrogate\nepsilon_list = 0.000001\n"
        "n_max = 10\n",
        encoding="utf-8",
    )
    code, _, err = run(capsys, "sweep", "--config", str(cfg),
                       "--out", str(tmp_path / "x.csv"))
    assert code == 4
    assert "cap" in err


def test_bad_thread_count_exits_2(capsys):
    code, _, err = run(capsys, "selftest", "--threads", "0")
    assert code == 2
    assert "thread" in err


def test_no_subcommand_exits_2(capsys):
    code, _, _ = run(capsys)
    assert code == 2


# subcommand output -------------------------------------------------------------


def test_cost_table_has_108_rows_and_bound_dominates(tmp_path, capsys):
    out_path = tmp_path / "cost.csv"
    code, out, _ = run(capsys, "cost", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "d,n,M,cost_model,cost_bound"
    assert len(lines) == 109
    for line in lines[1:]:
        d, n, M, model, bound = map(int, line.split(","))
        assert model <= bound, line
    assert "violations: 0" in out


def test_oracle_ode_equilibrium_curve(tmp_path, capsys):
    cfg = tmp_path / "eq.ini"
    cfg.write_text("[problem]\nvalue = 1.0\n", encoding="utf-8")
    out_path = tmp_path / "ode.csv"
    code, _, _ = run(capsys, "oracle", "--config", str(cfg),
                     "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,x,value"
    assert len(lines) == 6
    assert all(line.endswith(",1.0") for line in lines[1:])


def test_sweep_csv_levels_monotone(tmp_path, capsys):
    cfg = tmp_path / "s.ini"
    cfg.write_text("[experiment]\nconstants = surrogate\n", encoding="utf-8")
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--config", str(cfg),
                     "--out", str(out_path))
    assert code == 0
    rows = [line.split(",")
            for line in out_path.read_text(encoding="utf-8").splitlines()[1:]]
    levels = {}
    for eps, d, n, cost, scaled in rows:
        levels.setdefault(float(eps), int(n))
    eps_sorted = sorted(levels)
    n_values = [levels[e] for e in eps_sorted]
    assert n_values == sorted(n_values, reverse=True)


CONV_INI = (
    "[problem]\nhorizon = 0.1\n"
    "[estimator]\nn_list = 0,1,2,3\nrepetitions = 100\n"
)


def test_converge_byte_identical_across_threads(tmp_path, capsys):
    cfg = tmp_path / "conv.ini"
    cfg.write_text(CONV_INI, encoding="utf-8")
    paths = {}
    for threads in (1, 4):
        out_path = tmp_path / f"conv{threads}.csv"
        code, _, _ = run(capsys, "converge", "--config", str(cfg),
                         "--threads", str(threads), "--out", str(out_path))
        assert code == 0
        paths[threads] = out_path
    assert (strip_wall(paths[1].read_text(encoding="utf-8"))
            == strip_wall(paths[4].read_text(encoding="utf-8")))


def test_mlp_threads_environment_fallback(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "conv.ini"
    cfg.write_text(CONV_INI, encoding="utf-8")
    base = tmp_path / "base.csv"
    code, _, _ = run(capsys, "converge", "--config", str(cfg),
                     "--out", str(base))
    assert code == 0
    monkeypatch.setenv("MLP_THREADS", "3")
    env_out = tmp_path / "env.csv"
    code, _, _ = run(capsys, "converge", "--config", str(cfg),
                     "--out", str(env_out))
    assert code == 0
    assert (strip_wall(base.read_text(encoding="utf-8"))
            == strip_wall(env_out.read_text(encoding="utf-8")))
    monkeypatch.setenv("MLP_THREADS", "zebra")
    code, _, err = run(capsys, "selftest")
    assert code == 2
    assert "MLP_THREADS" in err


def test_seed_flag_changes_sampled_output(tmp_path, capsys):
    cfg = tmp_path / "mc.ini"
    cfg.write_text(
        "[problem]\nhorizon = 0.1\n"
        "[estimator]\nlevels = 3\nrepetitions = 50\n",
        encoding="utf-8",
    )
    _, out_a, _ = run(capsys, "estimate", "--config", str(cfg), "--seed", "1")
    _, out_b, _ = run(capsys, "estimate", "--config", str(cfg), "--seed", "2")
    _, out_a2, _ = run(capsys, "estimate", "--config", str(cfg), "--seed", "1")
    mean_a = stdout_fields(out_a)["value_mean"]
    mean_b = stdout_fields(out_b)["value_mean"]
    mean_a2 = stdout_fields(out_a2)["value_mean"]
    assert mean_a != mean_b
    assert mean_a == mean_a2


def test_estimate_smoke_mean_within_3_se(tmp_path, capsys):
    cfg = tmp_path / "smoke.ini"
    cfg.write_text(
        "[problem]\nhorizon = 0.05\n"
        "[estimator]\nlevels = 5\nbranching = diagonal\nrepetitions = 200\n"
        "seed = 0\n",
        encoding="utf-8",
    )
    code, out, _ = run(capsys, "estimate", "--config", str(cfg))
    assert code == 0
    fields = stdout_fields(out)
    mean = float(fields["value_mean"])
    se = float(fields["value_se"])
    oracle = allen_cahn_reference(2.0, 0.05)
    assert abs(mean - oracle) <= 3.0 * se
