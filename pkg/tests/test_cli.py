import json
import math
import os

import pytest

from blowuplab.cli import EXIT_CONFIG, EXIT_USAGE, main
from blowuplab.grids import load_field_binary


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_no_arguments_prints_usage(capsys):
    code, _, err = run_cli(capsys)
    assert code == EXIT_USAGE
    assert "usage" in err


def test_unknown_subcommand(capsys):
    code, _, err = run_cli(capsys, "frobnicate")
    assert code == EXIT_USAGE
    assert "unknown command" in err


def test_help_exits_zero(capsys):
    code, _, err = run_cli(capsys, "--help")
    assert code == 0
    assert "usage" in err


def test_exponents_table(capsys):
    code, out, _ = run_cli(capsys, "exponents", "--n", "3", "--beta", "0")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,beta,kato,strauss,beta_threshold"
    n, beta, kato, strauss, thr = lines[1].split(",")
    assert float(kato) == 2.0
    assert float(strauss) == pytest.approx(2.41421356, abs=1e-6)
    assert float(thr) == 2.0


def test_exponents_infinite_thresholds(capsys):
    code, out, _ = run_cli(capsys, "exponents", "--n", "1", "--beta", "5")
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert row[2] == "inf"
    assert row[4] == "inf"


def test_oracle_subcommand(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--u0", "1", "--v0", "0.816496580927726", "--p", "2")
    assert code == 0
    value = float(out.strip().split(",")[1])
    assert value == pytest.approx(math.sqrt(6.0), rel=1e-9)


def test_simulate_zero_amplitude(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code, out, _ = run_cli(
        capsys,
        "simulate",
        "--init.amplitude", "0",
        "--time.t_end", "0.5",
        "--grid.points", "32",
        "--grid.half_width", "4",
        "--output.dir", str(out_dir),
    )
    assert code == 0
    assert "CompletedHorizon" in out
    trace = (out_dir / "energy_trace.csv").read_text().splitlines()
    assert trace[0].startswith("t,kinetic")
    assert all(float(line.split(",")[1]) == 0.0 for line in trace[1:])
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["artifact_version"]
    report = json.loads((out_dir / "report.json").read_text())
    assert report["outcome"] == "CompletedHorizon"
    u = load_field_binary(out_dir / "final_u.blwp")
    assert u.grid.points_per_axis == 32


def test_simulate_refuses_overwrite_without_force(tmp_path, capsys):
    out_dir = tmp_path / "run"
    args = (
        "simulate",
        "--init.amplitude", "0",
        "--time.t_end", "0.2",
        "--grid.points", "32",
        "--grid.half_width", "4",
        "--output.dir", str(out_dir),
    )
    assert run_cli(capsys, *args)[0] == 0
    code, _, err = run_cli(capsys, *args)
    assert code == EXIT_CONFIG
    assert "force" in err
    assert run_cli(capsys, *args, "--force")[0] == 0


def test_simulate_outputs_reproducible(tmp_path, capsys):
    args = lambda d: (
        "simulate",
        "--init.amplitude", "0.5",
        "--time.t_end", "0.5",
        "--grid.points", "64",
        "--grid.half_width", "8",
        "--output.dir", str(d),
    )
    run_cli(capsys, *args(tmp_path / "a"))
    run_cli(capsys, *args(tmp_path / "b"))
    assert (tmp_path / "a" / "energy_trace.csv").read_bytes() == (
        tmp_path / "b" / "energy_trace.csv"
    ).read_bytes()


def test_simulate_blowup_exit_code(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "simulate",
        "--init.kind", "constant",
        "--init.amplitude", "1.0",
        "--init.on", "both",
        "--grid.points", "32",
        "--grid.half_width", "4",
        "--time.t_end", "10",
        "--time.tol", "1e-4",
        "--blowup.u_max", "1e5",
        "--output.dir", str(tmp_path / "blow"),
    )
    assert code == 10
    assert "BlowupDetected" in out


def test_simulate_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "init.amplitude = 0\n"
        "grid.points = 32\n"
        "grid.half_width = 4\n"
        "time.t_end = 1.0\n"
        f"output.dir = {tmp_path / 'from_file'}\n"
    )
    code, _, _ = run_cli(capsys, "simulate", "--config", str(cfg), "--time.t_end", "0.25")
    assert code == 0
    trace = (tmp_path / "from_file" / "energy_trace.csv").read_text().splitlines()
    assert float(trace[-1].split(",")[0]) == pytest.approx(0.25)


def test_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("grid.wibble = 3\n")
    code, _, err = run_cli(capsys, "simulate", "--config", str(cfg))
    assert code == EXIT_CONFIG
    assert "unknown config key" in err


def test_sweep_subcommand(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep",
        "--sweep.amplitude", "0.0,0.5",
        "--grid.points", "64",
        "--grid.half_width", "8",
        "--time.t_end", "1.0",
        "--time.tol", "1e-5",
        "--output.dir", str(tmp_path / "sweep"),
        "--workers", "1",
    )
    assert code == 0
    lines = (tmp_path / "sweep" / "sweep.csv").read_text().splitlines()
    assert lines[0].startswith("n,p,beta,b0,amplitude,mean_u1")
    assert len(lines) == 3
    assert "SurvivedHorizon" in lines[1]


def test_slopes_subcommand(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "slopes",
        "--p", "2", "--n", "1", "--beta", "0", "--d", "1",
        "--Ts", "8,16,32,64",
        "--out", str(tmp_path / "slopes"),
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "term,T,value,fitted_slope,predicted_exponent,abs_error"
    assert len(lines) == 1 + 9 * 4
    assert (tmp_path / "slopes" / "slopes.csv").read_text().splitlines()[0] == lines[0]


def test_scaling_subcommand(capsys):
    code, out, _ = run_cli(capsys, "scaling", "--beta", "-1", "--lambda", "2", "--resolution", "64")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "lambda,resolution,error"
    lam, res, err = lines[1].split(",")
    assert float(err) < 0.05


def test_weakcheck_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "weakcheck", "--points", "256", "--nt", "500", "--T", "4"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "weak_residual,strong_form,rel_diff"
    assert float(lines[1].split(",")[2]) < 1e-5


def test_simulate_writes_snapshots(tmp_path, capsys):
    out_dir = tmp_path / "snaps"
    code, _, _ = run_cli(
        capsys,
        "simulate",
        "--init.amplitude", "0.5",
        "--time.t_end", "0.2",
        "--time.tol", "0",
        "--time.dt0", "0.01",
        "--grid.points", "256",
        "--grid.half_width", "8",
        "--output.every", "5",
        "--output.dir", str(out_dir),
    )
    assert code == 0
    snaps = sorted(os.listdir(out_dir / "snapshots"))
    assert "u_000000.blwp" in snaps and "v_000000.blwp" in snaps
    u0 = load_field_binary(out_dir / "snapshots" / "u_000000.blwp")
    assert u0.values.max() == pytest.approx(0.0)  # bump rides on u1 by default
