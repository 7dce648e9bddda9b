import json
import shutil
import subprocess

import numpy as np
import pytest

from kproc import load_env, read_trajectory_csv
from kproc.cli import main


def _sample_env(tmp_path, terms=100, seed=3):
    path = tmp_path / "env.json"
    rc = main(["env", "sample", "--alpha", "0.5", "--terms", str(terms),
               "--seed", str(seed), "--out", str(path)])
    assert rc == 0
    return path


def test_env_sample_writes_environment(tmp_path):
    path = _sample_env(tmp_path, terms=10_000)
    env = load_env(path)
    assert env.weights.size == 10_000
    assert env.alpha == 0.5
    assert np.all(np.diff(env.weights) <= 0.0)
    assert env.tail_estimate > 0.0


def test_env_sample_is_reproducible(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    a = _sample_env(tmp_path / "a", terms=500, seed=11)
    b = _sample_env(tmp_path / "b", terms=500, seed=11)
    assert a.read_bytes() == b.read_bytes()


def test_env_sample_missing_flag_is_usage_error(tmp_path, capsys):
    rc = main(["env", "sample", "--terms", "10", "--seed", "1",
               "--out", str(tmp_path / "x.json")])
    assert rc == 2
    assert "alpha" in capsys.readouterr().err


def test_simulate_k_writes_trajectory(tmp_path):
    env_path = _sample_env(tmp_path)
    out = tmp_path / "traj.csv"
    rc = main(["simulate", "--model", "k", "--env", str(env_path),
               "--horizon", "5", "--seed", "4", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "time,state"
    # with c = 0 the chain never sits at the unstable state, including at 0
    assert all(not line.endswith(",inf") for line in lines[1:])
    traj = read_trajectory_csv(out)
    assert np.all(np.diff(traj.times) > 0.0)


def test_simulate_k_stdout(tmp_path, capsys):
    env_path = _sample_env(tmp_path)
    rc = main(["simulate", "--model", "k", "--env", str(env_path),
               "--horizon", "1", "--seed", "5"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("time,state\n")


def test_simulate_trap_samples_environment(tmp_path):
    out = tmp_path / "trap.csv"
    rc = main(["simulate", "--model", "trap", "--n", "50", "--alpha", "0.5",
               "--horizon", "2", "--seed", "6", "--out", str(out)])
    assert rc == 0
    traj = read_trajectory_csv(out)
    states = np.concatenate(([traj.start_state], traj.states))
    assert np.all((1 <= states) & (states <= 50))


def test_simulate_rejects_unknown_model(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--model", "nope", "--horizon", "1", "--seed", "1"])
    assert exc.value.code == 2


def test_simulate_k_requires_env(capsys):
    rc = main(["simulate", "--model", "k", "--horizon", "1", "--seed", "1"])
    assert rc == 2
    assert "env" in capsys.readouterr().err


def test_analytic_exit_value(capsys):
    rc = main(["analytic", "exit", "--gamma-x", "1", "--lam", "1"])
    assert rc == 0
    assert float(capsys.readouterr().out.strip()) == 0.5


def test_analytic_limit_curve(capsys):
    rc = main(["analytic", "lambda0", "--theta", "1", "--alpha", "0.5"])
    assert rc == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(0.5, abs=1e-10)


def test_analytic_entrance_prints_error_bound(tmp_path, capsys):
    env_path = _sample_env(tmp_path)
    rc = main(["analytic", "entrance", "--env", str(env_path),
               "--set", "1,2", "--lam", "1"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert 0.0 < float(out[0]) < 1.0
    assert out[1].startswith("# truncation_error_bound")


def test_analytic_unknown_name(capsys):
    rc = main(["analytic", "nonsense", "--theta", "1", "--alpha", "0.5"])
    assert rc == 2
    assert "unknown analytic name" in capsys.readouterr().err


def test_aging_curve_outputs(tmp_path):
    out_dir = tmp_path / "curves"
    rc = main(["aging", "curve", "--alpha", "0.5", "--terms", "200",
               "--t", "0.001", "--theta", "0,0.5,1", "--reps", "2000",
               "--seed", "6", "--out-dir", str(out_dir)])
    assert rc == 0
    limit_lines = (out_dir / "lambda0.csv").read_text().strip().splitlines()
    assert limit_lines[0] == "theta,value,std_error"
    assert limit_lines[1] == "0,1,0"  # theta = 0 pins the limit curve at 1
    mc_lines = (out_dir / "lambda_t=0.001.csv").read_text().strip().splitlines()
    assert len(mc_lines) == 4
    assert float(mc_lines[1].split(",")[1]) == 1.0
    summary = json.loads((out_dir / "aging_summary.json").read_text())
    assert summary["estimator"] == "conditional"
    assert set(summary["max_deviation"]) == {"0.001"}


def test_aging_curve_requires_reps(tmp_path, capsys):
    rc = main(["aging", "curve", "--alpha", "0.5", "--terms", "50",
               "--seed", "1", "--out-dir", str(tmp_path)])
    assert rc == 2
    assert "reps" in capsys.readouterr().err


def test_verify_repro_group_passes(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    rc = main(["verify", "--only", "repro", "--out", str(report_path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS repro-identical-across-runs-and-workers" in out
    assert out.strip().endswith("1/1 checks passed")
    report = json.loads(report_path.read_text())
    assert report["all_passed"] is True
    assert "workers" not in report


def test_verify_tolerance_override_fails(capsys):
    rc = main(["verify", "--only", "repro",
               "--tolerance", "repro-identical-across-runs-and-workers=0"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL repro-identical-across-runs-and-workers" in out


def test_config_file_fills_missing_options(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"alpha": 0.5, "terms": 50, "seed": 9}))
    out = tmp_path / "env.json"
    rc = main(["env", "sample", "--config", str(config), "--out", str(out)])
    assert rc == 0
    assert load_env(out).weights.size == 50


def test_command_line_overrides_config(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"alpha": 0.5, "terms": 50, "seed": 9}))
    out = tmp_path / "env.json"
    rc = main(["env", "sample", "--config", str(config), "--terms", "80",
               "--out", str(out)])
    assert rc == 0
    assert load_env(out).weights.size == 80


def test_console_script_installed():
    assert shutil.which("kproc") is not None
    proc = subprocess.run(["kproc", "analytic", "lambda0",
                           "--theta", "1", "--alpha", "0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert float(proc.stdout.strip()) == pytest.approx(0.5, abs=1e-10)
