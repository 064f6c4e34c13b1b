import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path
from unittest.mock import patch

import pytest

from dynscatter.amplitudes import SWEEP_COLUMNS
from dynscatter.design import DESIGN_SWEEP_COLUMNS
from dynscatter.errors import StepLimitExceeded
from dynscatter.evolution import TRAJECTORY_COLUMNS
from dynscatter.potential import PROFILE_COLUMNS
from dynscatter.verification import CheckResult

BARRIER = '{"kind": "barrier", "height": -3, "length": "pi/2"}'
LASING = '{"kind": "designed", "goal": "lasing", "k0L": "3pi/4"}'


def test_scatter_hand_case(run_cli, envelope_of):
    code, out, _ = run_cli("scatter", "--potential", BARRIER, "--k", "1", "--route", "evolution")
    assert code == 0
    env = envelope_of(out)
    assert env["success"] is True
    assert env["meta"]["command"] == "scatter"
    t = env["data"]["amplitudes"]["transmission"]
    assert abs(t["re"]) < 1e-8 and abs(t["im"] - 1) < 1e-8


def test_scatter_zero_potential(run_cli, envelope_of):
    code, out, _ = run_cli("scatter", "--potential", '{"kind": "zero"}', "--k", "2")
    assert code == 0
    data = envelope_of(out)["data"]
    assert data["amplitudes"]["transmission"]["re"] == pytest.approx(1.0, abs=1e-15)
    assert data["flags"]["is_bidirectionally_invisible"] is True


def test_scatter_auto_reports_deviation(run_cli, envelope_of):
    code, out, _ = run_cli("scatter", "--potential", BARRIER, "--k", "1.3")
    assert code == 0
    assert envelope_of(out)["data"]["deviation"] < 1e-7


def test_scatter_reads_yaml_file(run_cli, envelope_of, tmp_path):
    spec = tmp_path / "barrier.yaml"
    spec.write_text("kind: barrier\nheight: [1.5, -0.2]\nlength: 2\n")
    code, out, _ = run_cli("scatter", "--potential", spec, "--k", "0.8")
    assert code == 0
    assert envelope_of(out)["success"]


def test_invalid_potential_json_exits_2(run_cli, envelope_of):
    code, out, _ = run_cli("scatter", "--potential", "{not json", "--k", "1")
    assert code == 2
    env = envelope_of(out)
    assert env["success"] is False
    assert env["error"]["code"] == "VALIDATION_ERROR"


def test_unknown_potential_kind_exits_2(run_cli, envelope_of):
    code, out, _ = run_cli("scatter", "--potential", '{"kind": "well"}', "--k", "1")
    assert code == 2
    assert envelope_of(out)["error"]["code"] == "VALIDATION_ERROR"


def test_non_positive_k_exits_2(run_cli, envelope_of):
    code, out, _ = run_cli("scatter", "--potential", BARRIER, "--k", "-1")
    assert code == 2
    assert "k" in envelope_of(out)["error"]["message"]


def test_unparseable_argument_exits_2(run_cli):
    code, _, err = run_cli("scatter", "--potential", BARRIER, "--k", "one")
    assert code == 2
    assert "not a number" in err


def test_solver_failure_exits_3(run_cli, envelope_of):
    with patch("dynscatter.commands.scatter.scatter", side_effect=StepLimitExceeded("forced")):
        code, out, _ = run_cli("scatter", "--potential", BARRIER, "--k", "1")
    assert code == 3
    assert envelope_of(out)["error"]["code"] == "STEP_LIMIT"


def test_unexpected_error_is_masked(run_cli, envelope_of):
    with patch("dynscatter.commands.scatter.scatter", side_effect=RuntimeError("secret state")):
        code, out, _ = run_cli("scatter", "--potential", BARRIER, "--k", "1")
    assert code == 3
    env = envelope_of(out)
    assert env["error"]["code"] == "INTERNAL_ERROR"
    assert "secret" not in env["error"]["message"]


def test_spectral_singularity_exits_4(run_cli, envelope_of):
    code, out, _ = run_cli("scatter", "--potential", LASING, "--k", "1")
    assert code == 4
    assert envelope_of(out)["error"]["code"] == "SPECTRAL_SINGULARITY"


def test_sweep_csv_to_stdout(run_cli, envelope_of):
    code, out, err = run_cli(
        "sweep", "--potential", BARRIER, "--k-range", "0.5:2:4",
        "--route", "evolution", "--format", "csv", "--threads", "2",
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == SWEEP_COLUMNS
    assert len(rows) == 5
    assert [float(r[0]) for r in rows[1:]] == [0.5, 1.0, 1.5, 2.0]
    assert envelope_of(err)["data"]["points"] == 4


def test_sweep_json_out_file(run_cli, envelope_of, tmp_path):
    target = tmp_path / "sweep.json"
    code, out, _ = run_cli("sweep", "--potential", BARRIER, "--k-range", "1:2:3", "--out", target)
    assert code == 0
    saved = json.loads(target.read_text())
    assert saved["data"]["rows"][0]["k"] == 1.0
    assert envelope_of(out)["meta"]["run_id"] == saved["meta"]["run_id"]


def test_design_sweep(run_cli, tmp_path):
    target = tmp_path / "design.csv"
    code, _, _ = run_cli(
        "sweep", "--goal", "uinv", "--k0L-range", "pi/2:2pi:7", "--format", "csv", "--out", target,
    )
    assert code == 0
    rows = list(csv.reader(target.open()))
    assert rows[0] == DESIGN_SWEEP_COLUMNS
    assert len(rows) == 8


def test_design_sweep_needs_invisible_goal(run_cli):
    code, _, _ = run_cli("sweep", "--goal", "lasing", "--k0L-range", "1:2:3")
    assert code == 2


def test_empty_range_exits_2(run_cli):
    code, _, _ = run_cli("sweep", "--potential", BARRIER, "--k-range", "2:1:5")
    assert code == 2


def test_design_writes_profile(run_cli, envelope_of, tmp_path):
    profile = tmp_path / "profile.csv"
    code, out, _ = run_cli(
        "design", "--goal", "uinv", "--k0L", "3pi", "--points", "21", "--profile-out", profile,
    )
    assert code == 0
    env = envelope_of(out)
    assert env["data"]["verification"]["passed"] is True
    assert env["data"]["design"]["k0L"] > 9.4
    rows = list(csv.reader(profile.open()))
    assert rows[0] == PROFILE_COLUMNS
    assert len(rows) == 22


def test_design_at_singular_length_exits_2(run_cli, envelope_of):
    code, out, _ = run_cli("design", "--goal", "lasing", "--k0L", "pi")
    assert code == 2
    assert envelope_of(out)["error"]["code"] == "SINGULAR_PROFILE"


def test_trajectory_csv(run_cli, tmp_path):
    target = tmp_path / "traj.csv"
    code, _, _ = run_cli(
        "trajectory", "--potential", BARRIER, "--k", "1", "--points", "5", "--format", "csv", "--out", target,
    )
    assert code == 0
    rows = list(csv.reader(target.open()))
    assert rows[0] == TRAJECTORY_COLUMNS
    assert len(rows) >= 6
    assert max(float(r[-1]) for r in rows[1:]) < 1e-8


def test_verify_exit_status_follows_checks(run_cli, envelope_of):
    passing = [CheckResult("a", 0.0, 1e-9, True)]
    failing = passing + [CheckResult("b", 1.0, 1e-9, False, "forced")]
    with patch("dynscatter.commands.verify.run_suite", return_value=passing):
        code, out, _ = run_cli("verify")
    assert code == 0
    assert envelope_of(out)["data"]["passed"] is True

    with patch("dynscatter.commands.verify.run_suite", return_value=failing) as suite:
        code, out, _ = run_cli("verify", "--check-tol", "1e-7")
    assert code == 1
    assert envelope_of(out)["data"]["failed"] == ["b"]
    assert suite.call_args.kwargs["tolerance"] == 1e-7


@pytest.mark.parametrize("name, value", [
    ("SCATTER1D_THREADS", "0"),
    ("SCATTER1D_REL_TOL", "abc"),
    ("SCATTER1D_ENV", "staging"),
])
def test_invalid_environment_settings_exit_as_invalid_config(name, value):
    root = Path(__file__).resolve().parents[2]
    env = dict(os.environ, PYTHONPATH=str(root), **{name: value})
    proc = subprocess.run(
        [sys.executable, "-m", "dynscatter", "scatter", "--potential", '{"kind": "zero"}', "--k", "1"],
        cwd=root, env=env, capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 2
    assert name in proc.stderr
    assert "Traceback" not in proc.stderr
