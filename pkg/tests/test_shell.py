"""Trajectory files, ledger CSV, CLI exit codes, and self-check plumbing."""

import json

import numpy as np
import pytest

from qledger import cli, trajio, verify
from qledger.accounting import Trajectory, TrajectorySample, analyze
from qledger.errors import TrajectoryFormatError
from qledger.qstate import DensityMatrix, Hamiltonian
from qledger.scenarios import ScenarioSpec, build_trajectory
from qledger.trajio import ledger_text, read_trajectory, write_ledger, write_trajectory
from qledger.verify import CheckResult

HEADER = "t,U,W,Q_cal,C,W_cl,Q_cl,S,l1_coherence,closure_defect"


def decay_trajectory(steps=40):
    return build_trajectory(
        ScenarioSpec(kind="spontaneous_emission", gamma=1.0, t_max=2.0, steps=steps)
    )


def write_doc(tmp_path, mutate=None, steps=8):
    """Emit a valid trajectory file, optionally corrupted by ``mutate``."""
    path = tmp_path / "traj.json"
    write_trajectory(decay_trajectory(steps), path)
    if mutate is not None:
        doc = json.loads(path.read_text())
        mutate(doc)
        path.write_text(json.dumps(doc))
    return path


def test_trajectory_round_trip_exact(tmp_path):
    traj = decay_trajectory()
    path = tmp_path / "traj.json"
    write_trajectory(traj, path)
    back = read_trajectory(path)
    assert len(back) == len(traj)
    for ours, theirs in zip(traj.samples, back.samples):
        assert ours.t == theirs.t
        np.testing.assert_array_equal(ours.hamiltonian.matrix, theirs.hamiltonian.matrix)
        np.testing.assert_array_equal(ours.state.matrix, theirs.state.matrix)


def test_ledger_csv_deterministic(tmp_path):
    traj = decay_trajectory()
    first = ledger_text(analyze(traj))
    second = ledger_text(analyze(traj))
    assert first == second
    assert first.splitlines()[0] == HEADER
    path = tmp_path / "ledger.csv"
    write_ledger(analyze(traj), path)
    assert path.read_text() == first


def test_csv_digits_round_trip_exactly():
    ledger = analyze(decay_trajectory())
    rows = [line.split(",") for line in ledger_text(ledger).strip().splitlines()[1:]]
    table = np.array(rows, dtype=np.float64)
    np.testing.assert_array_equal(table[:, 0], ledger.t)
    np.testing.assert_array_equal(table[:, 1], ledger.energy)
    np.testing.assert_array_equal(table[:, 3], ledger.heat)
    np.testing.assert_array_equal(table[:, 9], ledger.closure_defect)


def test_trace_gate_names_offending_record(tmp_path):
    def corrupt(doc):
        doc["samples"][7]["rho"]["re"][0][0] -= 0.1

    with pytest.raises(TrajectoryFormatError) as err:
        read_trajectory(write_doc(tmp_path, corrupt))
    assert "samples[7]" in str(err.value)
    assert "trace" in str(err.value)


def test_trace_gate_below_file_threshold_still_named(tmp_path):
    # a 1e-9 defect passes the file-level gate but not the state type's
    # own, stricter one; the record index must survive the wrapping
    def corrupt(doc):
        doc["samples"][7]["rho"]["re"][0][0] += 1e-9

    with pytest.raises(TrajectoryFormatError) as err:
        read_trajectory(write_doc(tmp_path, corrupt))
    assert "samples[7]" in str(err.value)


def missing_h(doc):
    del doc["samples"][3]["H"]


def ragged_row(doc):
    doc["samples"][1]["H"]["re"][0] = [0.0]


def non_number(doc):
    doc["samples"][2]["rho"]["re"][0][0] = "x"


def nan_time(doc):
    doc["samples"][4]["t"] = float("nan")


def non_object(doc):
    doc["samples"][5] = 3


def wrong_units(doc):
    doc["units"]["hbar"] = 2.0


def single_sample(doc):
    doc["samples"] = doc["samples"][:1]


def non_hermitian(doc):
    doc["samples"][6]["H"]["im"][0][1] += 0.5


def shape_mismatch(doc):
    doc["samples"][0]["H"] = {
        "re": [[0.0, 0.0, 0.0]] * 3,
        "im": [[0.0, 0.0, 0.0]] * 3,
    }


def decreasing_times(doc):
    doc["samples"][1]["t"] = -5.0


@pytest.mark.parametrize(
    ("mutate", "fragment"),
    [
        (missing_h, "samples[3] is missing field 'H'"),
        (ragged_row, "samples[1].H"),
        (non_number, "samples[2].rho"),
        (nan_time, "samples[4].t"),
        (non_object, "samples[5] must be an object"),
        (wrong_units, "units"),
        (single_sample, "at least 2"),
        (non_hermitian, "samples[6]"),
        (shape_mismatch, "does not match"),
        (decreasing_times, "strictly increase"),
    ],
)
def test_malformed_documents_are_named(tmp_path, mutate, fragment):
    with pytest.raises(TrajectoryFormatError) as err:
        read_trajectory(write_doc(tmp_path, mutate))
    assert fragment in str(err.value)


def test_top_level_must_be_object(tmp_path):
    path = tmp_path / "traj.json"
    path.write_text("[]")
    with pytest.raises(TrajectoryFormatError, match="top level"):
        read_trajectory(path)


def test_invalid_json_is_named(tmp_path):
    path = tmp_path / "traj.json"
    path.write_text("{")
    with pytest.raises(TrajectoryFormatError, match="not valid JSON"):
        read_trajectory(path)


def test_failed_write_leaves_no_debris(tmp_path, monkeypatch):
    ledger = analyze(decay_trajectory(steps=4))
    target = tmp_path / "ledger.csv"
    target.write_text("keep\n")

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(trajio.os, "replace", boom)
    with pytest.raises(OSError):
        write_ledger(ledger, target)
    assert target.read_text() == "keep\n"
    assert list(tmp_path.iterdir()) == [target]


def test_cli_run_analyze_round_trip(tmp_path, capsys):
    led_run = tmp_path / "run.csv"
    led_analyze = tmp_path / "analyze.csv"
    traj_path = tmp_path / "traj.json"
    rc = cli.main(
        ["run", "se", "--gamma", "1.0", "--t-max", "2.0", "--steps", "40",
         "--out", str(led_run), "--emit-trajectory", str(traj_path)]
    )
    assert rc == 0
    assert "max closure defect" in capsys.readouterr().out
    rc = cli.main(["analyze", str(traj_path), "--out", str(led_analyze)])
    assert rc == 0
    assert led_run.read_bytes() == led_analyze.read_bytes()


def test_cli_zeeman_parameter_routes_agree(tmp_path):
    direct = tmp_path / "direct.csv"
    derived = tmp_path / "derived.csv"
    args = ["--t-max", "2.0", "--steps", "50"]
    assert cli.main(["run", "zeeman", "--shift", "0.5", "--out", str(direct)] + args) == 0
    assert (
        cli.main(
            ["run", "zeeman", "--b-field", "2.0", "--shift-coefficient", "0.25",
             "--out", str(derived)] + args
        )
        == 0
    )
    assert direct.read_bytes() == derived.read_bytes()


def test_cli_missing_parameter_is_usage_error(tmp_path, capsys):
    rc = cli.main(["run", "isothermal", "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "temperature" in capsys.readouterr().err


def test_cli_bad_file_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli.main(["analyze", str(bad)]) == 2
    assert cli.main(["analyze", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_cli_names_bad_record(tmp_path, capsys):
    def corrupt(doc):
        doc["samples"][7]["rho"]["re"][0][0] -= 0.1

    path = write_doc(tmp_path, corrupt)
    assert cli.main(["analyze", str(path)]) == 2
    assert "samples[7]" in capsys.readouterr().err


def test_cli_unknown_scenario_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["run", "nonsense", "--out", str(tmp_path / "x.csv")])
    assert err.value.code == 2
    capsys.readouterr()


def test_cli_tracking_failure_is_computation_error(tmp_path, capsys):
    f = np.exp(2j * np.pi * np.outer(np.arange(3), np.arange(3)) / 3.0) / np.sqrt(3.0)
    levels = np.array([0.0, 1.0, 2.0])
    rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]).astype(complex))
    traj = Trajectory(
        (
            TrajectorySample(0.0, Hamiltonian(np.diag(levels).astype(complex)), rho),
            TrajectorySample(1.0, Hamiltonian((f * levels) @ f.conj().T), rho),
        )
    )
    path = tmp_path / "jump.json"
    write_trajectory(traj, path)
    assert cli.main(["analyze", str(path)]) == 1
    assert "ambiguous" in capsys.readouterr().err


def test_cli_verify_reports_each_check(monkeypatch, capsys):
    monkeypatch.setattr(
        verify, "run_all",
        lambda: [CheckResult("alpha", True, "ok"), CheckResult("beta", False, "bad")],
    )
    assert cli.main(["verify"]) == 1
    out = capsys.readouterr().out
    assert "PASS  alpha" in out
    assert "FAIL  beta" in out
    assert "1/2 checks passed" in out

    monkeypatch.setattr(verify, "run_all", lambda: [CheckResult("alpha", True, "ok")])
    assert cli.main(["verify"]) == 0
    assert "1/1 checks passed" in capsys.readouterr().out


def test_run_all_captures_check_exceptions(monkeypatch):
    def raiser():
        raise RuntimeError("kaboom")

    monkeypatch.setattr(verify, "_CHECKS", (("boom", raiser),))
    results = verify.run_all()
    assert len(results) == 1
    assert not results[0].passed
    assert "kaboom" in results[0].detail


def test_fault_injection_trips_drive_check(monkeypatch):
    # the self-check must compare against the analytic curve, not against
    # itself: replacing the reference with a constant has to fail it
    monkeypatch.setattr(
        verify.scenarios, "rabi_coherence_ref",
        lambda eg, ee, omega, t: np.full(np.shape(t), 0.123),
    )
    assert not verify.check_rabi_coherence().passed
