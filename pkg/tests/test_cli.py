"""End-to-end tests of the command-line interface."""

from __future__ import annotations

import json
import math

import pytest

from eprjoint.cli import main
from helpers import P_SINGLET_HIGH, P_SINGLET_LOW, TSIRELSON

S = 1.0 / math.sqrt(2.0)

SINGLET_STATE = {
    "state": "singlet",
    "settings": {
        "n_A": [0.0, 0.0, 1.0],
        "n_A'": [1.0, 0.0, 0.0],
        "n_B": [S, 0.0, S],
        "n_B'": [-S, 0.0, S],
    },
}

UNIFORM_PROBS = {
    "singles": {"A": 0.5, "A'": 0.5, "B": 0.5, "B'": 0.5},
    "doubles": {"AB": 0.25, "AB'": 0.25, "A'B": 0.25, "A'B'": 0.25},
}

SINGLET_PROBS = {
    "singles": {"A": 0.5, "A'": 0.5, "B": 0.5, "B'": 0.5},
    "doubles": {
        "AB": P_SINGLET_LOW,
        "AB'": P_SINGLET_LOW,
        "A'B": P_SINGLET_LOW,
        "A'B'": P_SINGLET_HIGH,
    },
}

SINGLET_PROBS_3 = {
    "singles": SINGLET_PROBS["singles"],
    "doubles": {k: v for k, v in SINGLET_PROBS["doubles"].items() if k != "A'B'"},
}

DET_PROBS = {
    "singles": {"A": 1.0, "A'": 1.0, "B": 1.0, "B'": 1.0},
    "doubles": {"AB": 1.0, "AB'": 1.0, "A'B": 1.0, "A'B'": 1.0},
}


@pytest.fixture
def write_json(tmp_path):
    def _write(name: str, payload) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return _write


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestProbsMode:
    def test_singlet_optimal(self, write_json, capsys):
        path = write_json("singlet.json", SINGLET_STATE)
        code, out, _ = run_cli(capsys, "--mode", "probs", "--input", path)
        assert code == 0
        report = json.loads(out)
        assert report["chsh"]["violated"] is True
        assert report["chsh"]["max_s_value"] == pytest.approx(TSIRELSON, abs=1e-9)
        assert report["probs"]["doubles"]["AB"] == pytest.approx(P_SINGLET_LOW, abs=1e-12)
        assert report["correlations"]["A'B'"] == pytest.approx(S, abs=1e-12)

    def test_mixed_state(self, write_json, capsys):
        path = write_json(
            "mixed.json",
            {"state": "mixed", "settings": SINGLET_STATE["settings"]},
        )
        code, out, _ = run_cli(capsys, "--mode", "probs", "--input", path)
        assert code == 0
        report = json.loads(out)
        assert report["chsh"]["satisfied"] is True
        assert all(
            v == pytest.approx(0.25, abs=1e-12)
            for v in report["probs"]["doubles"].values()
        )

    def test_malformed_direction(self, write_json, capsys):
        bad = {
            "state": "singlet",
            "settings": {**SINGLET_STATE["settings"], "n_B": [0.25, 0.0, 0.25]},
        }
        path = write_json("bad.json", bad)
        code, _, err = run_cli(capsys, "--mode", "probs", "--input", path)
        assert code == 2
        assert "n_B" in err

    def test_named_states(self, write_json, capsys):
        for state in ("werner:0.5", "ket:00"):
            path = write_json("st.json", {"state": state, "settings": SINGLET_STATE["settings"]})
            code, _, _ = run_cli(capsys, "--mode", "probs", "--input", path)
            assert code == 0

    def test_matrix_state(self, write_json, capsys):
        entries = [[0.0, 0.0]] * 16
        for i in (0,):
            entries[i] = [1.0, 0.0]
        path = write_json("m.json", {"state": entries, "settings": SINGLET_STATE["settings"]})
        code, out, _ = run_cli(capsys, "--mode", "probs", "--input", path)
        assert code == 0
        assert json.loads(out)["probs"]["singles"]["A"] == pytest.approx(1.0, abs=1e-12)


class TestConstructModes:
    def test_construct4_uniform(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "construct4", "--input", path)
        assert code == 0
        report = json.loads(out)
        assert all(
            v == pytest.approx(0.0625, abs=1e-13)
            for v in report["distribution"].values()
        )
        assert report["marginal_check"]["max_residual"] < 1e-12
        assert report["intervals"]["P(..++)"] == [0.0, 0.5]

    def test_construct4_chsh_violation(self, write_json, capsys):
        path = write_json("s.json", SINGLET_PROBS)
        code, _, err = run_cli(capsys, "--mode", "construct4", "--input", path)
        assert code == 3
        error = json.loads(err)
        assert error["error"] == "ChshViolationError"
        slacks = error["chsh"]["slacks"]
        assert len(slacks) == 4
        assert slacks["AA'B'B"]["upper"] < 0

    def test_construct3_singlet(self, write_json, capsys):
        path = write_json("s3.json", SINGLET_PROBS_3)
        code, out, _ = run_cli(capsys, "--mode", "construct3", "--input", path)
        assert code == 0
        report = json.loads(out)
        chosen = report["chosen_aprime_bprime"]
        assert abs(chosen - P_SINGLET_HIGH) > 1e-6
        assert report["marginal_check"]["max_residual"] < 1e-10
        assert "P(A'B')" in report["intervals"]

    def test_construct3_ignores_measured_fourth(self, write_json, capsys):
        path = write_json("s4.json", SINGLET_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "construct3", "--input", path)
        assert code == 0
        report = json.loads(out)
        assert report["note"]["measured_aprime_bprime_ignored"] == pytest.approx(
            P_SINGLET_HIGH
        )

    def test_construct_from_state_file(self, write_json, capsys):
        path = write_json("st.json", {"state": "mixed", "settings": SINGLET_STATE["settings"]})
        code, out, _ = run_cli(capsys, "--mode", "construct4", "--input", path)
        assert code == 0

    def test_params_applied(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        params = write_json("p.json", {"t": {"dotdot": 0.0}})
        code, out, _ = run_cli(capsys, "--mode", "construct4", "--input", path,
                               "--params", params)
        assert code == 0
        assert json.loads(out)["chosen"]["P(..++)"] == 0.0

    def test_inconsistent_input_exit_4(self, write_json, capsys):
        payload = {
            "singles": {"A": 0.5, "A'": 0.5, "B": 0.5, "B'": 0.5},
            "doubles": {"AB": 0.5, "AB'": 0.5, "A'B": 0.55},
        }
        path = write_json("inc.json", payload)
        code, _, err = run_cli(capsys, "--mode", "construct3", "--input", path,
                               "--tolerance", "0.1")
        assert code == 4
        assert json.loads(err)["error"] == "InputInconsistencyError"

    def test_frechet_violation_exit_2_at_default_tolerance(self, write_json, capsys):
        payload = {
            "singles": {"A": 0.5, "A'": 0.5, "B": 0.5, "B'": 0.5},
            "doubles": {"AB": 0.5, "AB'": 0.5, "A'B": 0.55},
        }
        path = write_json("inc.json", payload)
        code, _, err = run_cli(capsys, "--mode", "construct3", "--input", path)
        assert code == 2


class TestOracleMode:
    def test_uniform(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "oracle", "--input", path)
        assert code == 0
        report = json.loads(out)
        assert report["feasible"] is True
        assert report["max_min_entry"] == pytest.approx(1 / 16, abs=1e-12)
        assert report["witness"]["++++"] == pytest.approx(1 / 16, abs=1e-12)

    def test_singlet_infeasible_reported(self, write_json, capsys):
        path = write_json("s.json", SINGLET_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "oracle", "--input", path)
        assert code == 0
        report = json.loads(out)
        assert report["feasible"] is False
        assert report["max_min_entry"] < -1e-3
        assert report["witness"] is None
        assert len(report["dual_certificate"]) == 9


class TestChshMode:
    def test_probs_file(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "chsh", "--input", path)
        assert code == 0
        report = json.loads(out)
        assert report["chsh"]["satisfied"] is True
        assert report["chsh"]["margin"] == pytest.approx(0.5)


class TestSweepMode:
    def test_uniform_grid3(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "sweep", "--input", path, "--grid", "3")
        assert code == 0
        report = json.loads(out)
        assert report["grid"]["total_points"] == 3**7
        assert report["failures"] == 0 and report["all_valid"] is True
        assert report["most_interior_min_entry"] == pytest.approx(1 / 16, abs=1e-12)

    def test_deterministic_grid(self, write_json, capsys):
        path = write_json("d.json", DET_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "sweep", "--input", path, "--grid", "2")
        assert code == 0
        report = json.loads(out)
        assert report["all_valid"] is True
        assert report["min_entry_distribution"]["++++"] == 1.0
        assert report["most_interior_distribution"]["++++"] == 1.0

    def test_violation_exits_3(self, write_json, capsys):
        path = write_json("s.json", SINGLET_PROBS)
        code, _, err = run_cli(capsys, "--mode", "sweep", "--input", path, "--grid", "2")
        assert code == 3

    def test_explicit_axis(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "sweep", "--input", path,
                               "--grid", "0,0.5,1")
        assert code == 0
        assert json.loads(out)["grid"]["axis"] == [0.0, 0.5, 1.0]

    def test_bad_grid(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        code, _, err = run_cli(capsys, "--mode", "sweep", "--input", path, "--grid", "x")
        assert code == 2


class TestMcVerifyMode:
    def test_uniform_within_5_sigma(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "mc-verify", "--input", path,
                               "--samples", "200000", "--seed", "7")
        assert code == 0
        report = json.loads(out)
        assert report["within_5_sigma"] is True
        assert report["generator"] == "PCG64"
        cell = report["experiments"]["AB"]["cells"]["++"]
        assert cell["expected"] == pytest.approx(0.25, abs=1e-12)
        assert abs(cell["empirical"] - 0.25) < 5 * cell["std_error"]

    def test_point_mass_exact(self, write_json, capsys):
        path = write_json("d.json", DET_PROBS)
        code, out, _ = run_cli(capsys, "--mode", "mc-verify", "--input", path,
                               "--samples", "1000")
        assert code == 0
        report = json.loads(out)
        assert report["max_abs_z"] == 0.0
        cell = report["experiments"]["AB"]["cells"]["++"]
        assert cell["empirical"] == 1.0 and cell["std_error"] == 0.0

    def test_three_experiment_mode(self, write_json, capsys):
        path = write_json("s3.json", SINGLET_PROBS_3)
        code, out, _ = run_cli(capsys, "--mode", "mc-verify", "--input", path,
                               "--samples", "50000", "--seed", "3")
        assert code == 0
        report = json.loads(out)
        assert report["arity"] == 3
        assert report["experiments"]["A'B'"]["constructed"] is True
        assert report["within_5_sigma"] is True

    def test_byte_identical_reruns(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        argv = ("--mode", "mc-verify", "--input", path, "--samples", "50000",
                "--seed", "123")
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_bad_samples(self, write_json, capsys):
        path = write_json("u.json", UNIFORM_PROBS)
        code, _, _ = run_cli(capsys, "--mode", "mc-verify", "--input", path,
                             "--samples", "0")
        assert code == 2


class TestInputHandling:
    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "--mode", "chsh", "--input", "/nonexistent.json")
        assert code == 2

    def test_malformed_json_names_line(self, write_json, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"singles": {\n  "A": oops\n}}')
        code, _, err = run_cli(capsys, "--mode", "chsh", "--input", str(path))
        assert code == 2
        assert "line 2" in err

    def test_missing_field(self, write_json, capsys):
        path = write_json("x.json", {"singles": {"A": 0.5}})
        code, _, err = run_cli(capsys, "--mode", "chsh", "--input", path)
        assert code == 2
        assert "missing" in err

    def test_output_file(self, write_json, capsys, tmp_path):
        path = write_json("u.json", UNIFORM_PROBS)
        out_path = tmp_path / "report.json"
        code, out, _ = run_cli(capsys, "--mode", "chsh", "--input", path,
                               "--output", str(out_path))
        assert code == 0
        assert out == ""
        assert json.loads(out_path.read_text())["chsh"]["satisfied"] is True
