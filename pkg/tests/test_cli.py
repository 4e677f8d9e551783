import csv
import io
import json

import pytest

import cli
from handlers import CommandHandlers, ReproCheck
from handlers import commands as commands_module


def _run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = cli.main([*argv, "--out", str(out)])
    return code, (out.read_text(encoding="utf-8") if out.exists() else None)


def _json(tmp_path, *argv):
    code, text = _run(tmp_path, *argv)
    assert code == 0
    return json.loads(text)


def test_validate_four_state(tmp_path, data_dir):
    payload = _json(tmp_path, "validate", "--matrix", str(data_dir / "four_state.json"))
    validation = payload["results"]["validation"]
    assert validation["is_signed_laplacian"] is True
    assert [round(x, 9) for x in validation["spectrum"]] == [0.0, -2.0, -4.0, -8.0]
    assert payload["config"]["tolerances"]["eps_pos"] == 1e-12
    assert payload["command"][0] == "validate"


def test_validate_rotation(tmp_path, data_dir):
    payload = _json(tmp_path, "validate", "--matrix", str(data_dir / "rotation.json"))
    assert payload["results"]["validation"]["is_symmetric"] is False


def test_validate_zero_matrix(tmp_path):
    path = tmp_path / "zero.csv"
    path.write_text("0,0,0\n0,0,0\n0,0,0\n")
    validation = _json(tmp_path, "validate", "--matrix", str(path))["results"]["validation"]
    assert validation["is_signed_laplacian"] is False
    assert validation["corank"] == 3


def test_tolerance_overrides_are_echoed(tmp_path, data_dir):
    payload = _json(tmp_path, "validate", "--matrix", str(data_dir / "four_state.json"), "--tol-sym", "1e-6")
    assert payload["config"]["tolerances"]["eps_sym"] == 1e-6


def test_extrema_csv(tmp_path, data_dir):
    code, text = _run(tmp_path, "extrema", "--matrix", str(data_dir / "four_state.json"), "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [float(r["t"]) for r in rows] == [0.05, 0.20]
    assert [(float(r["min_F"]), float(r["max_F"]), float(r["min_B"]), float(r["max_B"])) for r in rows] == [
        (-0.010, 0.895, -0.123, 1.369),
        (0.007, 0.677, -0.988, 3.965),
    ]
    assert [r["verdict"] for r in rows] == ["inconclusive", "conclusive"]


def test_extrema_scaled_integer_matrix_matches_decimal_file(tmp_path, data_dir):
    decimal = _json(tmp_path, "extrema", "--matrix", str(data_dir / "four_state.json"), "--t", "0.2", "--t", "1.0")
    scaled = _json(
        tmp_path, "extrema", "--matrix", str(data_dir / "four_state_int.csv"), "--scale", "1/3", "--t", "0.2", "--t", "1.0"
    )
    assert decimal["results"] == scaled["results"]
    assert [r["verdict"] for r in decimal["results"]["rows"]] == ["conclusive", "conclusive"]


def test_table1_name_runs_extrema(tmp_path, data_dir):
    matrix = str(data_dir / "four_state.json")
    extrema = _json(tmp_path, "extrema", "--matrix", matrix)
    table = _json(tmp_path, "table1", "--matrix", matrix)
    assert table["results"] == extrema["results"]
    assert table["command"][0] == "table1"


def test_extrema_requires_signed_laplacian(tmp_path, data_dir):
    code, _ = _run(tmp_path, "extrema", "--matrix", str(data_dir / "rotation.json"))
    assert code == 1


def test_tau_commands(tmp_path, data_dir):
    four_state = _json(tmp_path, "tau", "--matrix", str(data_dir / "four_state.json"))["results"]["tau"]
    assert four_state["verdict"] == "Finite"
    assert 0.165 <= four_state["tau_lo"] < four_state["tau_hi"] <= 0.175

    cycle = _json(tmp_path, "tau", "--matrix", str(data_dir / "cycle3.json"))["results"]["tau"]
    assert cycle["tau_hi"] <= 1e-4

    rotation = _json(tmp_path, "tau", "--matrix", str(data_dir / "rotation.json"), "--grid", "64")["results"]["tau"]
    assert rotation["verdict"] == "NotEventuallyPositive"


@pytest.mark.parametrize("t, kind", [("0.20", "ForwardConclusive"), ("0.05", "Inconclusive")])
def test_aot_four_state(tmp_path, data_dir, t, kind):
    runs = _json(tmp_path, "aot", "--matrix", str(data_dir / "four_state.json"), "--t", t)["results"]["runs"]
    assert runs[0]["verdict"]["kind"] == kind


def test_aot_rotation(tmp_path, data_dir):
    runs = _json(tmp_path, "aot", "--matrix", str(data_dir / "rotation.json"), "--t", "1.21")["results"]["runs"]
    assert runs[0]["verdict"]["kind"] == "Inconclusive"
    b_hat = runs[0]["fit"]["B_hat"]
    # Почти циклическая перестановка: по одному элементу ≈ 1 в каждой строке.
    assert all(sorted(row)[-1] == pytest.approx(1.0, abs=0.02) for row in b_hat)


def test_aot_is_deterministic_with_noise(tmp_path, data_dir):
    argv = ("aot", "--matrix", str(data_dir / "four_state.json"), "--t", "0.2", "--noise", "1e-9", "--seed", "3")
    _, first = _run(tmp_path, *argv)
    _, second = _run(tmp_path, *argv)
    assert first == second


def test_aot_requires_time(tmp_path, data_dir):
    code, _ = _run(tmp_path, "aot", "--matrix", str(data_dir / "four_state.json"))
    assert code == 1


def test_entropy_trace_csv(tmp_path, data_dir):
    code, text = _run(
        tmp_path, "entropy-trace", "--matrix", str(data_dir / "rotation.json"), "--p0", "1,0,0",
        "--t-max", "5", "--steps", "50", "--format", "csv",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["t", "H2_bits", "dH2_dt"]
    assert len(rows) == 51
    assert all(abs(float(r["H2_bits"])) <= 1e-9 for r in rows)


def test_entropy_trace_is_monotone_for_four_state(tmp_path, data_dir):
    trajectory = _json(tmp_path, "entropy-trace", "--matrix", str(data_dir / "four_state.json"))["results"]["trajectory"]
    assert trajectory["min_entropy_increment"] >= -1e-9


def test_entropy_trace_uniform_start(tmp_path, data_dir):
    trajectory = _json(
        tmp_path, "entropy-trace", "--matrix", str(data_dir / "four_state.json"), "--p0", "0.25,0.25,0.25,0.25"
    )["results"]["trajectory"]
    assert all(h == pytest.approx(2.0, abs=1e-12) for h in trajectory["entropies"])


@pytest.mark.parametrize("p0", ["0.5,0.6,0,0", "a,b,c,d"])
def test_entropy_trace_rejects_invalid_start(tmp_path, data_dir, p0):
    code, _ = _run(tmp_path, "entropy-trace", "--matrix", str(data_dir / "four_state.json"), "--p0", p0)
    assert code == 1


def test_missing_matrix_file(tmp_path):
    code, _ = _run(tmp_path, "validate", "--matrix", str(tmp_path / "absent.json"))
    assert code == 1


def test_missing_matrix_flag(tmp_path):
    code, _ = _run(tmp_path, "validate")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["validate", "--grid", "many"],
        ["validate", "--format", "xml"],
        ["validate", "--tol-sym", "-1"],
        ["tau", "--grid", "4"],
        ["aot", "--delta", "2"],
    ],
)
def test_usage_errors(argv):
    assert cli.main(argv) == 2


def test_repro_exit_code_follows_checks(monkeypatch, config):
    monkeypatch.setattr(commands_module, "run_repro", lambda _: [ReproCheck("a", True), ReproCheck("b", False)])
    outcome = CommandHandlers(config).cmd_repro()
    assert outcome.exit_code == 1
    assert outcome.report.results["failed"] == ["b"]

    monkeypatch.setattr(commands_module, "run_repro", lambda _: [ReproCheck("a", True)])
    assert CommandHandlers(config).cmd_repro().exit_code == 0
