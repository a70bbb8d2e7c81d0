import json
import subprocess
import sys

import numpy as np
import pytest

from qudit_arith.circuitfile import read_circuit
from qudit_arith.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_and_simulate(capsys, tmp_path):
    path = tmp_path / "add.qc"
    assert run(capsys, "build", "add", "--d", "3", "--q", "2", "-o", str(path))[0] == 0
    c = read_circuit(path)
    index = c.system.basis_index({"b": 7, "a": 4})
    code, out, _ = run(capsys, "simulate", "--circuit", str(path), "--input", f"basis:{index}", "--json")
    assert code == 0
    rows = json.loads(out)["nonzero"]
    assert len(rows) == 1 and rows[0]["registers"] == {"b": 7, "a": 2}


def test_simulate_amplitude_file(capsys, tmp_path):
    path = tmp_path / "qft.qc"
    run(capsys, "build", "qft", "--d", "2", "--q", "1", "-o", str(path))
    amps = tmp_path / "s.npy"
    np.save(amps, np.array([1, 0], dtype=complex))
    code, out, _ = run(capsys, "simulate", "--circuit", str(path), "--input", str(amps), "--json")
    probs = [r["probability"] for r in json.loads(out)["nonzero"]]
    assert code == 0 and np.allclose(probs, [0.5, 0.5])


def test_build_to_stdout(capsys):
    code, out, _ = run(capsys, "build", "mmac", "--d", "3", "--q", "1", "--no-sandwich")
    assert code == 0 and out.startswith("QC 1 d=3 w=3") and "RBAR" in out


@pytest.mark.parametrize("argv", [
    ("verify", "add", "--d", "3", "--q", "2", "--exhaustive"),
    ("verify", "mulc", "--d", "2", "--q", "2", "--b", "3", "--exhaustive"),
    ("verify", "qft", "--d", "3", "--q", "2"),
    ("verify", "diag", "--d", "2", "--q", "2", "--gamma", "1", "--samples", "3"),
])
def test_verify_passes(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0 and json.loads(out)["ok"]


def test_verify_failure_exits_one(capsys, tmp_path, monkeypatch):
    from qudit_arith import cli
    from qudit_arith.oracle import OracleSpec

    def wrong_spec(block):
        return OracleSpec("addc", block.d, 2, {"b": (block.params["b"] + 1) % 9})

    monkeypatch.setattr(cli, "oracle_spec_for", wrong_spec)
    code, out, _ = run(capsys, "verify", "addc", "--d", "3", "--q", "2", "--b", "4", "--exhaustive")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("argv", [
    ("verify", "addc", "--d", "3", "--q", "2"),
    ("verify", "addc", "--d", "3", "--q", "2", "--exhaustive"),
    ("build", "mulc", "--d", "3", "--q", "2", "--b", "3"),
    ("resources",),
    ("approx", "rz", "--theta", "1/0"),
    ("simulate", "--circuit", "/nonexistent.qc", "--input", "basis:0"),
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_bad_argument_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build", "nope", "--d", "3", "--q", "1"])
    assert exc.value.code == 2


def test_resources(capsys, tmp_path):
    path = tmp_path / "mmac.qc"
    run(capsys, "build", "mmac", "--d", "3", "--q", "4", "--no-sandwich", "-o", str(path))
    code, out, _ = run(capsys, "resources", "--circuit", str(path), "--json")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["basic"] == {"RBAR": 20} and rep["depth_basic"] <= 10 and rep["width"] == 12
    code, out, _ = run(capsys, "resources", "--fit", "--block", "add", "--d", "3", "--q-range", "2..8",
                       "--metric", "depth")
    assert code == 0 and "add d=3 depth ~ q^1.0" in out


def test_approx(capsys, tmp_path):
    code, out, _ = run(capsys, "approx", "rz", "--theta", "1/8")
    assert code == 0 and out.splitlines()[0] == "T"
    csv_path = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "approx", "rx", "--theta", "1/4", "--max-len", "8", "--csv", str(csv_path),
                       "--d", "3", "--q", "3", "--json")
    payload = json.loads(out)
    assert payload["word"] == "HTTH" and payload["error"] < 1e-12
    assert payload["worst_case_angle_turns"] == "1/27"
    assert csv_path.read_text().splitlines()[0] == "max_len,error,word"


def test_export_table(capsys):
    code, out, _ = run(capsys, "export", "--table1", "--d", "3", "--q-range", "1..2", "--json")
    rows = json.loads(out)
    assert code == 0 and all(r["width"] == r["width_expected"] for r in rows)
    code, out, _ = run(capsys, "export", "--table1", "--d", "2", "--q-range", "1..2")
    assert code == 0 and "mmac" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qudit_arith", "approx", "rz", "--theta", "1/4"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and res.stdout.startswith("TT")
