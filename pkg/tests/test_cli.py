import csv
import io
import json

import numpy as np
import pytest

from pauli_designs import __version__
from pauli_designs.cli import main
from pauli_designs.circuits import circuit_to_unitary, parse_circuit
from pauli_designs.pauli import PauliString
from pauli_designs.verify import pauli_exponential


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gap_t4(capsys):
    code, out, _ = run(capsys, "gap", "--qubits", "1", "--t", "4")
    assert code == 0
    d = json.loads(out)
    assert d["gap_norm"] == pytest.approx(7 / 12, abs=1e-9)
    assert d["casimir_bound"] == pytest.approx(7 / 12, abs=1e-12)
    assert d["meta"]["version"] == __version__ and d["meta"]["seed"] == 0
    assert d["bound_formulas"] and d["tol"] == 1e-9


def test_gap_orthogonal(capsys):
    code, out, _ = run(capsys, "gap", "--dim", "3", "--t", "1")
    assert code == 0
    assert json.loads(out)["gap_norm"] == pytest.approx(1 / 3, abs=1e-9)


def test_gap_byte_identical(capsys):
    a = run(capsys, "gap", "--qubits", "1", "--t", "2", "--seed", "4")[1]
    b = run(capsys, "gap", "--qubits", "1", "--t", "2", "--seed", "4")[1]
    assert a == b


def test_su2_csv(capsys):
    code, out, _ = run(capsys, "su2", "--max-ell", "8")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    assert (float(rows[1]["f"]), float(rows[1]["norm"])) == (-0.5, 0.5)


def test_casimir(capsys):
    code, out, _ = run(capsys, "casimir", "--qubits", "2", "--t", "2")
    d = json.loads(out)
    assert code == 0 and d["small_t_bound"] == pytest.approx(0.8)
    code, out, _ = run(capsys, "casimir", "--qubits", "1", "--t", "3", "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["exact_gap"]) == pytest.approx(0.5)


def test_compile_log_depth(capsys, tmp_path):
    path = tmp_path / "circ.txt"
    code, _, err = run(capsys, "compile", "--pauli", "XZXZXXXZ", "--theta", "0.7",
                       "--mode", "log-depth", "--out", str(path))
    assert code == 0
    summary = json.loads(err)
    assert summary["verified_max_err"] <= 1e-10 and summary["depth"] <= 9
    circ = parse_circuit(path.read_text(), 8)
    p = PauliString.from_label("XZXZXXXZ")
    assert np.max(np.abs(circuit_to_unitary(circ) - pauli_exponential(p, 0.7))) <= 1e-10


def test_compile_with_graph(capsys, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("n 3\n0 2\n2 1\n")
    code, out, _ = run(capsys, "compile", "--pauli", "XYZ", "--theta", "1.1", "--graph", str(g))
    assert code == 0
    assert "CNOT 0 1" not in out and "SWAP 0 1" not in out


def test_sample_unitary(capsys, tmp_path):
    u_path = tmp_path / "u.csv"
    code, out, _ = run(capsys, "sample-unitary", "--qubits", "2", "--steps", "5",
                       "--seed", "3", "--unitary-out", str(u_path))
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["step"] for r in recs] == list(range(5))
    rows = list(csv.reader(io.StringIO(u_path.read_text())))[1:]
    u = np.array([[complex(v) for v in row] for row in rows])
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    code, out, _ = run(capsys, "sample-unitary", "--qubits", "1", "--steps", "20",
                       "--angles", "discrete", "--t", "2")
    angles = {round(json.loads(line)["angle"], 12) for line in out.splitlines()}
    assert angles <= {round(a, 12) for a in (-np.pi, -np.pi / 2, 0.0, np.pi / 2)}


def test_ortho_sample(capsys, tmp_path):
    path = tmp_path / "o.csv"
    code, _, err = run(capsys, "ortho-sample", "--dim", "5", "--steps", "100", "--seed", "2",
                       "--out", str(path))
    assert code == 0
    rows = list(csv.reader(io.StringIO(path.read_text())))[1:]
    o = np.array(rows, dtype=float)
    assert np.max(np.abs(o.T @ o - np.eye(5))) <= 1e-10
    summary = json.loads(err)
    assert 0 < summary["bound_contraction_t1"] < 1


def test_state_design(capsys):
    code, out, _ = run(capsys, "state-design", "--qubits", "2", "--t", "2", "--steps", "3")
    d = json.loads(out)
    assert code == 0
    assert d["dim_sym"] == 10 and d["distance"] <= d["bound"]
    assert d["meta"]["formulas"]


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--dim", "16", "--steps", "50")
    d = json.loads(out)
    assert code == 0 and d["N"] == 16 and d["k"] == 50
    assert d["timing"]["givens_ns_per_sample"] >= 0 and d["timing"]["gs_ns_per_sample"] >= 0


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "--scale", "medium"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["nope"])
    assert e.value.code == 2
    capsys.readouterr()
    code, _, err = run(capsys, "gap", "--t", "1")
    assert code == 2 and json.loads(err)["error"] == "usage"
    code, _, err = run(capsys, "ortho-sample", "--dim", "4", "--steps", "1",
                       "--basis", "skew-pauli")
    assert code == 2 and json.loads(err)["error"] == "invalid_argument"
    code, _, err = run(capsys, "gap", "--qubits", "2", "--t", "3", "--dense-limit", "100")
    assert code == 2


def test_bound_violation_exit(capsys, monkeypatch):
    import pauli_designs.moments as moments

    monkeypatch.setattr(moments, "theorem_bound", lambda n, t: 0.0)
    code, _, err = run(capsys, "gap", "--qubits", "1", "--t", "1")
    assert code == 1
    d = json.loads(err)
    assert d["error"] == "bound_violation" and "1/(4t)" in d["message"]


def test_verify(capsys, monkeypatch):
    import pauli_designs.verify as verify

    # the full suite runs in test_acceptance; here only the plumbing is exercised
    monkeypatch.setattr(verify, "CHECKS", verify.CHECKS[:2])
    code, out, err = run(capsys, "verify", "--scale", "fast")
    assert code == 0
    d = json.loads(out)
    assert d["passed"] and len(d["checks"]) == 2
    assert err.count("[PASS]") == 2


def test_verify_failure_exit(capsys, monkeypatch):
    import pauli_designs.verify as verify

    monkeypatch.setattr(verify, "CHECKS", [lambda scale: verify.CheckResult("x", False)])
    code, out, err = run(capsys, "verify")
    assert code == 1 and "[FAIL] x" in err
