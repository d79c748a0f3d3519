import json

import pytest

from qwdiag.cli import main, parse_range
from qwdiag.clifford import CliffordCircuit
from qwdiag.connectivity import ConnectivityGraph
from qwdiag.pauli import read_terms

MIXED = """# small mixed Hamiltonian
-0.8 IIII
0.17 ZIII
0.17 IZII
-0.22 IIZI
0.12 ZZII
0.16 ZIZI
0.04 XXYY
0.04 YYXX
-0.04 XYYX
0.05 XIXI
0.05 YIYI
"""


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ham(tmp_path):
    p = tmp_path / "h.txt"
    p.write_text(MIXED)
    return p


def test_parse_range():
    assert parse_range("4..7") == [4, 5, 6, 7]
    assert parse_range("1,3,5..6") == [1, 3, 5, 6]


def test_diagonal_input_gives_zero_metrics(tmp_path, capsys):
    p = tmp_path / "z.txt"
    p.write_text("1.0 ZZI\n0.5 IZZ\n")
    code, out, _ = run(capsys, "diagonalize", p, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    m = doc["metrics"]
    assert (m["kappa"], m["mean_cnot"], m["sd_cnot"], m["mean_depth"], m["sd_depth"]) == (1, 0, 0, 0, 0)
    assert doc["sets"][0]["circuit"]["gates"] == []


def test_non_commuting_without_partition(ham, capsys):
    code, _, err = run(capsys, "diagonalize", ham)
    assert code == 2 and "anticommute" in err and "ZIII" in err


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("0.5 XX\n0.5 XQ\n")
    code, _, err = run(capsys, "diagonalize", p)
    assert code == 1 and "line 2" in err


def test_partition_then_verify_every_set(ham, tmp_path, capsys):
    out = tmp_path / "o"
    code, _, _ = run(capsys, "diagonalize", ham, "--partition", "--oracle", "--out", out)
    assert code == 0
    report = (out / "report.txt").read_text()
    kappa = int(next(line.split()[1] for line in report.splitlines() if line.startswith("kappa")))
    assert kappa >= 2
    for key in ("n", "N", "kappa", "mean_r", "mean_cnot", "sd_cnot", "mean_depth", "sd_depth"):
        assert any(line.split()[0] == key for line in report.splitlines() if line.strip())
    recovered = []
    for k in range(kappa):
        code, text, _ = run(capsys, "verify", out / f"set_{k}.circuit", out / f"set_{k}.paulis", "--oracle")
        assert code == 0 and "PASS" in text
        recovered += read_terms((out / f"set_{k}.paulis").read_text())
    assert len(recovered) == len(read_terms(MIXED))
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["subcommand"] == "diagonalize" and "h.txt" in manifest["inputs"]


def test_graph_constrained_output_on_edges(tmp_path, capsys):
    sets = tmp_path / "s"
    run(capsys, "random-set", "--n", 8, "--r", 6, "--seed", 3, "--out", sets)
    out = tmp_path / "o"
    code, _, _ = run(capsys, "diagonalize", sets / "set.paulis", "--graph", "line:8", "--out", out)
    assert code == 0
    circ = CliffordCircuit.load((out / "set_0.circuit").read_text())
    g = ConnectivityGraph.line(8)
    assert all(g.has_edge(*x.qubits) for x in circ if x.is_two_qubit)
    code, _, _ = run(capsys, "verify", out / "set_0.circuit", sets / "set.paulis")
    assert code == 0


def test_graph_from_file(tmp_path, capsys):
    edges = tmp_path / "ring.txt"
    edges.write_text("0 1\n1 2\n2 3\n3 0\n")
    p = tmp_path / "s.txt"
    p.write_text("XXXX\nZZZZ\n")
    code, out, _ = run(capsys, "diagonalize", p, "--graph", edges)
    assert code == 0 and "swap=" in out
    edges.write_text("0 1\n2 3\n")
    code, _, err = run(capsys, "diagonalize", p, "--graph", edges)
    assert code == 2 and "disconnected" in err


def test_verify_detects_deleted_gate(tmp_path, capsys):
    sets = tmp_path / "s"
    run(capsys, "random-set", "--n", 5, "--r", 5, "--seed", 1, "--out", sets)
    out = tmp_path / "o"
    run(capsys, "diagonalize", sets / "set.paulis", "--out", out)
    circ = CliffordCircuit.load((out / "set_0.circuit").read_text())
    broken = tmp_path / "broken.circuit"
    broken.write_text(CliffordCircuit(circ.n, circ.gates[:-1]).to_text())
    code, _, err = run(capsys, "verify", broken, sets / "set.paulis")
    assert code == 3 and "FAIL operator" in err


def test_verify_empty_circuit_on_diagonal_input(tmp_path, capsys):
    c = tmp_path / "empty.circuit"
    c.write_text("qubits 3\n")
    p = tmp_path / "z.txt"
    p.write_text("ZZI\nIIZ\n")
    code, out, _ = run(capsys, "verify", c, p, "--oracle")
    assert code == 0 and "dense: pass" in out


def test_verify_qubit_mismatch(tmp_path, capsys):
    c = tmp_path / "c.circuit"
    c.write_text("qubits 2\nh 0\n")
    p = tmp_path / "z.txt"
    p.write_text("XII\n")
    assert run(capsys, "verify", c, p)[0] == 2
    c.write_text("qubits 2\nfoo 0\n")
    assert run(capsys, "verify", c, p)[0] == 1


def test_json_artifacts_reload(ham, tmp_path, capsys):
    out = tmp_path / "o"
    code, _, _ = run(capsys, "diagonalize", ham, "--partition", "--format", "json", "--strategy", "complete",
                     "--step2", "balanced", "--out", out)
    assert code == 0
    doc = json.loads((out / "report.json").read_text())
    for s in doc["sets"]:
        assert CliffordCircuit.from_dict(s["circuit"]) == CliffordCircuit.load(
            (out / f"set_{s['index']}.circuit.json").read_text())
        assert all(st["cnots"] == st["weight"] - 1 for st in s["stages"])


def test_partition_command(ham, tmp_path, capsys):
    code, out, _ = run(capsys, "partition", ham)
    assert code == 0 and out.startswith("# kappa ")
    assert len(read_terms(out)) == len(read_terms(MIXED))
    code, out, _ = run(capsys, "partition", ham, "--format", "json", "--partition-strategy", "greedy-color")
    assert json.loads(out)["N"] == 11


def test_bench_square_bound_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        code, _, _ = run(capsys, "bench", "--n", "4..7", "--square", "--samples", 5, "--seed", 7, "--out", d)
        assert code == 0
    assert (a / "bench.csv").read_text() == (b / "bench.csv").read_text()
    assert (a / "bench.json").read_text() == (b / "bench.json").read_text()
    for row in json.loads((a / "bench.json").read_text()):
        assert row["max_cnot"] <= row["cnot_bound"]
        assert row["cnot_bound"] == row["n"] * (row["n"] - 1) // 2


def test_unseeded_run_prints_seed(capsys):
    code, out, err = run(capsys, "random-set", "--n", 3, "--r", 2)
    assert code == 0 and err.startswith("seed ")
    seed = int(err.split()[1])
    code2, out2, _ = run(capsys, "random-set", "--n", 3, "--r", 2, "--seed", seed)
    assert out == out2


def test_bench_needs_r(capsys):
    assert run(capsys, "bench", "--n", "3", "--seed", "1")[0] == 2


def test_random_set_precondition(capsys):
    assert run(capsys, "random-set", "--n", 3, "--r", 4, "--seed", 0)[0] == 2
