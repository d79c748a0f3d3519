import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwdiag.clifford import (CircuitFormatError, CliffordCircuit, Gate, OracleSizeError, conjugate,
                             conjugate_circuit, conjugate_pauli, dense_check_diagonal, dense_unitary,
                             depth, gate_symplectic, is_symplectic, layers, pauli_matrix,
                             symplectic_form, to_symplectic, verify_diagonal)
from qwdiag.gf2 import BitMatrix
from qwdiag.pauli import PauliString, Tableau, parse_pauli


@st.composite
def circuits(draw, n_min=1, n_max=4, max_len=20, swaps=True):
    n = draw(st.integers(n_min, n_max))
    kinds = ["h", "s"] + (["cx"] + (["swap"] if swaps else []) if n > 1 else [])
    gates = []
    for _ in range(draw(st.integers(0, max_len))):
        k = draw(st.sampled_from(kinds))
        if k in ("cx", "swap"):
            a = draw(st.integers(0, n - 1))
            b = draw(st.integers(0, n - 2))
            gates.append(Gate(k, (a, b if b < a else b + 1)))
        else:
            gates.append(Gate(k, (draw(st.integers(0, n - 1)),)))
    return CliffordCircuit(n, gates)


@st.composite
def paulis_on(draw, n):
    x = draw(st.integers(0, (1 << n) - 1))
    z = draw(st.integers(0, (1 << n) - 1))
    return PauliString.from_bits(n, x, z, draw(st.integers(0, 1)))


def _row(t):
    return str(t.row(0))


def test_gate_examples():
    assert _row(conjugate(Tableau.from_strings(["X"]), Gate.h(0))) == "Z"
    assert _row(conjugate(Tableau.from_strings(["Y"]), Gate.s(0))) == "-X"
    assert _row(conjugate(Tableau.from_strings(["XI"]), Gate.cx(0, 1))) == "XX"
    assert _row(conjugate(Tableau.from_strings(["IZ"]), Gate.cx(0, 1))) == "ZZ"
    assert _row(conjugate(Tableau.from_strings(["XZ"]), Gate.swap(0, 1))) == "ZX"


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate.cx(1, 1)
    with pytest.raises(ValueError):
        Gate("h", (0, 1))
    with pytest.raises(ValueError):
        Gate("t", (0,))
    with pytest.raises(ValueError):
        CliffordCircuit(2, [Gate.h(2)])
    with pytest.raises(IndexError):
        conjugate(Tableau.from_strings(["XX"]), Gate.h(3))


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_conjugation_matches_dense_oracle(data):
    c = data.draw(circuits())
    p = data.draw(paulis_on(c.n))
    u = dense_unitary(c)
    expected = u @ pauli_matrix(p) @ u.conj().T
    assert np.allclose(pauli_matrix(conjugate_pauli(p, c)), expected, atol=1e-12)


def test_depth_examples():
    assert depth([]) == 0
    assert depth([Gate.cx(0, 1), Gate.cx(2, 3)]) == 1
    assert depth([Gate.cx(0, 1), Gate.cx(1, 2)]) == 2
    # commuting CNOTs that share a control still go in separate layers
    assert depth([Gate.cx(0, 1), Gate.cx(0, 2)]) == 2
    assert depth([Gate.h(0), Gate.cx(1, 2), Gate.h(1)], two_qubit_only=True) == 1


@settings(max_examples=100, deadline=None)
@given(circuits(n_max=6, max_len=30))
def test_layers_are_disjoint_and_cover(c):
    ls = layers(c)
    assert len(ls) == c.depth() <= len(c)
    assert sum(len(layer) for layer in ls) == len(c)
    for layer in ls:
        qs = [q for g in layer for q in g.qubits]
        assert len(qs) == len(set(qs))


def test_symplectic_examples():
    assert to_symplectic(CliffordCircuit(3)) == BitMatrix.identity(6)
    assert to_symplectic(CliffordCircuit(1, [Gate.h(0)])).to_array().tolist() == [[0, 1], [1, 0]]
    assert gate_symplectic(Gate.s(0), 1).to_array().tolist() == [[1, 1], [0, 1]]


@settings(max_examples=100, deadline=None)
@given(circuits(n_max=5, max_len=20))
def test_symplectic_identity_and_action(c):
    m = to_symplectic(c)
    assert is_symplectic(m)
    assert m @ symplectic_form(c.n) @ m.T == symplectic_form(c.n)
    # rows of a tableau map through C exactly as the column updates do
    t = Tableau.from_strings(["".join("IXYZ"[(i * 7 + j * 3 + k) % 4] for j in range(c.n)) for i, k in
                              ((0, 1), (1, 2), (2, 0))])
    assert conjugate_circuit(t, c).matrix == t.matrix @ m


def test_dense_examples():
    h = dense_unitary(CliffordCircuit(1, [Gate.h(0)]))
    assert np.allclose(h, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-12)
    cc = dense_unitary(CliffordCircuit(2, [Gate.cx(0, 1), Gate.cx(0, 1)]))
    assert np.allclose(cc, np.eye(4), atol=1e-12)
    with pytest.raises(OracleSizeError):
        dense_unitary(CliffordCircuit(11))


@settings(max_examples=50, deadline=None)
@given(circuits(n_max=5))
def test_dense_unitary_is_unitary_and_inverse(c):
    u = dense_unitary(c)
    assert np.allclose(u @ u.conj().T, np.eye(1 << c.n), atol=1e-12)
    ui = dense_unitary(c.inverse())
    assert np.allclose(ui @ u, np.eye(1 << c.n), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(circuits(n_max=4))
def test_swap_expansion_preserves_unitary(c):
    assert np.allclose(dense_unitary(c), dense_unitary(c.expand_swaps()), atol=1e-12)


def test_verify_diagonal():
    assert verify_diagonal(Tableau.from_strings(["ZZI", "IZZ"]))
    assert not verify_diagonal(Tableau.from_strings(["ZZI", "IXZ"]))
    c = CliffordCircuit(2, [Gate.h(0)])
    assert dense_check_diagonal(c, [parse_pauli("XZ"), parse_pauli("ZZ")]) == 1


@settings(max_examples=100, deadline=None)
@given(circuits(n_max=6))
def test_serialization_roundtrip(c):
    assert CliffordCircuit.from_text(c.to_text()) == c
    assert CliffordCircuit.load(c.to_json()) == c
    assert CliffordCircuit.load(c.to_text()) == c


def test_final_layout():
    c = CliffordCircuit(3, [Gate.swap(0, 1), Gate.swap(1, 2)])
    assert c.final_layout() == [2, 0, 1]
    t = conjugate_circuit(Tableau.from_strings(["XII"]), c)
    assert str(t.row(0)) == "IIX"


@pytest.mark.parametrize("text, line", [("qubits 2\nh 5\n", None), ("h 0\nfoo 1\n", 2),
                                        ("cx 0 x\n", 1), ("qubits 2\nqubits 3\n", 2)])
def test_circuit_format_errors(text, line):
    with pytest.raises(CircuitFormatError) as info:
        CliffordCircuit.from_text(text)
    assert info.value.line == line
