"""Clifford gates, circuits and their action on Pauli tableaux.

Gates are recorded in conjugation order: the first gate in a circuit is the
first one applied to the state, so the circuit unitary is
``U = G_m ... G_2 G_1`` and a Pauli ``P`` is mapped to ``U P U^dagger``.

Under conjugation the tableau columns change as

* ``H(i)``: swap ``X_i`` and ``Z_i``;
* ``S(i)``: ``Z_i <- Z_i + X_i``;
* ``CNOT(c, t)``: ``X_t <- X_t + X_c`` and ``Z_c <- Z_c + Z_t``;
* ``SWAP(a, b)``: exchange columns ``a`` and ``b`` in both blocks.

Signs follow the usual stabilizer-tableau rules (Aaronson and Gottesman).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gf2 import BitMatrix
from .pauli import PauliString, Tableau

H = "h"
S = "s"
CNOT = "cx"
SWAP = "swap"

GATE_ARITY = {H: 1, S: 1, CNOT: 2, SWAP: 2}
TWO_QUBIT = frozenset({CNOT, SWAP})

DENSE_LIMIT = 10


class OracleSizeError(ValueError):
    pass


class CircuitFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"{message} (line {line})" if line is not None else message)


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        arity = GATE_ARITY.get(self.kind)
        if arity is None:
            raise ValueError(f"unknown gate {self.kind!r}")
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.kind} needs two distinct qubits")

    @classmethod
    def h(cls, q: int) -> Gate:
        return cls(H, (q,))

    @classmethod
    def s(cls, q: int) -> Gate:
        return cls(S, (q,))

    @classmethod
    def cx(cls, control: int, target: int) -> Gate:
        return cls(CNOT, (control, target))

    @classmethod
    def swap(cls, a: int, b: int) -> Gate:
        return cls(SWAP, (a, b))

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT

    def to_text(self) -> str:
        return " ".join([self.kind, *map(str, self.qubits)])

    def __str__(self) -> str:
        return self.to_text()


@dataclass
class CliffordCircuit:
    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        if max(g.qubits) >= self.n:
            raise ValueError(f"gate {g} out of range for {self.n} qubits")

    def append(self, g: Gate) -> None:
        self._check(g)
        self.gates.append(g)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    @property
    def cnot_count(self) -> int:
        return self.count(CNOT)

    @property
    def swap_count(self) -> int:
        return self.count(SWAP)

    def two_qubit_count(self, expand_swaps: bool = False) -> int:
        return self.cnot_count + (3 if expand_swaps else 1) * self.swap_count

    def counts(self) -> dict[str, int]:
        return {k: self.count(k) for k in (H, S, CNOT, SWAP)}

    def depth(self) -> int:
        return depth(self)

    def two_qubit_depth(self) -> int:
        return depth(self, two_qubit_only=True)

    def expand_swaps(self) -> CliffordCircuit:
        """Replace each SWAP by three CNOTs."""
        out = CliffordCircuit(self.n)
        for g in self.gates:
            if g.kind == SWAP:
                a, b = g.qubits
                out.extend([Gate.cx(a, b), Gate.cx(b, a), Gate.cx(a, b)])
            else:
                out.append(g)
        return out

    def inverse(self) -> CliffordCircuit:
        out = CliffordCircuit(self.n)
        for g in reversed(self.gates):
            if g.kind == S:
                out.extend([g, g, g])
            else:
                out.append(g)
        return out

    def final_layout(self) -> list[int]:
        """``layout[q]`` is where the content of qubit ``q`` sits after the SWAPs."""
        pos = list(range(self.n))
        at = list(range(self.n))
        for g in self.gates:
            if g.kind == SWAP:
                a, b = g.qubits
                at[a], at[b] = at[b], at[a]
                pos[at[a]] = a
                pos[at[b]] = b
        return pos

    def to_text(self) -> str:
        lines = [f"qubits {self.n}"]
        lines.extend(g.to_text() for g in self.gates)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CliffordCircuit:
        n = None
        gates = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            head = parts[0].lower()
            try:
                args = [int(a) for a in parts[1:]]
            except ValueError:
                raise CircuitFormatError(f"non-integer qubit index in {line!r}", lineno) from None
            if head == "qubits":
                if n is not None or len(args) != 1:
                    raise CircuitFormatError("malformed 'qubits' header", lineno)
                n = args[0]
                continue
            try:
                gates.append(Gate(head, tuple(args)))
            except ValueError as exc:
                raise CircuitFormatError(str(exc), lineno) from None
        if n is None:
            n = 1 + max((max(g.qubits) for g in gates), default=-1)
        try:
            return cls(n, gates)
        except ValueError as exc:
            raise CircuitFormatError(str(exc)) from None

    def to_dict(self) -> dict:
        return {"n": self.n, "gates": [{"gate": g.kind, "qubits": list(g.qubits)} for g in self.gates]}

    @classmethod
    def from_dict(cls, doc: dict) -> CliffordCircuit:
        try:
            gates = [Gate(str(g["gate"]).lower(), tuple(int(q) for q in g["qubits"])) for g in doc["gates"]]
            return cls(int(doc["n"]), gates)
        except (KeyError, TypeError, ValueError) as exc:
            raise CircuitFormatError(f"malformed circuit document: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> CliffordCircuit:
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, text: str) -> CliffordCircuit:
        """Read either serialization."""
        if text.lstrip().startswith("{"):
            return cls.from_json(text)
        return cls.from_text(text)


def depth(circuit: CliffordCircuit | Sequence[Gate], two_qubit_only: bool = False) -> int:
    """Greedy layering: each gate goes one layer after the latest gate on any of its qubits.

    Gates sharing a qubit are never placed in the same layer, even when they
    commute.
    """
    level: dict[int, int] = {}
    top = 0
    for g in circuit:
        if two_qubit_only and not g.is_two_qubit:
            continue
        d = 1 + max(level.get(q, 0) for q in g.qubits)
        for q in g.qubits:
            level[q] = d
        top = max(top, d)
    return top


def layers(circuit: CliffordCircuit | Sequence[Gate]) -> list[list[Gate]]:
    level: dict[int, int] = {}
    out: list[list[Gate]] = []
    for g in circuit:
        d = 1 + max(level.get(q, 0) for q in g.qubits)
        for q in g.qubits:
            level[q] = d
        if d > len(out):
            out.append([])
        out[d - 1].append(g)
    return out


def apply_gate(t: Tableau, g: Gate) -> None:
    """Conjugate every row of ``t`` by ``g`` in place."""
    if max(g.qubits) >= t.n:
        raise IndexError(f"gate {g} out of range for {t.n} qubits")
    x, z = t.xcols, t.zcols
    if g.kind == H:
        (a,) = g.qubits
        t.signs ^= x[a] & z[a]
        x[a], z[a] = z[a], x[a]
    elif g.kind == S:
        (a,) = g.qubits
        t.signs ^= x[a] & z[a]
        z[a] ^= x[a]
    elif g.kind == CNOT:
        c, tg = g.qubits
        mask = (1 << t.n_rows) - 1
        t.signs ^= x[c] & z[tg] & ~(x[tg] ^ z[c]) & mask
        x[tg] ^= x[c]
        z[c] ^= z[tg]
    else:
        a, b = g.qubits
        x[a], x[b] = x[b], x[a]
        z[a], z[b] = z[b], z[a]


def conjugate(t: Tableau, g: Gate) -> Tableau:
    out = t.copy()
    apply_gate(out, g)
    return out


def conjugate_circuit(t: Tableau, circuit: Iterable[Gate]) -> Tableau:
    out = t.copy()
    for g in circuit:
        apply_gate(out, g)
    return out


def conjugate_pauli(p: PauliString, circuit: Iterable[Gate]) -> PauliString:
    return conjugate_circuit(Tableau.from_paulis([p]), circuit).row(0)


def verify_diagonal(t: Tableau) -> bool:
    return not any(t.xcols)


def first_non_diagonal(t: Tableau) -> int | None:
    acc = 0
    for c in t.xcols:
        acc |= c
    if not acc:
        return None
    return (acc & -acc).bit_length() - 1


def gate_symplectic(g: Gate, n: int) -> BitMatrix:
    """The ``2n x 2n`` matrix ``C`` with ``(X|Z) -> (X|Z) C`` for one gate."""
    rows = [1 << i for i in range(2 * n)]
    if g.kind == H:
        (a,) = g.qubits
        rows[a] = 1 << (n + a)
        rows[n + a] = 1 << a
    elif g.kind == S:
        (a,) = g.qubits
        rows[a] |= 1 << (n + a)
    elif g.kind == CNOT:
        c, t = g.qubits
        rows[c] |= 1 << t
        rows[n + t] |= 1 << (n + c)
    else:
        a, b = g.qubits
        rows[a], rows[b] = 1 << b, 1 << a
        rows[n + a], rows[n + b] = 1 << (n + b), 1 << (n + a)
    return BitMatrix(rows, 2 * n)


def symplectic_form(n: int) -> BitMatrix:
    return BitMatrix([1 << (n + i) for i in range(n)] + [1 << i for i in range(n)], 2 * n)


def to_symplectic(circuit: CliffordCircuit) -> BitMatrix:
    """Product of the per-gate matrices in application order."""
    m = BitMatrix.identity(2 * circuit.n)
    for g in circuit:
        m = m @ gate_symplectic(g, circuit.n)
    return m


def is_symplectic(m: BitMatrix) -> bool:
    n = m.n_rows // 2
    lam = symplectic_form(n)
    return m @ lam @ m.T == lam


_SQ2 = 1 / np.sqrt(2)
_GATE_MATRICES = {
    H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    S: np.array([[1, 0], [0, 1j]], dtype=complex),
    CNOT: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    SWAP: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_size(n: int, limit: int) -> None:
    if n > limit:
        raise OracleSizeError(f"dense matrices are limited to {limit} qubits, got {n}")


def dense_unitary(circuit: CliffordCircuit, limit: int = DENSE_LIMIT) -> np.ndarray:
    """Exact ``2^n x 2^n`` unitary; qubit 0 is the most significant tensor factor."""
    n = circuit.n
    _check_size(n, limit)
    dim = 1 << n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in circuit:
        m = _GATE_MATRICES[g.kind]
        if len(g.qubits) == 1:
            (a,) = g.qubits
            u = np.moveaxis(np.tensordot(m, u, axes=([1], [a])), 0, a)
        else:
            a, b = g.qubits
            m4 = m.reshape(2, 2, 2, 2)
            u = np.moveaxis(np.tensordot(m4, u, axes=([2, 3], [a, b])), (0, 1), (a, b))
    return u.reshape(dim, dim)


def pauli_matrix(p: PauliString, limit: int = DENSE_LIMIT) -> np.ndarray:
    _check_size(p.n, limit)
    out = np.array([[1.0 + 0j]])
    for j in range(p.n):
        out = np.kron(out, _PAULI_MATRICES[p.digit(j)])
    return -out if p.sign else out


def dense_check_diagonal(circuit: CliffordCircuit, paulis: Sequence[PauliString],
                         atol: float = 1e-12, limit: int = DENSE_LIMIT) -> int | None:
    """Index of the first ``P`` with ``U P U^dagger`` not diagonal with +-1 entries, else None."""
    u = dense_unitary(circuit, limit)
    ud = u.conj().T
    for k, p in enumerate(paulis):
        m = u @ pauli_matrix(p, limit) @ ud
        diag = np.diag(m)
        off = m - np.diag(diag)
        if np.max(np.abs(off), initial=0.0) >= atol:
            return k
        if np.max(np.minimum(np.abs(diag - 1), np.abs(diag + 1))) >= atol:
            return k
    return None
