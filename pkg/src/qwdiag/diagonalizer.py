"""Qubitwise simultaneous diagonalization of commuting Pauli operators.

Each stage picks a vector ``(v, w)`` in the null space of the current
generator tableau ``(X|Z)`` restricted to the not-yet-diagonal qubits.  On
every qubit ``j`` of its support, single-qubit gates replace ``X_j`` by
``v_j X_j + w_j Z_j``; CNOTs then add those columns into one of them, which
sums to zero.  That qubit is diagonal for every operator and the loop
repeats on what is left.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .clifford import (CNOT, DENSE_LIMIT, SWAP, CliffordCircuit, Gate, apply_gate,
                       dense_check_diagonal, depth)
from .connectivity import ConnectivityGraph, route_step2, sppsn
from .gf2 import null_space_basis
from .pauli import (GeneratingSet, NullVector, PauliString, Tableau, dependent_column_candidates,
                    independent_generators, null_vector_from_column, standard_form)

__all__ = [
    "NullVector", "Strategy", "DiagonalizeOptions", "StageReport", "Diagonalization",
    "SizeError", "VerificationError", "select_null_vector", "null_vector_candidates",
    "select_target_qubit", "stage_step1", "stage_step2_sequential", "stage_step2_balanced",
    "diagonalize", "noopt_cnot_bound", "complete_cnot_bound",
]

SEQUENTIAL = "sequential"
BALANCED = "balanced"
COMPLETE_LIMIT = 24


class SizeError(ValueError):
    pass


class VerificationError(AssertionError):
    pass


@dataclass(frozen=True)
class Strategy:
    """Null-vector selection: ``noopt``, ``bounded`` (with ``z``) or ``complete``."""

    kind: str = "noopt"
    z: int | None = None

    def __post_init__(self):
        if self.kind not in ("noopt", "bounded", "complete"):
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.kind == "bounded" and (self.z is None or self.z < 1):
            raise ValueError("bounded strategy needs z >= 1")

    @classmethod
    def parse(cls, text: str) -> Strategy:
        kind, _, arg = text.strip().lower().partition(":")
        if kind == "bounded":
            if not arg:
                raise ValueError("use bounded:<z>")
            return cls("bounded", int(arg))
        if arg:
            raise ValueError(f"strategy {kind!r} takes no argument")
        return cls(kind)

    def __str__(self) -> str:
        return f"bounded:{self.z}" if self.kind == "bounded" else self.kind


NOOPT = Strategy("noopt")
COMPLETE = Strategy("complete")


@dataclass
class DiagonalizeOptions:
    strategy: Strategy = NOOPT
    step2: str = SEQUENTIAL
    oracle_verify: bool = False
    seed: int = 0
    graph: ConnectivityGraph | None = None
    complete_limit: int = COMPLETE_LIMIT

    def __post_init__(self):
        if isinstance(self.strategy, str):
            self.strategy = Strategy.parse(self.strategy)
        if self.step2 in ("seq", SEQUENTIAL):
            self.step2 = SEQUENTIAL
        elif self.step2 != BALANCED:
            raise ValueError(f"unknown step2 mode {self.step2!r}")


@dataclass
class StageReport:
    index: int
    n_alpha: int
    r_alpha: int
    target: int
    weight: int
    support: list[int]
    null_vector: str
    single_qubit_gates: int
    cnots: int
    swaps: int
    depth: int
    two_qubit_depth: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Diagonalization:
    circuit: CliffordCircuit
    final: Tableau
    stages: list[StageReport]
    rank: int
    layout: list[int] = field(default_factory=list)

    @property
    def cnot_count(self) -> int:
        return self.circuit.cnot_count

    @property
    def swap_count(self) -> int:
        return self.circuit.swap_count

    @property
    def depth(self) -> int:
        return self.circuit.depth()

    def __iter__(self):
        return iter((self.circuit, self.final, self.stages))


def noopt_cnot_bound(n: int, r: int) -> int:
    return n * r - r * (r + 1) // 2


def complete_cnot_bound(n: int, r: int) -> int:
    h = r // 2
    return n * h - h * h


# --- null-vector selection ----------------------------------------------------------


def _weights(vals: np.ndarray, n: int) -> np.ndarray:
    return np.bitwise_count((vals | (vals >> n)) & ((1 << n) - 1))


def _null_space_span(basis: list[int], n: int) -> np.ndarray:
    """Every combination of ``basis``; entry ``k`` is the XOR over the set bits of ``k``."""
    dtype = np.uint32 if 2 * n <= 32 else np.uint64
    vals = np.zeros(1, dtype=dtype)
    for b in basis:
        vals = np.concatenate([vals, vals ^ dtype(b)])
    return vals


def _stage_basis(gs: GeneratingSet) -> list[int]:
    return [u.bits for u in null_space_basis(gs.tableau.matrix)]


def _noopt_candidates(gs: GeneratingSet) -> list[NullVector]:
    sf = standard_form(gs)
    return [null_vector_from_column(sf, m) for m in dependent_column_candidates(sf)]


def _as_null_vector(vec: int, n: int) -> NullVector:
    return NullVector.from_bits(n, vec & ((1 << n) - 1), vec >> n)


def null_vector_candidates(gs: GeneratingSet, strategy: Strategy = NOOPT,
                           complete_limit: int = COMPLETE_LIMIT, limit: int = 64) -> list[NullVector]:
    """All minimum-weight vectors the strategy considers, best-ranked first (at most ``limit``)."""
    n, r = gs.n, gs.r
    if r == 0:
        raise ValueError("empty generating set")
    if strategy.kind == "noopt":
        return _noopt_candidates(gs)[:limit]
    if strategy.kind == "complete":
        dim = 2 * n - r
        if dim > complete_limit:
            raise SizeError(f"null space dimension {dim} exceeds the complete-search limit "
                            f"{complete_limit}; use bounded:<z> instead")
        vals = _null_space_span(_stage_basis(gs), n)[1:]
        w = _weights(vals, n)
        best = w.min()
        idx = np.flatnonzero(w == best)[:limit]
        return [_as_null_vector(int(vals[i]), n) for i in idx]
    basis = _stage_basis(gs)
    z = min(strategy.z, len(basis))
    seed = _noopt_candidates(gs)[0]
    cands = [seed.as_vector().bits]
    for size in range(1, z + 1):
        for combo in itertools.combinations(basis, size):
            cands.append(reduce(lambda a, b: a ^ b, combo))
    mask = (1 << n) - 1
    ws = [((c | (c >> n)) & mask).bit_count() for c in cands]
    best = min(ws)
    out, seen = [], set()
    for c, wt in zip(cands, ws):
        if wt == best and c not in seen:
            seen.add(c)
            out.append(_as_null_vector(c, n))
            if len(out) == limit:
                break
    return out


def select_null_vector(gs: GeneratingSet, strategy: Strategy = NOOPT,
                       complete_limit: int = COMPLETE_LIMIT) -> NullVector:
    """Null vector of the generators' tableau chosen by ``strategy``.

    ``noopt`` sums the lightest dependent column of the standard form with
    the identity columns it is built from.  ``complete`` returns a global
    minimum-weight vector.  ``bounded`` takes the lightest XOR of at most
    ``z`` null-space basis vectors, with the ``noopt`` vector as a fallback.
    """
    return null_vector_candidates(gs, strategy, complete_limit, limit=1)[0]


def select_target_qubit(u: NullVector) -> int:
    support = u.support()
    if not support:
        raise ValueError("zero null vector has no support")
    return support[0]


# --- stage construction ------------------------------------------------------------


def stage_step1(u: NullVector, qubits: Sequence[int] | None = None) -> list[Gate]:
    """Single-qubit gates turning ``X_j`` into ``v_j X_j + w_j Z_j`` on the support.

    ``qubits[j]`` is the physical qubit of local index ``j`` (identity if omitted).
    """
    gates = []
    for j in range(u.n):
        if not u.w[j]:
            continue
        q = j if qubits is None else qubits[j]
        if u.v[j]:
            gates.append(Gate.s(q))
        gates.append(Gate.h(q))
    return gates


def stage_step2_sequential(support: Sequence[int], target: int) -> list[Gate]:
    if target not in support:
        raise ValueError(f"target {target} not in support {list(support)}")
    return [Gate.cx(j, target) for j in sorted(support) if j != target]


def stage_step2_balanced(support: Sequence[int]) -> tuple[list[Gate], int]:
    """Pairwise folding in rounds of disjoint CNOTs; returns the gates and the survivor."""
    if not support:
        raise ValueError("empty support")
    q = sorted(support)
    gates = []
    while len(q) > 1:
        for j in range(len(q) // 2):
            gates.append(Gate.cx(q[2 * j + 1], q[2 * j]))
        q = q[::2]
    return gates, q[0]


def _check_inputs(paulis: Sequence[PauliString]) -> Tableau:
    if not paulis:
        raise ValueError("no operators to diagonalize")
    tab = Tableau.from_paulis(list(paulis))
    tab.require_commuting()
    return tab


def diagonalize(paulis: Sequence[PauliString], options: DiagonalizeOptions | None = None) -> Diagonalization:
    """Build a Clifford circuit that makes every operator in ``paulis`` diagonal."""
    opts = options or DiagonalizeOptions()
    tab = _check_inputs(paulis)
    n = tab.n
    graph = opts.graph
    if graph is not None and graph.n != n:
        raise ValueError(f"coupling graph has {graph.n} vertices but operators act on {n} qubits")
    rank = independent_generators(tab, check=False).r
    if opts.strategy.kind == "bounded" and opts.strategy.z > max(1, 2 * n - rank):
        raise ValueError(f"bounded z={opts.strategy.z} exceeds 2n - r = {2 * n - rank}")
    circuit = CliffordCircuit(n)
    stages: list[StageReport] = []
    prev_active = n + 1
    while True:
        active = tab.active_qubits()
        if not active:
            break
        if len(active) >= prev_active:
            raise VerificationError("stage failed to reduce the number of active qubits")
        prev_active = len(active)
        gs = independent_generators(tab.restrict(active), check=False, qubit_map=active)
        if len(active) == 1:
            # one qubit left: X -> (0,1), Y -> (1,1) up to Z-only rows
            gen = gs.tableau
            u = NullVector.from_bits(1, gen.zcols[0] & 1, 1)
            candidates = [u]
        else:
            candidates = null_vector_candidates(gs, opts.strategy, opts.complete_limit,
                                                limit=64 if graph is not None else 1)
        if graph is not None and len(candidates) > 1:
            def walk_len(c: NullVector) -> int:
                return sppsn(graph, [active[j] for j in c.support()]).length
            u = min(candidates, key=walk_len)
        else:
            u = candidates[0]
        support = [active[j] for j in u.support()]
        gates = stage_step1(u, active)
        if graph is not None:
            routed = route_step2(support, graph)
            step2, target = routed.gates, routed.target
        elif opts.step2 == BALANCED:
            step2, target = stage_step2_balanced(support)
        else:
            target = active[select_target_qubit(u)]
            step2 = stage_step2_sequential(support, target)
        gates = gates + step2
        for g in gates:
            apply_gate(tab, g)
            circuit.append(g)
        if tab.xcols[target]:
            raise VerificationError(f"stage {len(stages)} left qubit {target} non-diagonal")
        stages.append(StageReport(
            index=len(stages),
            n_alpha=len(active),
            r_alpha=gs.r,
            target=target,
            weight=u.weight,
            support=support,
            null_vector=str(u),
            single_qubit_gates=sum(1 for g in gates if not g.is_two_qubit),
            cnots=sum(1 for g in gates if g.kind == CNOT),
            swaps=sum(1 for g in gates if g.kind == SWAP),
            depth=depth(gates),
            two_qubit_depth=depth(gates, two_qubit_only=True),
        ))
    if opts.oracle_verify and n <= DENSE_LIMIT:
        bad = dense_check_diagonal(circuit, list(paulis))
        if bad is not None:
            raise VerificationError(f"dense check failed for operator {bad} ({paulis[bad]})")
    return Diagonalization(circuit, tab, stages, rank, circuit.final_layout())
