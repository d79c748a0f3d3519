"""Grouping Pauli-sum terms into mutually commuting sets by coloring the anticommutation graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .pauli import PauliString, commutes, read_terms, write_terms

STRATEGIES = ("largest-first-independent-set", "greedy-color")


@dataclass(frozen=True)
class TermList:
    """Weighted Pauli terms on a common qubit count, one entry per distinct string.

    Signs are folded into the coefficient, so every stored Pauli is unsigned.
    """

    n: int
    terms: tuple[tuple[float, PauliString], ...]

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[float, PauliString]]) -> TermList:
        merged: dict[PauliString, float] = {}
        n = None
        for coef, p in terms:
            if n is None:
                n = p.n
            elif p.n != n:
                raise ValueError(f"term {p} has {p.n} qubits, expected {n}")
            key = p.unsigned()
            merged[key] = merged.get(key, 0.0) + (-coef if p.sign else coef)
        if n is None:
            raise ValueError("empty term list")
        return cls(n, tuple((c, p) for p, c in merged.items()))

    @classmethod
    def parse(cls, text: str) -> TermList:
        return cls.from_terms(read_terms(text))

    def to_text(self) -> str:
        return write_terms(self.terms)

    @property
    def paulis(self) -> list[PauliString]:
        return [p for _, p in self.terms]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[float, PauliString]]:
        return iter(self.terms)

    def is_commuting(self) -> bool:
        ps = self.paulis
        return all(commutes(ps[i], ps[j]) for i in range(len(ps)) for j in range(i))


def anticommutation_graph(paulis: Sequence[PauliString]) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in paulis]
    for i in range(len(paulis)):
        for j in range(i):
            if not commutes(paulis[i], paulis[j]):
                adj[i].add(j)
                adj[j].add(i)
    return adj


def _independent_set_coloring(adj: list[set[int]]) -> list[list[int]]:
    # Each class is a maximal independent set of what remains, built by
    # repeatedly taking the vertex of least remaining degree.
    left = set(range(len(adj)))
    parts = []
    while left:
        cand = set(left)
        part = []
        while cand:
            v = min(cand, key=lambda u: (len(adj[u] & cand), u))
            part.append(v)
            cand -= adj[v] | {v}
        parts.append(sorted(part))
        left -= set(part)
    return parts


def _greedy_coloring(adj: list[set[int]]) -> list[list[int]]:
    order = sorted(range(len(adj)), key=lambda u: (-len(adj[u]), u))
    color: dict[int, int] = {}
    for v in order:
        used = {color[u] for u in adj[v] if u in color}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    parts: list[list[int]] = [[] for _ in range(max(color.values(), default=-1) + 1)]
    for v in range(len(adj)):
        parts[color[v]].append(v)
    return parts


def partition_indices(paulis: Sequence[PauliString], strategy: str = STRATEGIES[0]) -> list[list[int]]:
    adj = anticommutation_graph(paulis)
    if strategy == "largest-first-independent-set":
        return _independent_set_coloring(adj)
    if strategy == "greedy-color":
        return _greedy_coloring(adj)
    raise ValueError(f"unknown partition strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")


def commuting_partition(terms: TermList, strategy: str = STRATEGIES[0]) -> list[TermList]:
    """Split ``terms`` into parts whose members pairwise commute.

    Deterministic for a given input order.  ``len(result)`` is the number of
    measurement groups.
    """
    idx = partition_indices(terms.paulis, strategy)
    return [TermList(terms.n, tuple(terms.terms[i] for i in part)) for part in idx]
