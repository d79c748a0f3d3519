"""Hardware coupling graphs and SWAP-based routing of the CNOT folding step.

Routing keeps the accumulating (target) column in place and brings every
other column of the stage support next to it with SWAPs along shortest
paths, then folds it in with a CNOT controlled by the moved column.  The
set of CNOTs is therefore exactly the unconstrained sequential fold up to a
relabeling of qubits; only SWAPs are added.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .clifford import Gate


class GraphError(ValueError):
    pass


class ConnectivityGraph:
    """Undirected coupling graph on qubits ``0..n-1``."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], name: str | None = None):
        self.n = n
        self.name = name
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise GraphError(f"self-loop on qubit {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) outside {n} vertices")
            adj[a].add(b)
            adj[b].add(a)
        self._adj = [tuple(sorted(s)) for s in adj]
        self._dist: list[list[int]] | None = None

    @classmethod
    def line(cls, n: int) -> ConnectivityGraph:
        return cls(n, [(i, i + 1) for i in range(n - 1)], f"line:{n}")

    @classmethod
    def ring(cls, n: int) -> ConnectivityGraph:
        edges = [(i, (i + 1) % n) for i in range(n)] if n > 2 else [(i, i + 1) for i in range(n - 1)]
        return cls(n, edges, f"ring:{n}")

    @classmethod
    def grid(cls, rows: int, cols: int) -> ConnectivityGraph:
        edges = []
        for r in range(rows):
            for c in range(cols):
                q = r * cols + c
                if c + 1 < cols:
                    edges.append((q, q + 1))
                if r + 1 < rows:
                    edges.append((q, q + cols))
        return cls(rows * cols, edges, f"grid:{rows}x{cols}")

    @classmethod
    def full(cls, n: int) -> ConnectivityGraph:
        return cls(n, itertools.combinations(range(n), 2), f"full:{n}")

    @classmethod
    def preset(cls, name: str) -> ConnectivityGraph:
        kind, _, arg = name.partition(":")
        try:
            if kind == "line":
                return cls.line(int(arg))
            if kind == "ring":
                return cls.ring(int(arg))
            if kind == "full":
                return cls.full(int(arg))
            if kind == "grid":
                r, c = arg.lower().split("x")
                return cls.grid(int(r), int(c))
        except ValueError:
            pass
        raise GraphError(f"unknown graph preset {name!r}")

    @classmethod
    def from_edge_list(cls, text: str, n: int | None = None) -> ConnectivityGraph:
        """Parse ``u v`` lines; ``#`` starts a comment."""
        edges = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(f"line {lineno}: expected 'u v'")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise GraphError(f"line {lineno}: non-integer vertex") from None
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls(n, edges)

    def to_edge_list(self) -> str:
        return "".join(f"{a} {b}\n" for a, b in self.edges)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in self._adj[a] if a < b]

    def neighbors(self, q: int) -> tuple[int, ...]:
        return self._adj[q]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj[a]

    def bfs(self, source: int) -> tuple[list[int], list[int]]:
        """Distances and parent pointers; unreachable vertices get -1."""
        dist = [-1] * self.n
        parent = [-1] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self._adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
        return dist, parent

    def is_connected(self) -> bool:
        return self.n == 0 or min(self.bfs(0)[0]) >= 0

    @property
    def distances(self) -> list[list[int]]:
        if self._dist is None:
            self._dist = all_pairs_distances(self)
        return self._dist

    def shortest_path(self, a: int, b: int) -> list[int]:
        """Vertices from ``a`` to ``b``; ties broken toward lower-numbered vertices."""
        dist, parent = self.bfs(b)
        if dist[a] < 0:
            raise GraphError(f"no path between {a} and {b}")
        path = [a]
        while path[-1] != b:
            u = path[-1]
            path.append(min(v for v in self._adj[u] if dist[v] == dist[u] - 1))
        return path

    def __repr__(self) -> str:
        return f"ConnectivityGraph({self.name or self.n})"


def all_pairs_distances(g: ConnectivityGraph) -> list[list[int]]:
    out = []
    for s in range(g.n):
        dist, _ = g.bfs(s)
        if min(dist) < 0:
            raise GraphError("coupling graph is disconnected")
        out.append(dist)
    return out


@dataclass
class Walk:
    """A walk visiting every required vertex.

    ``order`` lists the required vertices in visiting order; ``vertices`` is
    the full walk with the shortest connecting paths filled in.
    """

    order: list[int]
    vertices: list[int]
    length: int
    exact: bool


EXACT_LIMIT = 12


def _path_length(order: Sequence[int], dist) -> int:
    return sum(dist[a][b] for a, b in zip(order, order[1:]))


def _held_karp(req: list[int], dist) -> list[int]:
    k = len(req)
    d = [[dist[a][b] for b in req] for a in req]
    full = (1 << k) - 1
    inf = float("inf")
    cost = [[inf] * k for _ in range(1 << k)]
    back = [[-1] * k for _ in range(1 << k)]
    for j in range(k):
        cost[1 << j][j] = 0
    for mask in range(1, full + 1):
        row = cost[mask]
        for j in range(k):
            c = row[j]
            if c == inf:
                continue
            dj = d[j]
            for nxt in range(k):
                bit = 1 << nxt
                if mask & bit:
                    continue
                nc = c + dj[nxt]
                m2 = mask | bit
                if nc < cost[m2][nxt]:
                    cost[m2][nxt] = nc
                    back[m2][nxt] = j
    end = min(range(k), key=lambda j: cost[full][j])
    order = []
    mask = full
    while end >= 0:
        order.append(end)
        prev = back[mask][end]
        mask ^= 1 << end
        end = prev
    order.reverse()
    return [req[j] for j in order]


def _two_opt(order: list[int], dist) -> list[int]:
    best = list(order)
    improved = True
    while improved:
        improved = False
        for i in range(len(best) - 1):
            for j in range(i + 2, len(best) + 1):
                cand = best[:i] + best[i:j][::-1] + best[j:]
                if _path_length(cand, dist) < _path_length(best, dist):
                    best = cand
                    improved = True
    return best


def _greedy_walk(req: list[int], dist) -> list[int]:
    best = None
    for start in req:
        order = [start]
        left = set(req) - {start}
        while left:
            cur = order[-1]
            nxt = min(left, key=lambda v: (dist[cur][v], v))
            order.append(nxt)
            left.remove(nxt)
        order = _two_opt(order, dist)
        if best is None or _path_length(order, dist) < _path_length(best, dist):
            best = order
    return best


def sppsn(g: ConnectivityGraph, required: Iterable[int], exact_limit: int = EXACT_LIMIT) -> Walk:
    """Shortest walk through all ``required`` vertices (other vertices optional).

    Exact subset dynamic programming over the shortest-path metric up to
    ``exact_limit`` required vertices; nearest-neighbour plus 2-opt beyond.
    """
    req = sorted(set(required))
    if not req:
        raise GraphError("no required vertices")
    for q in req:
        if not 0 <= q < g.n:
            raise GraphError(f"required vertex {q} outside graph of {g.n} vertices")
    dist = g.distances
    exact = len(req) <= exact_limit
    order = _held_karp(req, dist) if exact else _greedy_walk(req, dist)
    vertices = [order[0]]
    for a, b in zip(order, order[1:]):
        vertices.extend(g.shortest_path(a, b)[1:])
    return Walk(order, vertices, _path_length(order, dist), exact)


@dataclass
class RoutedStage:
    """CNOT folding of one stage on a coupling graph.

    ``target`` is the qubit left diagonal.  ``relabel[p]`` is the position,
    after this stage, of the column that sat at position ``p`` before it.
    """

    order: list[int]
    target: int
    gates: list[Gate]
    walk: Walk
    relabel: list[int] = field(default_factory=list)

    @property
    def swaps(self) -> int:
        return sum(1 for g in self.gates if g.kind == "swap")

    @property
    def cnots(self) -> int:
        return sum(1 for g in self.gates if g.kind == "cx")


def _fold_order(walk: Walk, target: int) -> list[int]:
    """Required vertices other than the target, nearest along the walk first."""
    t = walk.order.index(target)
    rest = [(abs(i - t), i, q) for i, q in enumerate(walk.order) if q != target]
    return [q for _, _, q in sorted(rest)]


def _route(g: ConnectivityGraph, walk: Walk, target: int) -> tuple[list[Gate], list[int]]:
    n = g.n
    at = list(range(n))    # at[position] = column originally at that position
    pos = list(range(n))   # pos[column] = its current position
    gates: list[Gate] = []
    for col in _fold_order(walk, target):
        path = g.shortest_path(pos[col], target)
        for a, b in zip(path, path[1:-1]):
            gates.append(Gate.swap(a, b))
            ca, cb = at[a], at[b]
            at[a], at[b] = cb, ca
            pos[ca], pos[cb] = b, a
        gates.append(Gate.cx(pos[col], target))
    return gates, pos


def route_cost(g: ConnectivityGraph, walk: Walk, target: int) -> int:
    gates, _ = _route(g, walk, target)
    return sum(1 for x in gates if x.kind == "swap")


def choose_target(g: ConnectivityGraph, walk: Walk) -> int:
    """Required vertex whose routing needs the fewest SWAPs (lowest index on ties)."""
    return min(walk.order, key=lambda q: (route_cost(g, walk, q), q))


def route_step2(support: Sequence[int], g: ConnectivityGraph, target: int | None = None,
                walk: Walk | None = None) -> RoutedStage:
    if not support:
        raise GraphError("empty support")
    if not g.is_connected():
        raise GraphError("coupling graph is disconnected")
    if walk is None:
        walk = sppsn(g, support)
    if target is None:
        target = choose_target(g, walk)
    elif target not in walk.order:
        raise GraphError(f"target {target} not in support")
    gates, pos = _route(g, walk, target)
    return RoutedStage(list(walk.order), target, gates, walk, pos)
