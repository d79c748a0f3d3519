"""Random commuting sets and the averaged benchmarking protocol."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .clifford import CliffordCircuit, Gate, apply_gate, verify_diagonal
from .connectivity import ConnectivityGraph
from .diagonalizer import (NOOPT, DiagonalizeOptions, Strategy, VerificationError,
                           complete_cnot_bound, diagonalize, noopt_cnot_bound)
from .gf2 import BitMatrix, rank
from .pauli import PauliString, Tableau

CSV_COLUMNS = ["n", "r", "strategy", "step2", "graph", "samples", "mean_cnot", "sd_cnot",
               "max_cnot", "cnot_bound", "mean_depth", "sd_depth", "mean_swaps", "sd_swaps"]


def _full_rank_rows(rng: np.random.Generator, rows: int, cols: int) -> list[int]:
    while True:
        packed = BitMatrix.from_array(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8))
        if rank(packed) == min(rows, cols):
            return list(packed.rows)


def _distinct_combinations(rng: np.random.Generator, count: int, r: int) -> list[int]:
    """``count`` distinct nonzero subsets of ``r`` generators that together use all of them."""
    while True:
        picked: dict[int, None] = {}
        while len(picked) < count:
            c = int(BitMatrix.from_array(rng.integers(0, 2, size=(1, r), dtype=np.uint8)).rows[0])
            if c:
                picked[c] = None
        rows = list(picked)
        if rank(BitMatrix(rows, r)) == r:
            return rows


def clifford_word_length(n: int) -> int:
    return max(5, math.ceil(5 * n * math.log2(n))) if n > 1 else 5


def random_clifford(n: int, rng: np.random.Generator, length: int | None = None) -> CliffordCircuit:
    """Uniformly random word over H, S and CNOT on random qubits."""
    if length is None:
        length = clifford_word_length(n)
    kinds = ["h", "s", "cx"] if n > 1 else ["h", "s"]
    c = CliffordCircuit(n)
    for _ in range(length):
        k = kinds[int(rng.integers(len(kinds)))]
        if k == "cx":
            a, b = (int(q) for q in rng.choice(n, size=2, replace=False))
            c.append(Gate.cx(a, b))
        else:
            c.append(Gate(k, (int(rng.integers(n)),)))
    return c


def random_commuting_set(n: int, r: int, seed=None, n_ops: int | None = None,
                         rng: np.random.Generator | None = None) -> list[PauliString]:
    """``r`` independent commuting Paulis on ``n`` qubits, scrambled by a random Clifford.

    With ``n_ops`` the result instead holds ``n_ops`` products of those
    generators, still of rank ``r``.
    """
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    if n_ops is not None and not r <= n_ops < 1 << r:
        raise ValueError(f"n_ops={n_ops} distinct products cannot have rank {r}")
    if rng is None:
        rng = np.random.default_rng(seed)
    zs = _full_rank_rows(rng, r, n)
    signs = [int(b) for b in rng.integers(0, 2, size=r)]
    if n_ops is not None:
        coeffs = _distinct_combinations(rng, n_ops, r)
        prods = []
        for c in coeffs:
            z = s = 0
            for i in range(r):
                if (c >> i) & 1:
                    z ^= zs[i]
                    s ^= signs[i]
            prods.append((z, s))
        zs = [p[0] for p in prods]
        signs = [p[1] for p in prods]
    tab = Tableau.from_paulis([PauliString.from_bits(n, 0, z, s) for z, s in zip(zs, signs)])
    for g in random_clifford(n, rng):
        apply_gate(tab, g)
    out = tab.rows()
    if rank(tab.matrix) != r:
        raise AssertionError("generated set has the wrong rank")
    return out


def cell_rng(seed: int, n: int, r: int) -> np.random.Generator:
    """Independent stream per ``(n, r)`` cell, shared by all strategies of that cell."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, r)))


@dataclass
class BenchConfig:
    ns: Sequence[int]
    rs: Sequence[int] | None = None     # None: r = n
    samples: int = 100
    seed: int = 0
    strategies: Sequence[Strategy] = (NOOPT,)
    step2: str = "sequential"
    graph: str | None = None
    n_ops: int | None = None

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("samples must be >= 2 for a sample variance")
        self.strategies = tuple(Strategy.parse(s) if isinstance(s, str) else s for s in self.strategies)

    def cells(self) -> list[tuple[int, int]]:
        out = []
        for n in self.ns:
            for r in ([n] if self.rs is None else self.rs):
                if 1 <= r <= n:
                    out.append((n, r))
        return out


@dataclass
class BenchRecord:
    n: int
    r: int
    strategy: str
    step2: str
    graph: str
    samples: int
    mean_cnot: float
    sd_cnot: float
    max_cnot: int
    cnot_bound: int
    mean_depth: float
    sd_depth: float
    mean_swaps: float
    sd_swaps: float
    mean_wall_ms: float = 0.0
    sd_wall_ms: float = 0.0
    cnots: list[int] = field(default_factory=list, repr=False)
    depths: list[int] = field(default_factory=list, repr=False)

    def row(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in CSV_COLUMNS}


def _sample_sd(values) -> float:
    return float(np.std(values, ddof=1))


def bound_for(strategy: Strategy, n: int, r: int) -> int:
    return complete_cnot_bound(n, r) if strategy.kind == "complete" else noopt_cnot_bound(n, r)


def graph_for(source: str | None, n: int) -> ConnectivityGraph | None:
    """Resolve a preset for ``n`` qubits; a bare family name such as ``line`` is sized to ``n``."""
    if not source:
        return None
    if ":" not in source:
        source = f"{source}:{n}"
    g = ConnectivityGraph.preset(source)
    if g.n != n:
        raise ValueError(f"graph {source} has {g.n} vertices, cell needs {n}")
    return g


def run_cell(cfg: BenchConfig, n: int, r: int) -> list[BenchRecord]:
    graph = graph_for(cfg.graph, n)
    rng = cell_rng(cfg.seed, n, r)
    sets = [random_commuting_set(n, r, rng=rng, n_ops=cfg.n_ops) for _ in range(cfg.samples)]
    records = []
    for strategy in cfg.strategies:
        opts = DiagonalizeOptions(strategy=strategy, step2=cfg.step2, graph=graph)
        bound = bound_for(strategy, n, r)
        cn, dp, sw, wall = [], [], [], []
        for paulis in sets:
            t0 = time.perf_counter()
            res = diagonalize(paulis, opts)
            wall.append(1e3 * (time.perf_counter() - t0))
            if not verify_diagonal(res.final):
                raise VerificationError(f"non-diagonal result at n={n}, r={r}")
            if res.cnot_count > bound:
                raise VerificationError(f"{res.cnot_count} CNOTs exceed bound {bound} at n={n}, r={r}")
            cn.append(res.cnot_count)
            dp.append(res.depth)
            sw.append(res.swap_count)
        records.append(BenchRecord(
            n=n, r=r, strategy=str(strategy), step2=cfg.step2, graph=cfg.graph or "full",
            samples=cfg.samples,
            mean_cnot=float(np.mean(cn)), sd_cnot=_sample_sd(cn), max_cnot=max(cn), cnot_bound=bound,
            mean_depth=float(np.mean(dp)), sd_depth=_sample_sd(dp),
            mean_swaps=float(np.mean(sw)), sd_swaps=_sample_sd(sw),
            mean_wall_ms=float(np.mean(wall)), sd_wall_ms=_sample_sd(wall),
            cnots=cn, depths=dp,
        ))
    return records


def run_benchmark(cfg: BenchConfig, workers: int = 1) -> list[BenchRecord]:
    """Diagonalize ``cfg.samples`` random sets per ``(n, r, strategy)`` cell.

    Every sample is checked for diagonality and against the CNOT bound of its
    strategy.  Output is independent of ``workers``.
    """
    cells = cfg.cells()
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(run_cell, [cfg] * len(cells), *zip(*cells)))
    else:
        chunks = [run_cell(cfg, n, r) for n, r in cells]
    return [rec for chunk in chunks for rec in chunk]


def _fmt(v) -> str:
    return f"{v:.6f}" if isinstance(v, float) else str(v)


def records_to_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        row = rec.row()
        w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def records_from_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


@dataclass
class QuadraticFit:
    a: float
    b: float
    c: float
    r2: float


def fit_quadratic(xs: Sequence[float], ys: Sequence[float]) -> QuadraticFit:
    """Least-squares fit of ``-a x^2 + b x + c``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    design = np.column_stack([-x * x, x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    pred = design @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return QuadraticFit(float(coef[0]), float(coef[1]), float(coef[2]), r2)
