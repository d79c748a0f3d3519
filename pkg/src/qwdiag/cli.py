"""Command-line entry point: ``qwdiag <subcommand> ...``.

Exit codes: 0 success, 1 unparsable input, 2 unmet precondition (for
example non-commuting operators), 3 failed verification.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bench import BenchConfig, random_commuting_set, records_to_csv, run_benchmark
from .clifford import (DENSE_LIMIT, CircuitFormatError, CliffordCircuit, OracleSizeError,
                       conjugate_circuit, dense_check_diagonal, first_non_diagonal)
from .connectivity import ConnectivityGraph, GraphError
from .diagonalizer import DiagonalizeOptions, SizeError, Strategy, VerificationError, diagonalize
from .partition import STRATEGIES, TermList, commuting_partition
from .pauli import NonCommutingError, PauliParseError, Tableau, read_terms, write_terms

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PRECONDITION) from None


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def parse_range(text: str) -> list[int]:
    """``"4..12"``, ``"1,3,5"`` or a single integer."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def _range_arg(text: str) -> list[int]:
    try:
        return parse_range(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}") from None


def _strategy_arg(text: str) -> Strategy:
    try:
        return Strategy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def load_graph(source: str, n: int) -> ConnectivityGraph:
    if os.path.exists(source):
        try:
            g = ConnectivityGraph.from_edge_list(Path(source).read_text(), n=None)
        except GraphError as exc:
            raise CliError(f"{source}: {exc}", EXIT_PARSE) from None
        if g.n < n:
            g = ConnectivityGraph(n, g.edges, source)
        g.name = g.name or source
    else:
        g = ConnectivityGraph.preset(source)
    if g.n != n:
        raise CliError(f"graph {source} has {g.n} vertices but the operators act on {n} qubits",
                       EXIT_PRECONDITION)
    if not g.is_connected():
        raise CliError(f"graph {source} is disconnected", EXIT_PRECONDITION)
    return g


@dataclass
class Manifest:
    subcommand: str
    options: dict
    inputs: dict = field(default_factory=dict)
    seed: int | None = None
    version: str = __version__
    wall_time: float = 0.0
    timing: dict | None = None

    def write(self, out: Path) -> None:
        doc = {k: v for k, v in self.__dict__.items() if v is not None}
        (out / "manifest.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (Strategy, Path)):
        return str(v)
    return v


def _options_of(args: argparse.Namespace) -> dict:
    return {k: _plain(v) for k, v in sorted(vars(args).items()) if k not in ("func", "out")}


def _emit(text: str, out: Path | None, name: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        (out / name).write_text(text)


def _prepare_out(args) -> Path | None:
    if not getattr(args, "out", None):
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# diagonalize --------------------------------------------------------------

def _diagonalize_part(job):
    terms, opts = job
    return diagonalize([p for _, p in terms], opts)


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def summary_metrics(n: int, parts, results) -> dict:
    """Per-Hamiltonian summary over its commuting sets; spreads are population SDs."""
    cn = [r.cnot_count for r in results]
    dp = [r.depth for r in results]
    rk = [r.rank for r in results]
    return {
        "n": n,
        "N": sum(len(p) for p in parts),
        "kappa": len(parts),
        "mean_r": float(np.mean(rk)),
        "mean_cnot": float(np.mean(cn)),
        "sd_cnot": float(np.std(cn)),
        "mean_depth": float(np.mean(dp)),
        "sd_depth": float(np.std(dp)),
    }


def _set_doc(k: int, part: TermList, res) -> dict:
    return {
        "index": k,
        "N": len(part),
        "rank": res.rank,
        "cnots": res.cnot_count,
        "swaps": res.swap_count,
        "single_qubit_gates": sum(1 for g in res.circuit if not g.is_two_qubit),
        "depth": res.depth,
        "terms": [{"coefficient": c, "pauli": str(p)} for c, p in part],
        "stages": [s.to_dict() for s in res.stages],
        "circuit": res.circuit.to_dict(),
        "final": [str(p) for p in res.final.rows()],
        "layout": res.layout,
    }


def report_text(metrics: dict, sets: list[dict], header: dict) -> str:
    lines = [f"# {k} {v}" for k, v in header.items()]
    for key in ("n", "N", "kappa"):
        lines.append(f"{key} {metrics[key]}")
    for key in ("mean_r", "mean_cnot", "sd_cnot", "mean_depth", "sd_depth"):
        lines.append(f"{key} {_fmt(metrics[key])}")
    for s in sets:
        lines.append("")
        lines.append(f"set {s['index']}: N={s['N']} r={s['rank']} cnot={s['cnots']} swap={s['swaps']} "
                     f"single={s['single_qubit_gates']} depth={s['depth']}")
        for st in s["stages"]:
            lines.append(f"  stage {st['index']}: n_alpha={st['n_alpha']} r_alpha={st['r_alpha']} "
                         f"null={st['null_vector']} weight={st['weight']} target={st['target']} "
                         f"cnot={st['cnots']} swap={st['swaps']} depth={st['depth']}")
        lines.append("  circuit:")
        lines.extend(f"    {g['gate']} {' '.join(map(str, g['qubits']))}" for g in s["circuit"]["gates"])
        lines.append("  final:")
        for t, f in zip(s["terms"], s["final"]):
            lines.append(f"    {t['pauli']} -> {f}")
        if s["layout"] != list(range(len(s["layout"]))):
            lines.append(f"  layout: {' '.join(map(str, s['layout']))}")
    return "\n".join(lines) + "\n"


def cmd_diagonalize(args) -> int:
    t0 = time.perf_counter()
    text = _read(args.input)
    terms = TermList.parse(text)
    n = terms.n
    graph = load_graph(args.graph, n) if args.graph else None
    if args.partition:
        parts = commuting_partition(terms, args.partition_strategy)
    else:
        Tableau.from_paulis(terms.paulis).require_commuting()
        parts = [terms]
    opts = DiagonalizeOptions(strategy=args.strategy, step2=args.step2, oracle_verify=args.oracle,
                              graph=graph)
    jobs = [(p.terms, opts) for p in parts]
    if args.jobs > 1 and len(parts) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_diagonalize_part, jobs))
    else:
        results = [_diagonalize_part(j) for j in jobs]
    metrics = summary_metrics(n, parts, results)
    sets = [_set_doc(k, p, r) for k, (p, r) in enumerate(zip(parts, results))]
    header = {"strategy": str(opts.strategy), "step2": opts.step2,
              "graph": graph.name if graph else "full"}
    if args.format == "json":
        body = json.dumps({**header, "metrics": metrics, "sets": sets}, indent=2) + "\n"
    else:
        body = report_text(metrics, sets, header)
    out = _prepare_out(args)
    _emit(body, out, "report." + ("json" if args.format == "json" else "txt"))
    if out is not None:
        for k, (p, r) in enumerate(zip(parts, results)):
            (out / f"set_{k}.paulis").write_text(p.to_text())
            if args.format == "json":
                (out / f"set_{k}.circuit.json").write_text(r.circuit.to_json())
            else:
                (out / f"set_{k}.circuit").write_text(r.circuit.to_text())
            (out / f"set_{k}.final").write_text("".join(f"{q}\n" for q in r.final.rows()))
        Manifest("diagonalize", _options_of(args), {Path(args.input).name: _digest(text)},
                 wall_time=time.perf_counter() - t0).write(out)
    return EXIT_OK


# partition ----------------------------------------------------------------

def cmd_partition(args) -> int:
    t0 = time.perf_counter()
    text = _read(args.input)
    terms = TermList.parse(text)
    parts = commuting_partition(terms, args.partition_strategy)
    out = _prepare_out(args)
    if args.format == "json":
        doc = {"n": terms.n, "N": len(terms), "kappa": len(parts),
               "parts": [[{"coefficient": c, "pauli": str(p)} for c, p in part] for part in parts]}
        _emit(json.dumps(doc, indent=2) + "\n", out, "partition.json")
    else:
        body = "".join(f"# part {k} ({len(p)} terms)\n{p.to_text()}" for k, p in enumerate(parts))
        _emit(f"# kappa {len(parts)}\n" + body, out, "partition.txt")
    if out is not None:
        for k, p in enumerate(parts):
            (out / f"part_{k}.paulis").write_text(p.to_text())
        Manifest("partition", _options_of(args), {Path(args.input).name: _digest(text)},
                 wall_time=time.perf_counter() - t0).write(out)
    return EXIT_OK


# verify -------------------------------------------------------------------

def cmd_verify(args) -> int:
    ctext = _read(args.circuit)
    circuit = CliffordCircuit.load(ctext)
    terms = read_terms(_read(args.paulis))
    if not terms:
        raise CliError("no operators to verify", EXIT_PRECONDITION)
    paulis = [p for _, p in terms]
    n = paulis[0].n
    if circuit.n != n:
        raise CliError(f"circuit acts on {circuit.n} qubits but operators on {n}", EXIT_PRECONDITION)
    final = conjugate_circuit(Tableau.from_paulis(paulis), circuit)
    bad = first_non_diagonal(final)
    if bad is not None:
        raise CliError(f"FAIL operator {bad} ({paulis[bad]}) maps to {final.row(bad)}", EXIT_VERIFY)
    lines = [f"tableau: {len(paulis)} operators diagonal"]
    if args.oracle:
        if n > DENSE_LIMIT:
            lines.append(f"dense: skipped ({n} qubits exceeds limit {DENSE_LIMIT})")
        else:
            bad = dense_check_diagonal(circuit, paulis)
            if bad is not None:
                raise CliError(f"FAIL dense check on operator {bad} ({paulis[bad]})", EXIT_VERIFY)
            lines.append("dense: pass")
    lines.append("PASS")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


# bench / random-set -------------------------------------------------------

def _resolve_seed(args) -> int:
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
        print(f"seed {args.seed}", file=sys.stderr)
    return args.seed


def cmd_bench(args) -> int:
    t0 = time.perf_counter()
    seed = _resolve_seed(args)
    cfg = BenchConfig(ns=args.n, rs=None if args.square else args.r, samples=args.samples, seed=seed,
                      strategies=args.strategy or [Strategy("noopt")], step2=args.step2,
                      graph=args.graph, n_ops=args.n_ops)
    records = run_benchmark(cfg, workers=args.jobs)
    csv_text = records_to_csv(records)
    out = _prepare_out(args)
    _emit(csv_text, out, "bench.csv")
    if out is not None:
        doc = [{**rec.row(), "cnots": rec.cnots, "depths": rec.depths} for rec in records]
        (out / "bench.json").write_text(json.dumps(doc, indent=2) + "\n")
        timing = {f"{rec.n},{rec.r},{rec.strategy}": {"mean_ms": rec.mean_wall_ms, "sd_ms": rec.sd_wall_ms}
                  for rec in records}
        Manifest("bench", _options_of(args), seed=seed, wall_time=time.perf_counter() - t0,
                 timing=timing).write(out)
    return EXIT_OK


def cmd_random_set(args) -> int:
    t0 = time.perf_counter()
    seed = _resolve_seed(args)
    if not 1 <= args.r <= args.n:
        raise CliError(f"need 1 <= r <= n, got r={args.r}, n={args.n}", EXIT_PRECONDITION)
    paulis = random_commuting_set(args.n, args.r, seed=seed, n_ops=args.n_ops)
    text = write_terms([(1.0, p) for p in paulis])
    out = _prepare_out(args)
    _emit(text, out, "set.paulis")
    if out is not None:
        Manifest("random-set", _options_of(args), seed=seed, wall_time=time.perf_counter() - t0).write(out)
    return EXIT_OK


# argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qwdiag", description="Clifford diagonalization of commuting Pauli sets.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--out", help="write artifacts and manifest.json into this directory")
        p.add_argument("--format", choices=["text", "json"], default="text")
        if seed:
            p.add_argument("--seed", type=int, help="RNG seed (drawn and printed when omitted)")

    p = sub.add_parser("diagonalize", help="diagonalize a commuting set or a partitioned Hamiltonian")
    p.add_argument("input", help="Hamiltonian or Pauli list ('-' for stdin)")
    p.add_argument("--strategy", type=_strategy_arg, default=Strategy("noopt"),
                   help="noopt, bounded:<z> or complete")
    p.add_argument("--step2", choices=["seq", "balanced"], default="seq")
    p.add_argument("--graph", help="coupling graph: edge-list file or line:n, ring:n, grid:RxC, full:n")
    p.add_argument("--oracle", action="store_true", help="cross-check with dense unitaries (n <= 10)")
    p.add_argument("--partition", action="store_true", help="split into commuting sets first")
    p.add_argument("--partition-strategy", choices=STRATEGIES, default=STRATEGIES[0])
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_diagonalize)

    p = sub.add_parser("partition", help="group terms into commuting sets")
    p.add_argument("input")
    p.add_argument("--partition-strategy", choices=STRATEGIES, default=STRATEGIES[0])
    common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="check that a circuit diagonalizes a set of Paulis")
    p.add_argument("circuit")
    p.add_argument("paulis")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="averaged gate counts over random commuting sets")
    p.add_argument("--n", type=_range_arg, required=True, help="qubit counts, e.g. 4..12")
    p.add_argument("--r", type=_range_arg, help="ranks, e.g. 1..15")
    p.add_argument("--square", action="store_true", help="use r = n")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--strategy", type=_strategy_arg, action="append",
                   help="repeat to compare strategies (default noopt)")
    p.add_argument("--step2", choices=["seq", "balanced"], default="seq")
    p.add_argument("--graph", help="preset, or a family name (line, ring, full) sized per n")
    p.add_argument("--n-ops", type=int, help="emit this many products of the generators per set")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("random-set", help="write a random commuting Pauli set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n-ops", type=int)
    common(p)
    p.set_defaults(func=cmd_random_set)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "bench" and not args.square and args.r is None:
        print("qwdiag bench: give --r or --square", file=sys.stderr)
        return EXIT_PRECONDITION
    try:
        return args.func(args)
    except CliError as exc:
        print(f"qwdiag: {exc}", file=sys.stderr)
        return exc.code
    except (PauliParseError, CircuitFormatError) as exc:
        print(f"qwdiag: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NonCommutingError as exc:
        print(f"qwdiag: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"qwdiag: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (GraphError, SizeError, OracleSizeError, ValueError) as exc:
        print(f"qwdiag: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
