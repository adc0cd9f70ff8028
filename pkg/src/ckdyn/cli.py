"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 internal-consistency failure.
The report body on stdout is byte-deterministic; timing goes to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path as FsPath
from typing import Callable, Sequence

from . import __version__, corpus
from .af import bratteli_diagram, f_n_dimensions, ideal_from_hereditary_saturated
from .errors import ConsistencyError, DomainError, InputError
from .graph import (
    DirectedGraph,
    graph_verdicts,
    hereditary_saturated_sets,
    lattice_order,
    simple_loops,
    validate_graph,
)
from .interaction import classify, generated_subalgebra_dims, verify_complete_interaction, verify_interaction_axioms
from .markov import diagonal_conjugacy_check, dichotomy_report, periodic_points
from .psys import (
    PartialSystem,
    analyze_system,
    gauge_ideal_lattice,
    pair_order,
    reversible_extension,
    validate_system,
    y_pairs,
)
from .stochastic import power_partial_isometry_report, quasi_stochastic_matrix

MAX_DEPTH = 6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- input -------------------------------------------------------------------------


def _load(source: str, bundled: dict) -> tuple[dict, str]:
    """Read JSON from a file, or from ``bundled`` as ``corpus:NAME``."""
    if source.startswith("corpus:"):
        name = source.split(":", 1)[1]
        data = bundled.get(name)
        if data is None:
            raise InputError(f"unknown corpus entry '{name}' (see 'corpus list')")
        raw = json.dumps(data, sort_keys=True).encode()
    else:
        path = FsPath(source)
        if not path.is_file():
            raise InputError(f"file not found: {source}")
        raw = path.read_bytes()
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"malformed JSON in {source}: {exc}") from None
    return data, hashlib.sha256(raw).hexdigest()


def _graph(source: str) -> tuple[DirectedGraph, str]:
    data, digest = _load(source, corpus.GRAPHS)
    return validate_graph(data), digest


def _system(source: str) -> tuple[PartialSystem, str]:
    data, digest = _load(source, corpus.SYSTEMS)
    return validate_system(data), digest


def _depth(args) -> int:
    if not 0 <= args.depth <= MAX_DEPTH:
        raise InputError(f"--depth must be between 0 and {MAX_DEPTH}")
    return args.depth


# -- report sections ------------------------------------------------------------------


def graph_analysis(E: DirectedGraph) -> dict:
    v = graph_verdicts(E)
    lattice = hereditary_saturated_sets(E)
    pos = E.vertex_position
    return {
        "verdicts": {"L": v["condition_L"], "K": v["condition_K"], "simple": v["simple"]},
        "details": v,
        "vertices": len(E.vertices),
        "edges": len(E.edges),
        "sinks": sorted(E.sinks, key=pos.get),
        "sources": sorted(E.sources, key=pos.get),
        "simple_loops": [list(mu.edges) for mu in simple_loops(E)],
        "hereditary_saturated_sets": [sorted(s, key=pos.get) for s in lattice],
        "lattice_order": [list(p) for p in lattice_order(lattice)],
    }


def af_analysis(E: DirectedGraph, depth: int) -> dict:
    pos = E.vertex_position
    ideals = {}
    for s in hereditary_saturated_sets(E):
        if s and len(s) < len(E.vertices):
            key = ",".join(sorted(s, key=pos.get))
            ideals[key] = ideal_from_hereditary_saturated(E, s, min(depth, 2)).to_json()
    return {
        "depth": depth,
        "dimensions": [{"level": N, "total": sum(d.values()), "by_vertex": d}
                       for N in range(depth + 1) for d in [f_n_dimensions(E, N)]],
        "bratteli": bratteli_diagram(E, depth).to_json(),
        "ideals": ideals,
    }


def stochastic_analysis(E: DirectedGraph, max_power: int) -> dict:
    return {
        "matrix": quasi_stochastic_matrix(E).to_json(),
        "powers": [power_partial_isometry_report(E, n).to_json() for n in range(1, max_power + 1)],
    }


def markov_analysis(E: DirectedGraph, report: str, depth: int, n: int) -> dict:
    if report == "dichotomy":
        return dichotomy_report(E, depth)
    if report == "periodic":
        return {"n": n, "points": [l.to_json() for l in periodic_points(E, n)]}
    return diagonal_conjugacy_check(E, depth)


def run_graph_entry(E: DirectedGraph, depth: int, max_power: int) -> dict:
    d = min(depth, 3)
    axioms = verify_interaction_axioms(E, d)
    return {
        "analyze": graph_analysis(E),
        "af_dimensions": [sum(f_n_dimensions(E, N).values()) for N in range(d + 1)],
        "interaction_axioms": axioms.passed,
        "complete_interaction": verify_complete_interaction(E, min(d, 2)).passed,
        "classify": {k: v for k, v in classify(E, d).items() if k != "quotient_graph"},
        "generated_dims": {"edge": generated_subalgebra_dims(E, d, "edge"),
                           "vertex": generated_subalgebra_dims(E, d, "vertex")},
        "stochastic": [p["partial_isometry"] for p in stochastic_analysis(E, max_power)["powers"]],
        "dichotomy": dichotomy_report(E, d)["branch"],
        "diagonal_conjugacy": diagonal_conjugacy_check(E, d)["agree"],
    }


# -- commands -------------------------------------------------------------------------


def _envelope(command: str, digest: str | None, result) -> dict:
    out = {"tool": "ckdyn", "version": __version__, "command": command}
    if digest is not None:
        out["input_sha256"] = digest
    out["result"] = result
    return out


def _text(obj, prefix: str = "") -> list[str]:
    """Flatten a report into ``key: value`` lines; short values stay on one line."""
    flat = json.dumps(obj)
    if not isinstance(obj, (dict, list)) or (len(flat) <= 100 and prefix):
        return [f"{prefix}: {flat}"]
    items = obj.items() if isinstance(obj, dict) else enumerate(obj)
    lines = []
    for k, v in items:
        key = (f"{prefix}.{k}" if prefix else str(k)) if isinstance(obj, dict) else f"{prefix}[{k}]"
        lines.extend(_text(v, key))
    return lines or [f"{prefix}: {flat}"]


def _emit(args, command: str, digest: str | None, result, dot: str | None = None) -> str:
    if dot is not None:
        return dot if dot.endswith("\n") else dot + "\n"
    env = _envelope(command, digest, result)
    if args.json:
        return json.dumps(env, indent=2) + "\n"
    header = [f"ckdyn {__version__} {command}"]
    if digest:
        header.append(f"input sha256: {digest}")
    return "\n".join(header + _text(result)) + "\n"


def cmd_graph_analyze(args) -> str:
    E, digest = _graph(args.input)
    return _emit(args, "graph analyze", digest, graph_analysis(E), E.to_dot() if args.dot else None)


def cmd_graph_af(args) -> str:
    E, digest = _graph(args.input)
    depth = _depth(args)
    dot = bratteli_diagram(E, depth).to_dot() if args.dot else None
    return _emit(args, "graph af", digest, af_analysis(E, depth), dot)


def cmd_graph_interaction(args) -> str:
    E, digest = _graph(args.input)
    depth = _depth(args)
    if args.action == "verify":
        result = verify_interaction_axioms(E, depth).to_json()
        if args.complete:
            result["complete"] = verify_complete_interaction(E, min(depth, 2)).to_json()
    else:
        c = classify(E, depth)
        result = {"csystem": c["csystem"], "H_multiplicative": c["H_multiplicative"],
                  "quotient_graph": c["quotient_graph"], "csystem_witness": c["csystem_witness"],
                  "cross_checks": c["cross_checks"]}
    return _emit(args, f"graph interaction {args.action}", digest, result)


def cmd_graph_stochastic(args) -> str:
    E, digest = _graph(args.input)
    if not 1 <= args.max_power <= 64:
        raise InputError("--max-power must be between 1 and 64")
    return _emit(args, "graph stochastic", digest, stochastic_analysis(E, args.max_power))


def cmd_graph_markov(args) -> str:
    E, digest = _graph(args.input)
    if args.n < 1:
        raise InputError("--n must be positive")
    return _emit(args, "graph markov", digest, markov_analysis(E, args.report, _depth(args), args.n))


def cmd_psys_analyze(args) -> str:
    S, digest = _system(args.input)
    return _emit(args, "psys analyze", digest, analyze_system(S, _depth(args)))


def cmd_psys_extension(args) -> str:
    S, digest = _system(args.input)
    ext = reversible_extension(S, _depth(args))
    dot = ext.to_dot() if args.format == "dot" or args.dot else None
    return _emit(args, "psys extension", digest, ext.to_json(), dot)


def cmd_psys_ypairs(args) -> str:
    S, digest = _system(args.input)
    pairs = y_pairs(S)
    result = {"y_pairs": [p.to_json(S) for p in pairs], "order": [list(e) for e in pair_order(pairs)],
              "gauge_ideals": gauge_ideal_lattice(S)["ideal_count"]}
    return _emit(args, "psys ypairs", digest, result)


def cmd_corpus_list(args) -> str:
    result = [{"kind": kind, "name": name} for kind, name in corpus.entries()]
    if args.json:
        return _emit(args, "corpus list", None, result)
    return "".join(f"{kind:6s} {name}\n" for kind, name in corpus.entries())


def cmd_corpus_run(args) -> str:
    # a name shared by a graph and a system runs both
    known = {name for _, name in corpus.entries()}
    unknown = [n for n in args.names if n not in known]
    if unknown:
        raise InputError(f"unknown corpus entry '{unknown[0]}' (see 'corpus list')")
    wanted = set(args.names) or known
    depth = _depth(args)
    result: dict = {"graphs": {}, "systems": {}}
    for kind, name in corpus.entries():
        if name not in wanted:
            continue
        if kind == "graph":
            result["graphs"][name] = run_graph_entry(corpus.graph(name), depth, args.max_power)
        else:
            result["systems"][name] = analyze_system(corpus.system(name), depth)
    return _emit(args, "corpus run", None, result)


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    common.add_argument("--dot", action="store_true", help="Graphviz output where available")
    common.add_argument("--depth", type=int, default=3, help="truncation depth (default 3)")
    common.add_argument("--max-power", type=int, default=8, help="largest power checked (default 8)")

    p = _Parser(prog="ckdyn", description="Graph algebras, interactions and partial dynamical systems.")
    p.add_argument("--version", action="version", version=f"ckdyn {__version__}")
    top = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = top.add_parser("graph", help="analyses of a directed graph").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    sp = g.add_parser("analyze", parents=[common], help="conditions L/K, simplicity, ideal lattice")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_graph_analyze)
    sp = g.add_parser("af", parents=[common], help="AF core dimensions and Bratteli diagram")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_graph_af)
    sp = g.add_parser("interaction", parents=[common], help="the (V, H) interaction")
    sp.add_argument("action", choices=["verify", "classify"])
    sp.add_argument("input")
    sp.add_argument("--complete", action="store_true", help="also check completeness")
    sp.set_defaults(func=cmd_graph_interaction)
    sp = g.add_parser("stochastic", parents=[common], help="powers of the edge-sum partial isometry")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_graph_stochastic)
    sp = g.add_parser("markov", parents=[common], help="Markov shift reports")
    sp.add_argument("input")
    sp.add_argument("--report", choices=["dichotomy", "periodic", "conjugacy"], default="dichotomy")
    sp.add_argument("--n", type=int, default=1, help="period for --report periodic")
    sp.set_defaults(func=cmd_graph_markov)

    s = top.add_parser("psys", help="finite partial dynamical systems").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    sp = s.add_parser("analyze", parents=[common], help="all verdicts for a system")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_psys_analyze)
    sp = s.add_parser("extension", parents=[common], help="enumerate the reversible extension")
    sp.add_argument("input")
    sp.add_argument("--format", choices=["json", "dot"], default="json")
    sp.set_defaults(func=cmd_psys_extension)
    sp = s.add_parser("ypairs", parents=[common], help="the Y-pair lattice")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_psys_ypairs)

    c = top.add_parser("corpus", help="bundled examples").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    sp = c.add_parser("list", parents=[common])
    sp.set_defaults(func=cmd_corpus_list)
    sp = c.add_parser("run", parents=[common], help="run every applicable analysis")
    sp.add_argument("names", nargs="*")
    sp.set_defaults(func=cmd_corpus_run)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        func: Callable = args.func
        out.write(func(args))
    except ConsistencyError as exc:
        err.write(f"error: internal consistency failure: {exc}\n")
        if exc.detail is not None:
            err.write(json.dumps(exc.detail, default=str) + "\n")
        return 2
    except (InputError, DomainError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    err.write(f"elapsed: {time.perf_counter() - start:.3f} s\n")
    return 0


def main() -> None:
    sys.exit(run())
