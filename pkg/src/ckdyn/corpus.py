"""Bundled example graphs and partial systems.

Between them they realize every branch of every verdict the package reports.
"""

from __future__ import annotations

from .graph import DirectedGraph, validate_graph
from .psys import PartialSystem, validate_system


def _g(vertices, edges) -> dict:
    return {"vertices": list(vertices), "edges": [{"id": i, "src": s, "dst": d} for i, s, d in edges]}


def rose(k: int) -> dict:
    """One vertex with ``k`` loops."""
    return _g(["v"], [(f"e{i}", "v", "v") for i in range(1, k + 1)])


def chain(n: int) -> dict:
    vs = [f"v{i}" for i in range(1, n + 1)]
    return _g(vs, [(f"a{i}", vs[i - 1], vs[i]) for i in range(1, n)])


def cycle(n: int) -> dict:
    vs = [f"v{i}" for i in range(1, n + 1)]
    return _g(vs, [(f"c{i}", vs[i - 1], vs[i % n]) for i in range(1, n + 1)])


def fails_at(n: int) -> dict:
    """Two chains into ``v0`` of lengths ``n - 1`` and ``n``.

    The n-th power of the edge sum is the only one that is not a partial
    isometry.
    """
    a = [f"a{i}" for i in range(1, n)]
    b = [f"b{i}" for i in range(1, n + 1)]
    edges = []
    for name, row in (("p", a), ("q", b)):
        prev = "v0"
        for i, v in enumerate(row, 1):
            edges.append((f"{name}{i}", v, prev))
            prev = v
    return _g(["v0", *a, *b], edges)


GRAPHS: dict[str, dict] = {
    "O_1": rose(1),
    "O_2": rose(2),
    "O_3": rose(3),
    "chain": _g(["u", "v"], [("a", "u", "v")]),
    "chain_3": chain(3),
    "cycle_3": cycle(3),
    "loop_with_sink": _g(["v", "w"], [("e", "v", "v"), ("x", "v", "w")]),
    "double_edge": _g(["u", "v"], [("a", "u", "v"), ("b", "u", "v")]),
    "fails_at_2": fails_at(2),
    "fails_at_3": fails_at(3),
    "fails_at_4": fails_at(4),
    "source_into_loop": _g(["u", "v"], [("a", "u", "v"), ("e", "v", "v")]),
    "two_loops": _g(["v", "w"], [("e", "v", "v"), ("f", "w", "w")]),
    "return_paths": _g(["v", "w"], [("a", "v", "w"), ("b", "w", "w"), ("c", "w", "v")]),
    "rose_and_point": _g(["v", "z"], [("e", "v", "v"), ("f", "v", "v")]),
    "loop_feeding_rose": _g(["u", "v"], [("e", "u", "u"), ("a", "u", "v"), ("f", "v", "v"), ("g", "v", "v")]),
}


SYSTEMS: dict[str, dict] = {
    "nbar": {"points": ["0", "inf"], "domain": ["0", "inf"], "map": {"0": "inf", "inf": "inf"}, "Y": ["0"]},
    "chain_2": {"points": ["x1", "x2"], "domain": ["x1"], "map": {"x1": "x2"}, "Y": ["x1"]},
    "chain_3": {"points": ["x1", "x2", "x3"], "domain": ["x1", "x2"], "map": {"x1": "x2", "x2": "x3"}, "Y": ["x1"]},
    "chain_enlarged_Y": {"points": ["x1", "x2"], "domain": ["x1"], "map": {"x1": "x2"}, "Y": ["x1", "x2"]},
    "cycle_2": {"points": ["x1", "x2"], "domain": ["x1", "x2"], "map": {"x1": "x2", "x2": "x1"}, "Y": []},
    "cycle_3": {"points": ["x1", "x2", "x3"], "domain": ["x1", "x2", "x3"],
                "map": {"x1": "x2", "x2": "x3", "x3": "x1"}, "Y": []},
    "cycle_with_tail": {"points": ["z", "x1", "x2"], "domain": ["z", "x1", "x2"],
                        "map": {"z": "x1", "x1": "x2", "x2": "x1"}, "Y": ["z"]},
    "cycle_marked": {"points": ["x1", "x2"], "domain": ["x1", "x2"], "map": {"x1": "x2", "x2": "x1"}, "Y": ["x1"]},
    "two_cycles_one_marked": {"points": ["a", "b", "c", "d"], "domain": ["a", "b", "c", "d"],
                              "map": {"a": "b", "b": "a", "c": "d", "d": "c"}, "Y": ["a"]},
    "two_chains": {"points": ["x1", "x2", "y1", "y2"], "domain": ["x1", "y1"],
                   "map": {"x1": "x2", "y1": "y2"}, "Y": ["x1", "y1"]},
    "identity_3": {"points": ["a", "b", "c"], "domain": ["a", "b", "c"], "map": {"a": "a", "b": "b", "c": "c"}, "Y": []},
}


def graph(name: str) -> DirectedGraph:
    return validate_graph(GRAPHS[name])


def system(name: str) -> PartialSystem:
    return validate_system(SYSTEMS[name])


def graphs() -> dict[str, DirectedGraph]:
    return {k: validate_graph(v) for k, v in GRAPHS.items()}


def systems() -> dict[str, PartialSystem]:
    return {k: validate_system(v) for k, v in SYSTEMS.items()}


def entries() -> list[tuple[str, str]]:
    return [("graph", k) for k in GRAPHS] + [("system", k) for k in SYSTEMS]
