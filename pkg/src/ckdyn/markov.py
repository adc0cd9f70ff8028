"""The one-sided Markov shift of a graph, with sinks.

Points are finite paths ending at a sink (including a bare sink vertex) and
infinite paths. Only eventually periodic infinite paths are representable,
as lassos of edge ids. Functions are locally constant and given on cylinders
``[mu]``; a cylinder of a path ending at a sink is the single point ``mu``.

Under ``S_mu S_mu* -> indicator of [mu]`` the diagonal of the AF core becomes
this function algebra, ``H`` becomes the averaging transfer operator and
``a -> sum_e S_e a S_e*`` becomes composition with the shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .af import AfElement, edge_conjugation, level_basis
from .errors import ConsistencyError, DomainError, GraphValidationError
from .graph import (
    DirectedGraph,
    Path,
    condition_L,
    loop_has_exit,
    path_counts,
    paths_of_length,
    saturate,
    simple_loops,
)
from .interaction import apply_H
from .lasso import Lasso
from .scalar import ExactScalar


@dataclass(frozen=True, order=True)
class SinkPath:
    """A finite path ending at a sink; length 0 is the bare sink vertex."""

    path: Path
    end: str

    @property
    def length(self) -> int:
        return len(self.path.edges)

    def to_json(self) -> dict:
        return {"sink_path": list(self.path.edges), "start": self.path.base}


OmegaPoint = Union[SinkPath, Lasso]


def sink_path(E: DirectedGraph, edges=(), vertex: str | None = None) -> SinkPath:
    p = E.make_path(edges, vertex)
    if E.path_range(p) not in E.sinks:
        raise GraphValidationError(f"path {p.edges or p.base} does not end at a sink")
    return SinkPath(p, E.path_range(p))


def lasso(E: DirectedGraph, prefix, cycle) -> Lasso:
    prefix, cycle = tuple(prefix), tuple(cycle)
    E.make_path(prefix + cycle)
    c = E.make_path(cycle)
    if E.path_range(c) != c.base:
        raise GraphValidationError(f"cycle {cycle} is not closed")
    return Lasso.make(prefix, cycle)


def shift(E: DirectedGraph, p: OmegaPoint) -> OmegaPoint:
    """Drop the first edge."""
    if isinstance(p, Lasso):
        return p.shift()
    if not p.path.edges:
        raise DomainError("the shift is not defined on a bare sink vertex")
    return SinkPath(Path(E.dst[p.path.edges[0]], p.path.edges[1:]), p.end)


def tail_equivalent(p: OmegaPoint, q: OmegaPoint) -> bool:
    """Same-index eventual agreement.

    Two sink paths qualify iff they have equal length and end at the same
    sink; two lassos iff their symbols agree from some index on.
    """
    if isinstance(p, SinkPath) and isinstance(q, SinkPath):
        return p.length == q.length and p.end == q.end
    if isinstance(p, Lasso) and isinstance(q, Lasso):
        return p.eventually_equal(q)
    return False


# -- cylinder functions --------------------------------------------------------


class CylinderFunction:
    """A locally constant function, stored on the cells of some level.

    The cells of level ``L`` are the paths of length ``L`` together with the
    shorter paths ending at a sink; they partition the path space.
    """

    __slots__ = ("graph", "level", "values")

    def __init__(self, graph: DirectedGraph, values: Mapping[Path, ExactScalar], level: int | None = None):
        self.graph = graph
        top = max((len(p.edges) for p in values), default=0)
        self.level = top if level is None else max(level, top)
        self.values = _refine(graph, values, self.level)

    @classmethod
    def indicator(cls, graph: DirectedGraph, p: Path) -> "CylinderFunction":
        return cls(graph, {p: ExactScalar.of(1)})

    @classmethod
    def constant(cls, graph: DirectedGraph, c=1) -> "CylinderFunction":
        return cls(graph, {Path(v): ExactScalar.of(c) for v in graph.vertices})

    def at_level(self, level: int) -> "CylinderFunction":
        return CylinderFunction(self.graph, self.values, max(level, self.level))

    def __call__(self, point: OmegaPoint) -> ExactScalar:
        E = self.graph
        if isinstance(point, Lasso):
            p = E.make_path(point.head(self.level)) if self.level else Path(E.src[point.symbol_at(0)])
        else:
            edges = point.path.edges[: self.level]
            p = Path(point.path.base, edges)
        return self.values.get(p, ExactScalar())

    def __eq__(self, other):
        if not isinstance(other, CylinderFunction):
            return NotImplemented
        L = max(self.level, other.level)
        return self.at_level(L).values == other.at_level(L).values

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "CylinderFunction") -> "CylinderFunction":
        L = max(self.level, other.level)
        a, b = self.at_level(L).values, other.at_level(L).values
        out = dict(a)
        for p, c in b.items():
            out[p] = out.get(p, ExactScalar()) + c
        return CylinderFunction(self.graph, out, L)

    def __repr__(self):
        inner = ", ".join(f"{p.edges or p.base}: {c!r}" for p, c in sorted(self.values.items()))
        return f"CylinderFunction(L={self.level}: {inner})"


def _refine(E: DirectedGraph, values: Mapping[Path, ExactScalar], level: int) -> dict[Path, ExactScalar]:
    out: dict[Path, ExactScalar] = {}
    stack = [(p, ExactScalar.of(c)) for p, c in values.items()]
    while stack:
        p, c = stack.pop()
        if not c:
            continue
        v = E.path_range(p)
        if len(p.edges) < level and E.out_edges[v]:
            for e in E.out_edges[v]:
                stack.append((Path(p.base if p.edges else E.src[e], p.edges + (e,)), c))
            continue
        s = out.get(p, ExactScalar()) + c
        if s:
            out[p] = s
        else:
            out.pop(p, None)
    return out


def cells(E: DirectedGraph, level: int) -> list[Path]:
    out = []
    for k in range(level + 1):
        for p in paths_of_length(E, k):
            if k == level or E.path_range(p) in E.sinks:
                out.append(p)
    return out


def transfer_apply(f: CylinderFunction) -> CylinderFunction:
    """Average of ``f`` over the shift preimages, zero over sources."""
    E = f.graph
    f = f.at_level(max(f.level, 1))
    out: dict[Path, ExactScalar] = {}
    for c in cells(E, f.level - 1):
        v = c.base
        n = E.in_degree[v]
        if not n:
            continue
        total = ExactScalar()
        for g in E.in_edges[v]:
            total = total + f.values.get(Path(E.src[g], (g,) + c.edges), ExactScalar())
        if total:
            out[c] = total / n
    return CylinderFunction(E, out, f.level - 1)


def dual_endo_apply(f: CylinderFunction) -> CylinderFunction:
    """``f`` composed with the shift; zero on bare sink vertices."""
    E = f.graph
    out: dict[Path, ExactScalar] = {}
    for c in cells(E, f.level + 1):
        if not c.edges:
            continue
        tail = Path(E.dst[c.edges[0]], c.edges[1:])
        val = f.values.get(tail)
        if val:
            out[c] = val
    return CylinderFunction(E, out, f.level + 1)


def diagonal_to_function(a: AfElement) -> CylinderFunction:
    vals = {}
    for (mu, nu), c in a.terms.items():
        if mu != nu:
            raise ValueError("element is not diagonal")
        vals[mu] = c
    return CylinderFunction(a.graph, vals, a.level)


def diagonal_conjugacy_check(E: DirectedGraph, depth: int = 3) -> dict:
    """Compare the shift-side operators with ``H`` and edge conjugation on diagonal units."""
    one = ExactScalar.of(1)
    checked = 0
    mismatches: list[str] = []
    for N in range(depth + 1):
        for (mu, nu) in level_basis(E, N):
            if mu != nu:
                continue
            checked += 1
            a = AfElement(E, {(mu, nu): one}, N)
            f = CylinderFunction.indicator(E, mu).at_level(N)
            if transfer_apply(f) != diagonal_to_function(apply_H(a)):
                mismatches.append(f"transfer at {mu.edges or mu.base}")
            if dual_endo_apply(f) != diagonal_to_function(edge_conjugation(a)):
                mismatches.append(f"dual endomorphism at {mu.edges or mu.base}")
    return {"depth": depth, "diagonal_units_checked": checked, "agree": not mismatches,
            "mismatches": mismatches[:10]}


# -- reports -------------------------------------------------------------------------


def loop_lasso(mu: Path) -> Lasso:
    return Lasso.make((), mu.edges)


def ancestors(E: DirectedGraph, targets) -> frozenset[str]:
    """Vertices with a path (possibly empty) into ``targets``."""
    found = set(targets)
    frontier = list(found)
    while frontier:
        v = frontier.pop()
        for e in E.in_edges[v]:
            w = E.src[e]
            if w not in found:
                found.add(w)
                frontier.append(w)
    return frozenset(found)


def _loop_column(E: DirectedGraph, mu: Path, depth: int) -> list[int]:
    # paths of length N inside the loop's own edges ending where the
    # infinite repetition of the loop sits at time N
    loop_edges = set(mu.edges)
    verts = [E.src[e] for e in mu.edges]
    counts = {v: 1 for v in verts}
    column = [counts[verts[0]]]
    for N in range(1, depth + 1):
        nxt = {v: 0 for v in verts}
        for e in loop_edges:
            nxt[E.dst[e]] += counts[E.src[e]]
        counts = nxt
        column.append(counts[E.dst[mu.edges[(N - 1) % len(mu.edges)]]])
    return column


def dichotomy_report(E: DirectedGraph, depth: int = 3) -> dict:
    L = condition_L(E)
    loops = [mu for mu in simple_loops(E) if not loop_has_exit(E, mu)]
    entries = []
    all_counts = [path_counts(E, N) for N in range(depth + 1)]
    for mu in loops:
        anc = ancestors(E, [E.src[e] for e in mu.edges])
        diagram = [{v: all_counts[N][v] for v in E.vertices if v in anc and all_counts[N][v]}
                   for N in range(depth + 1)]
        column = _loop_column(E, mu, depth)
        entries.append({
            "loop": list(mu.edges),
            "base": mu.base,
            "point": loop_lasso(mu).to_json(),
            "ancestors": sorted(anc, key=E.vertex_position.get),
            "ancestor_diagram": [dict(sorted(d.items(), key=lambda kv: E.vertex_position[kv[0]])) for d in diagram],
            "ancestors_are_everything": anc == frozenset(E.vertices),
            "multiplicity_column": column,
            "compact_ideal_certified": all(c == 1 for c in column),
            "saturation": sorted(saturate(E, [E.src[e] for e in mu.edges]), key=E.vertex_position.get),
        })
    branch = "i" if L else "ii"
    if (branch == "ii") != bool(loops):
        raise ConsistencyError("dichotomy branch disagrees with the loops found without exit")
    return {"branch": branch, "condition_L": L, "loops_without_exit": entries}


def periodic_points(E: DirectedGraph, n: int) -> list[Lasso]:
    """Pure cycles whose period divides ``n``, one lasso per point."""
    if n < 1:
        raise ValueError("n must be positive")
    found = {Lasso.make((), p.edges) for p in paths_of_length(E, n) if E.path_range(p) == p.base}
    return sorted(found, key=lambda l: (l.period, l.cycle))
