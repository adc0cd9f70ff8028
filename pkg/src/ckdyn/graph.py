"""Finite directed graphs: validation, paths, loops, and ideal lattices.

Edges point from ``src`` to ``dst``. With the usual graph-algebra naming,
``s(e) = src`` and ``r(e) = dst``; ``n_v`` is the number of edges ending at
``v``. A sink emits no edges, a source receives none.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import DegenerateGraphError, GraphValidationError


class Edge(NamedTuple):
    id: str
    src: str
    dst: str


class Path(NamedTuple):
    """A path given by its start vertex and edge ids.

    A length-0 path is a bare vertex. For longer paths ``base`` is the
    source of the first edge.
    """

    base: str
    edges: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.vertices, self.edges))

    @cached_property
    def memo(self) -> dict:
        """Per-graph cache for derived algebraic data."""
        return {}

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def src(self) -> dict[str, str]:
        return {e.id: e.src for e in self.edges}

    @cached_property
    def dst(self) -> dict[str, str]:
        return {e.id: e.dst for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e.id)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[str, ...]]:
        inn: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inn[e.dst].append(e.id)
        return {v: tuple(es) for v, es in inn.items()}

    @cached_property
    def in_degree(self) -> dict[str, int]:
        """``n_v``: number of edges with range ``v``."""
        return {v: len(es) for v, es in self.in_edges.items()}

    @cached_property
    def sinks(self) -> frozenset[str]:
        return frozenset(v for v in self.vertices if not self.out_edges[v])

    @cached_property
    def sources(self) -> frozenset[str]:
        return frozenset(v for v in self.vertices if not self.in_edges[v])

    @cached_property
    def vertex_position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def path_range(self, p: Path) -> str:
        return self.dst[p.edges[-1]] if p.edges else p.base

    def path_source(self, p: Path) -> str:
        return p.base

    def is_path(self, p: Path) -> bool:
        if p.base not in self.vertex_position:
            return False
        at = p.base
        for e in p.edges:
            if e not in self.edge or self.src[e] != at:
                return False
            at = self.dst[e]
        return True

    def make_path(self, edges: Iterable[str], base: str | None = None) -> Path:
        edges = tuple(edges)
        if edges:
            p = Path(self.src[edges[0]], edges)
        elif base is None:
            raise GraphValidationError("a length-0 path needs a base vertex")
        else:
            p = Path(base)
        if not self.is_path(p):
            raise GraphValidationError(f"not a path: {edges or base}")
        return p

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in self.edges],
        }

    def to_dot(self, name: str = "E") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for e in self.edges:
            lines.append(f'  "{e.src}" -> "{e.dst}" [label="{e.id}"];')
        lines.append("}")
        return "\n".join(lines)


def validate_graph(raw: Mapping) -> DirectedGraph:
    """Build a graph from its JSON description, sorted into canonical order."""
    if not isinstance(raw, Mapping):
        raise GraphValidationError("graph description must be an object with 'vertices' and 'edges'")
    verts = raw.get("vertices")
    edges = raw.get("edges", [])
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise GraphValidationError("'vertices' and 'edges' must be lists")
    vs = [str(v) for v in verts]
    if len(set(vs)) != len(vs):
        dup = sorted({v for v in vs if vs.count(v) > 1})
        raise GraphValidationError(f"duplicate vertex id {dup[0]}")
    if not vs:
        raise DegenerateGraphError("degenerate: no analyses available")
    vset = set(vs)
    out: list[Edge] = []
    seen: set[str] = set()
    for rec in edges:
        try:
            e = Edge(str(rec["id"]), str(rec["src"]), str(rec["dst"]))
        except (KeyError, TypeError):
            raise GraphValidationError(f"edge record needs id, src, dst: {rec!r}") from None
        if e.id in seen:
            raise GraphValidationError(f"duplicate edge id {e.id}")
        seen.add(e.id)
        for end in (e.src, e.dst):
            if end not in vset:
                raise GraphValidationError(f"dangling endpoint {end}")
        out.append(e)
    return DirectedGraph(tuple(sorted(vs)), tuple(sorted(out)))


def graph_from_edges(vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> DirectedGraph:
    """Shorthand: ``edges`` as ``(id, src, dst)`` triples."""
    return validate_graph(
        {"vertices": list(vertices), "edges": [{"id": i, "src": s, "dst": d} for i, s, d in edges]}
    )


# -- paths -------------------------------------------------------------------


def paths_of_length(E: DirectedGraph, n: int) -> list[Path]:
    """All paths of length ``n`` in canonical order."""
    layer = [Path(v) for v in E.vertices]
    for _ in range(n):
        layer = [Path(p.base if p.edges else E.src[e], p.edges + (e,))
                 for p in layer for e in E.out_edges[E.path_range(p)]]
    return sorted(layer)


def path_counts(E: DirectedGraph, n: int) -> dict[str, int]:
    """Number of length-``n`` paths ending at each vertex."""
    counts = {v: 1 for v in E.vertices}
    for _ in range(n):
        nxt = {v: 0 for v in E.vertices}
        for e in E.edges:
            nxt[e.dst] += counts[e.src]
        counts = nxt
    return counts


# -- loops -------------------------------------------------------------------


def simple_loops(E: DirectedGraph) -> list[Path]:
    """Closed paths with no repeated vertex, one per base point (rotations distinct)."""
    loops: list[Path] = []
    for base in E.vertices:
        stack = [(base, (), frozenset([base]))]
        while stack:
            at, edges, seen = stack.pop()
            for e in E.out_edges[at]:
                nxt = E.dst[e]
                if nxt == base:
                    loops.append(Path(base, edges + (e,)))
                elif nxt not in seen:
                    stack.append((nxt, edges + (e,), seen | {nxt}))
    return sorted(loops, key=lambda p: (p.base, len(p.edges), p.edges))


def _loop_vertices(E: DirectedGraph, mu: Path) -> list[str]:
    return [E.src[e] for e in mu.edges]


def _check_loop(E: DirectedGraph, mu: Path) -> None:
    if not mu.edges or not E.is_path(mu) or E.path_range(mu) != mu.base:
        raise GraphValidationError(f"not a loop: {mu.edges}")
    if mu.base in [E.dst[e] for e in mu.edges[:-1]]:
        raise GraphValidationError(f"not a loop: {mu.edges} revisits its base point")


def loop_has_exit(E: DirectedGraph, mu: Path) -> bool:
    """An exit is an edge leaving a loop vertex that is not itself a loop edge."""
    _check_loop(E, mu)
    used = set(mu.edges)
    return any(e not in used for v in _loop_vertices(E, mu) for e in E.out_edges[v])


def loop_leaves_vertices(E: DirectedGraph, mu: Path) -> bool:
    """Variant exit notion: some edge goes from a loop vertex to a vertex off the loop."""
    _check_loop(E, mu)
    on = set(_loop_vertices(E, mu))
    return any(E.dst[e] not in on for v in on for e in E.out_edges[v])


def condition_L(E: DirectedGraph) -> bool:
    return all(loop_has_exit(E, mu) for mu in simple_loops(E))


def return_path_count(E: DirectedGraph, v: str, cap: int = 2) -> int:
    """Number of paths from ``v`` back to ``v`` not passing ``v`` in between, capped.

    If the count is at least ``cap`` there are ``cap`` such paths of length
    at most ``2|E^0|``, so a capped count over that window is exact.
    """
    horizon = 2 * len(E.vertices)
    layer = {w: 0 for w in E.vertices}
    layer[v] = 1
    total = 0
    for step in range(horizon):
        nxt = {w: 0 for w in E.vertices}
        for e in E.edges:
            if layer[e.src] and (e.src != v or step == 0):
                nxt[e.dst] = min(cap, nxt[e.dst] + layer[e.src])
        total = min(cap, total + nxt[v])
        nxt[v] = 0
        layer = nxt
        if total >= cap:
            break
    return total


def condition_K(E: DirectedGraph) -> bool:
    """Every vertex has no return path or at least two of them."""
    return all(return_path_count(E, v) != 1 for v in E.vertices)


# -- hereditary and saturated sets -------------------------------------------


def is_hereditary(E: DirectedGraph, V: Iterable[str]) -> bool:
    V = set(V)
    return all(e.dst in V for e in E.edges if e.src in V)


def is_saturated(E: DirectedGraph, V: Iterable[str]) -> bool:
    V = set(V)
    for v in E.vertices:
        outs = E.out_edges[v]
        if v not in V and outs and all(E.dst[e] in V for e in outs):
            return False
    return True


def saturate(E: DirectedGraph, V: Iterable[str]) -> frozenset[str]:
    """Least hereditary and saturated set containing ``V``."""
    cur = set(V)
    unknown = cur - set(E.vertices)
    if unknown:
        raise GraphValidationError(f"unknown vertices {sorted(unknown)}")
    while True:
        before = len(cur)
        frontier = list(cur)
        while frontier:
            v = frontier.pop()
            for e in E.out_edges[v]:
                w = E.dst[e]
                if w not in cur:
                    cur.add(w)
                    frontier.append(w)
        for v in E.vertices:
            outs = E.out_edges[v]
            if v not in cur and outs and all(E.dst[e] in cur for e in outs):
                cur.add(v)
        if len(cur) == before:
            return frozenset(cur)


def _sorted_sets(sets: Iterable[frozenset[str]], order: Mapping[str, int]) -> list[frozenset[str]]:
    return sorted(sets, key=lambda s: (len(s), sorted(order[v] for v in s)))


def hereditary_saturated_sets(E: DirectedGraph) -> list[frozenset[str]]:
    """All hereditary and saturated vertex sets, sorted by size then members."""
    idx = E.vertex_position
    n = len(E.vertices)
    succ = [0] * n
    for e in E.edges:
        succ[idx[e.src]] |= 1 << idx[e.dst]
    found = []
    for mask in range(1 << n):
        ok = True
        for i in range(n):
            inside = mask >> i & 1
            if inside and succ[i] & ~mask:
                ok = False  # not hereditary
                break
            if not inside and succ[i] and not succ[i] & ~mask:
                ok = False  # not saturated
                break
        if ok:
            found.append(frozenset(E.vertices[i] for i in range(n) if mask >> i & 1))
    return _sorted_sets(found, idx)


def lattice_order(sets: list[frozenset[str]]) -> list[tuple[int, int]]:
    """Covering relations (i, j) meaning ``sets[i]`` is covered by ``sets[j]``."""
    pairs = []
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if a < b and not any(a < c < b for c in sets):
                pairs.append((i, j))
    return pairs


def meet(E: DirectedGraph, a: frozenset[str], b: frozenset[str]) -> frozenset[str]:
    # intersections of hereditary saturated sets are hereditary saturated
    return a & b


def join(E: DirectedGraph, a: frozenset[str], b: frozenset[str]) -> frozenset[str]:
    return saturate(E, a | b)


def sinkless_part(E: DirectedGraph) -> frozenset[str]:
    return frozenset(E.vertices) - saturate(E, E.sinks)


def induced_subgraph(E: DirectedGraph, V: Iterable[str]) -> DirectedGraph:
    V = set(V)
    return DirectedGraph(
        tuple(v for v in E.vertices if v in V),
        tuple(e for e in E.edges if e.src in V and e.dst in V),
    )


# -- verdicts and matrices ---------------------------------------------------


def graph_verdicts(E: DirectedGraph) -> dict:
    lattice = hereditary_saturated_sets(E)
    L = condition_L(E)
    loops = simple_loops(E)
    disagree = [mu for mu in loops if loop_has_exit(E, mu) != loop_leaves_vertices(E, mu)]
    return {
        "condition_L": L,
        "condition_K": condition_K(E),
        "simple": L and len(lattice) == 2,
        "gauge_ideal_count": len(lattice),
        "all_ideals_gauge_invariant": condition_K(E),
        "exit_definition_disagreements": [list(mu.edges) for mu in disagree],
    }


def adjacency_matrix(E: DirectedGraph) -> list[list[int]]:
    idx = E.vertex_position
    A = [[0] * len(E.vertices) for _ in E.vertices]
    for e in E.edges:
        A[idx[e.src]][idx[e.dst]] += 1
    return A


def edge_matrix(E: DirectedGraph) -> list[list[int]]:
    return [[1 if e.dst == f.src else 0 for f in E.edges] for e in E.edges]


# -- source paths ------------------------------------------------------------


def cycle_vertices(E: DirectedGraph) -> frozenset[str]:
    """Vertices lying on at least one closed path."""
    found = set()
    for v in E.vertices:
        seen: set[str] = set()
        frontier = [E.dst[e] for e in E.out_edges[v]]
        while frontier:
            w = frontier.pop()
            if w == v:
                found.add(v)
                break
            if w in seen:
                continue
            seen.add(w)
            frontier.extend(E.dst[e] for e in E.out_edges[w])
    return frozenset(found)


def source_path_lengths(E: DirectedGraph) -> dict[str, frozenset[int] | None]:
    """Lengths of paths from sources into each vertex.

    ``None`` marks an infinite set, which happens exactly when some path
    from a source into the vertex passes through a cycle.
    """
    fwd = set(E.sources)
    frontier = list(fwd)
    while frontier:
        v = frontier.pop()
        for e in E.out_edges[v]:
            if E.dst[e] not in fwd:
                fwd.add(E.dst[e])
                frontier.append(E.dst[e])
    on_cycle = cycle_vertices(E)
    # vertices downstream of a source-reachable cycle get infinitely many lengths
    infinite = set(on_cycle & fwd)
    frontier = list(infinite)
    while frontier:
        v = frontier.pop()
        for e in E.out_edges[v]:
            if E.dst[e] not in infinite:
                infinite.add(E.dst[e])
                frontier.append(E.dst[e])
    lengths: dict[str, set[int]] = {v: set() for v in E.vertices}
    for s in E.sources:
        lengths[s].add(0)
    # the finite part is acyclic, so relaxing |E^0| times reaches the fixed point
    for _ in range(len(E.vertices)):
        changed = False
        for e in E.edges:
            if e.src in infinite or e.dst in infinite:
                continue
            new = {k + 1 for k in lengths[e.src]} - lengths[e.dst]
            if new:
                lengths[e.dst] |= new
                changed = True
        if not changed:
            break
    return {v: None if v in infinite else frozenset(lengths[v]) for v in E.vertices}


def cycle_descendants(E: DirectedGraph) -> frozenset[str]:
    """Vertices reached by a path from a cycle, i.e. ranges of arbitrarily long paths
    that do not start at a source."""
    found = set(cycle_vertices(E))
    frontier = list(found)
    while frontier:
        v = frontier.pop()
        for e in E.out_edges[v]:
            if E.dst[e] not in found:
                found.add(E.dst[e])
                frontier.append(E.dst[e])
    return frozenset(found)


def source_length_conflict(E: DirectedGraph) -> tuple[str, tuple[int, int | None]] | None:
    """A vertex where a path from a source meets a different-length or endless backward path.

    The witness is ``(v, (k, m))``: a source path of length ``k`` ends at ``v``
    and so does another backward path of length ``m``, with ``m = None`` when
    that path runs back through a cycle (so it has no source at all).
    """
    endless = cycle_descendants(E)
    for v, ls in source_path_lengths(E).items():
        if ls is None:
            # pick two lengths explicitly via bounded enumeration
            found = sorted(bounded_source_lengths(E, v, 2 * len(E.vertices) + 2))
            return v, (found[0], found[1])
        if len(ls) > 1:
            a, b = sorted(ls)[:2]
            return v, (a, b)
        if ls and v in endless:
            return v, (min(ls), None)
    return None


def bounded_source_lengths(E: DirectedGraph, v: str, bound: int) -> set[int]:
    """Lengths ``<= bound`` of paths from sources to ``v``."""
    reach = {w: w in E.sources for w in E.vertices}
    out = {0} if reach[v] else set()
    for k in range(1, bound + 1):
        nxt = {w: False for w in E.vertices}
        for e in E.edges:
            if reach[e.src]:
                nxt[e.dst] = True
        reach = nxt
        if reach[v]:
            out.add(k)
    return out
