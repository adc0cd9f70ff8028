"""Symbolic calculus for the AF core of a graph algebra.

Elements are finite combinations of matrix units ``S_mu S_nu*`` where
``mu`` and ``nu`` are paths of equal length with a common range. Every
element carries a level ``L`` and is kept in canonical form: a unit shorter
than ``L`` whose range is not a sink is expanded with the relation
``P_v = sum_{s(e)=v} S_e S_e*`` until it reaches length ``L``. Units ending
at a sink keep their native length. At a common canonical level two units
multiply to something nonzero only when the inner paths coincide, which
makes the product a dictionary join.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import GraphValidationError
from .graph import DirectedGraph, Path, is_hereditary, is_saturated, path_counts, paths_of_length
from .scalar import ExactScalar

Unit = tuple[Path, Path]


def _extend(E: DirectedGraph, p: Path, e: str) -> Path:
    return Path(p.base if p.edges else E.src[e], p.edges + (e,))


def _prepend(E: DirectedGraph, e: str, p: Path) -> Path:
    return Path(E.src[e], (e,) + p.edges)


def _tail(E: DirectedGraph, p: Path) -> Path:
    """Drop the first edge; a length-1 path becomes its range vertex."""
    return Path(E.dst[p.edges[0]], p.edges[1:])


def unit_length(u: Unit) -> int:
    return len(u[0].edges)


class AfElement:
    """A canonical linear combination of matrix units over one graph."""

    __slots__ = ("graph", "level", "terms", "_by_left", "_by_left_rat", "_rat")

    def __init__(self, graph: DirectedGraph, terms: Mapping[Unit, ExactScalar] | None = None,
                 level: int | None = None, *, _canonical: bool = False):
        self.graph = graph
        self._by_left = self._by_left_rat = self._rat = None
        terms = terms or {}
        if _canonical and level is not None:
            # trusted internal path: units already canonical at ``level``
            self.level = level
            self.terms = terms
            return
        top = max((unit_length(u) for u in terms), default=0)
        self.level = top if level is None else max(level, top)
        if _canonical:
            self.terms = {u: c for u, c in terms.items() if c}
        else:
            self.terms = _canonicalize(graph, terms, self.level)

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, graph: DirectedGraph, level: int = 0) -> "AfElement":
        return cls(graph, {}, level, _canonical=True)

    @classmethod
    def identity(cls, graph: DirectedGraph, level: int = 0) -> "AfElement":
        one = ExactScalar.of(1)
        return cls(graph, {(Path(v), Path(v)): one for v in graph.vertices}, 0).embed(level)

    @classmethod
    def projection(cls, graph: DirectedGraph, v: str) -> "AfElement":
        if v not in graph.vertex_position:
            raise GraphValidationError(f"unknown vertex {v}")
        return cls(graph, {(Path(v), Path(v)): ExactScalar.of(1)})

    @classmethod
    def unit(cls, graph: DirectedGraph, mu: Iterable[str], nu: Iterable[str],
             coeff=1, vertex: str | None = None) -> "AfElement":
        """The element ``coeff * S_mu S_nu*``; pass ``vertex`` for length 0."""
        mu, nu = tuple(mu), tuple(nu)
        if len(mu) != len(nu):
            raise GraphValidationError("matrix units need paths of equal length")
        if not mu:
            return cls.projection(graph, vertex) * coeff
        p, q = graph.make_path(mu), graph.make_path(nu)
        if graph.path_range(p) != graph.path_range(q):
            raise GraphValidationError("matrix units need paths with a common range")
        return cls(graph, {(p, q): ExactScalar.of(coeff)})

    # basic algebra -------------------------------------------------------
    def embed(self, level: int) -> "AfElement":
        if level < self.level:
            raise ValueError(f"cannot embed level {self.level} element into level {level}")
        if level == self.level:
            return self
        return AfElement(self.graph, self.terms, level)

    def _aligned(self, other: "AfElement") -> tuple["AfElement", "AfElement"]:
        if other.graph is not self.graph and other.graph != self.graph:
            raise GraphValidationError("elements live over different graphs")
        L = max(self.level, other.level)
        return self.embed(L), other.embed(L)

    def __add__(self, other):
        if not isinstance(other, AfElement):
            return NotImplemented
        a, b = self._aligned(other)
        out = dict(a.terms)
        for u, c in b.terms.items():
            s = out.get(u)
            s = c if s is None else s + c
            if s:
                out[u] = s
            else:
                out.pop(u, None)
        return AfElement(self.graph, out, a.level, _canonical=True)

    def __neg__(self):
        return AfElement(self.graph, {u: -c for u, c in self.terms.items()}, self.level, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AfElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction, ExactScalar)):
            c = ExactScalar.of(other)
            return AfElement(self.graph, {u: v * c for u, v in self.terms.items()}, self.level)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ExactScalar)):
            return self * other
        return NotImplemented

    def adjoint(self) -> "AfElement":
        return adjoint(self)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, AfElement):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        raise TypeError("AfElement is not hashable; use key() for a canonical key")

    def key(self, level: int | None = None) -> tuple:
        """Hashable canonical key at the given (or own) level."""
        a = self if level is None else self.embed(level)
        return (a.level, tuple(sorted(a.terms.items())))

    def to_json(self) -> list[dict]:
        out = []
        for (mu, nu), c in sorted(self.terms.items()):
            rec = {"unit": [list(mu.edges), list(nu.edges)], "coeff": c.to_json()}
            if not mu.edges:
                rec["vertex"] = mu.base
            out.append(rec)
        return out

    @classmethod
    def from_json(cls, graph: DirectedGraph, data: list[dict]) -> "AfElement":
        acc = cls.zero(graph)
        for rec in data:
            mu, nu = rec["unit"]
            acc = acc + cls.unit(graph, mu, nu, ExactScalar.from_json(rec["coeff"]), rec.get("vertex"))
        return acc

    def __repr__(self):
        parts = []
        for (mu, nu), c in sorted(self.terms.items()):
            name = f"P_{mu.base}" if not mu.edges else f"S_{''.join(mu.edges)}S*_{''.join(nu.edges)}"
            parts.append(f"{c!r}*{name}")
        return f"AfElement(L={self.level}: " + (" + ".join(parts) or "0") + ")"


def _canonicalize(E: DirectedGraph, terms: Mapping[Unit, ExactScalar], level: int) -> dict[Unit, ExactScalar]:
    out: dict[Unit, ExactScalar] = {}
    stack = [(u, ExactScalar.of(c)) for u, c in terms.items()]
    while stack:
        (mu, nu), c = stack.pop()
        if not c:
            continue
        v = E.path_range(mu)
        if len(mu.edges) < level and E.out_edges[v]:
            for e in E.out_edges[v]:
                stack.append(((_extend(E, mu, e), _extend(E, nu, e)), c))
            continue
        key = (mu, nu)
        s = out.get(key)
        s = c if s is None else s + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def _rational_view(a: AfElement):
    """``{unit: mpq}`` when every coefficient is rational, else ``False``."""
    rat = a._rat
    if rat is None:
        rat = {}
        for u, c in a.terms.items():
            t = c._terms
            if len(t) != 1 or 1 not in t:
                rat = False
                break
            rat[u] = t[1]
        a._rat = rat
    return rat


def _left_index(b: AfElement, coeffs) -> dict:
    idx: dict[Path, list] = {}
    for (eta, zeta), d in coeffs.items():
        idx.setdefault(eta, []).append((zeta, d))
    return idx


def multiply(a: AfElement, b: AfElement) -> AfElement:
    """Product via a join on inner paths at a common canonical level."""
    a, b = a._aligned(b)
    ra, rb = _rational_view(a), _rational_view(b)
    if ra is not False and rb is not False:
        # all-rational fast path: plain mpq arithmetic, wrapped once at the end
        by_left = b._by_left_rat
        if by_left is None:
            by_left = b._by_left_rat = _left_index(b, rb)
        acc: dict = {}
        for (mu, nu), c in ra.items():
            for zeta, d in by_left.get(nu, ()):
                key = (mu, zeta)
                acc[key] = acc.get(key, 0) + c * d
        raw = ExactScalar._raw
        out = {u: raw({1: q}) for u, q in acc.items() if q}
        return AfElement(a.graph, out, a.level, _canonical=True)
    by_left = b._by_left
    if by_left is None:
        by_left = b._by_left = _left_index(b, b.terms)
    out: dict[Unit, ExactScalar] = {}
    for (mu, nu), c in a.terms.items():
        for zeta, d in by_left.get(nu, ()):
            key = (mu, zeta)
            s = out.get(key)
            s = c * d if s is None else s + c * d
            if s:
                out[key] = s
            else:
                del out[key]
    return AfElement(a.graph, out, a.level, _canonical=True)


def _unit_product(E: DirectedGraph, x: Unit, y: Unit) -> Unit | None:
    """``(S_mu S_nu*)(S_eta S_zeta*)`` for raw units via the four-case relation."""
    (mu, nu), (eta, zeta) = x, y
    if nu == eta:
        return mu, zeta
    ln, le = len(nu.edges), len(eta.edges)
    if le > ln and eta.base == nu.base and eta.edges[:ln] == nu.edges:
        # eta = nu eta'
        rest = eta.edges[ln:]
        return Path(mu.base if mu.edges else E.src[rest[0]], mu.edges + rest), zeta
    if ln > le and nu.base == eta.base and nu.edges[:le] == eta.edges:
        # nu = eta nu'
        rest = nu.edges[le:]
        return mu, Path(zeta.base if zeta.edges else E.src[rest[0]], zeta.edges + rest)
    return None


def reference_multiply(a: AfElement, b: AfElement) -> AfElement:
    """Product computed term by term from the general path relations.

    Independent of the canonical-level join in :func:`multiply`; used as a
    test oracle. Works on the stored units without aligning levels first.
    """
    out: dict[Unit, ExactScalar] = {}
    for x, c in a.terms.items():
        for y, d in b.terms.items():
            u = _unit_product(a.graph, x, y)
            if u is not None:
                out[u] = out.get(u, ExactScalar()) + c * d
    return AfElement(a.graph, out, max(a.level, b.level))


def adjoint(a: AfElement) -> AfElement:
    # coefficients are real, so conjugation is the identity on scalars
    return AfElement(a.graph, {(nu, mu): c for (mu, nu), c in a.terms.items()}, a.level, _canonical=True)


def embed_to_level(a: AfElement, level: int) -> AfElement:
    return a.embed(level)


def edge_conjugation(a: AfElement) -> AfElement:
    """``sum_e S_e a S_e*``."""
    E = a.graph
    out: dict[Unit, ExactScalar] = {}
    for (mu, nu), c in a.terms.items():
        if mu.base != nu.base:
            continue
        for e in E.in_edges[mu.base]:
            out[(_prepend(E, e, mu), _prepend(E, e, nu))] = c
    return AfElement(E, out, a.level + 1, _canonical=True)


# -- bases and dimensions ----------------------------------------------------


@lru_cache(maxsize=256)
def level_basis(E: DirectedGraph, N: int) -> tuple[Unit, ...]:
    """Canonical matrix units spanning the level-``N`` algebra."""
    units: list[Unit] = []
    for k in range(N + 1):
        by_range: dict[str, list[Path]] = {}
        for p in paths_of_length(E, k):
            v = E.path_range(p)
            if k == N or v in E.sinks:
                by_range.setdefault(v, []).append(p)
        for ps in by_range.values():
            units.extend((p, q) for p in ps for q in ps)
    return tuple(sorted(units))


def basis_elements(E: DirectedGraph, N: int) -> list[AfElement]:
    one = ExactScalar.of(1)
    return [AfElement(E, {u: one}, N, _canonical=True) for u in level_basis(E, N)]


def f_n_dimensions(E: DirectedGraph, N: int) -> dict[str, int]:
    """Matrix size of each summand at level ``N``: paths of length ``N`` into each vertex."""
    return path_counts(E, N)


def f_n_dimension(E: DirectedGraph, N: int) -> int:
    """dim of the level-``N`` algebra from path counts, sink tails included."""
    total = sum(c * c for v, c in path_counts(E, N).items() if v not in E.sinks)
    for i in range(N + 1):
        total += sum(c * c for v, c in path_counts(E, i).items() if v in E.sinks)
    return total


# -- norms ---------------------------------------------------------------------


def _blocks(a: AfElement) -> dict[tuple[int, str], np.ndarray]:
    E = a.graph
    rows: dict[tuple[int, str], dict[Path, int]] = {}
    entries: dict[tuple[int, str], list] = {}
    for (mu, nu), c in a.terms.items():
        key = (len(mu.edges), E.path_range(mu))
        idx = rows.setdefault(key, {})
        for p in (mu, nu):
            if p not in idx:
                idx[p] = len(idx)
        entries.setdefault(key, []).append((idx[mu], idx[nu], float(c)))
    out = {}
    for key, ents in entries.items():
        n = len(rows[key])
        m = np.zeros((n, n))
        for i, j, x in ents:
            m[i, j] += x
        out[key] = m
    return out


def operator_norm(a: AfElement) -> float:
    """C*-norm: largest spectral norm over the simple summands."""
    return max((float(np.linalg.norm(m, 2)) for m in _blocks(a).values()), default=0.0)


def spectrum(a: AfElement) -> list[float]:
    """Eigenvalues of a self-adjoint element, block by block."""
    vals: list[float] = []
    for m in _blocks(a).values():
        vals.extend(np.linalg.eigvalsh((m + m.T) / 2).tolist())
    return sorted(vals)


# -- Bratteli diagram ------------------------------------------------------------


@dataclass(frozen=True)
class BratteliDiagram:
    """Levels of summands with multiplicities and the inclusion edges.

    Nodes are ``("v", vertex)`` for the level-``N`` summand of a vertex and
    ``("tail", sink, i)`` for the summand of length-``i`` paths into a sink
    carried along at later levels.
    """

    levels: list[dict[tuple, int]]
    edges: list[tuple[int, tuple, tuple, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "levels": [[{"node": list(n), "multiplicity": m} for n, m in lvl.items()] for lvl in self.levels],
            "edges": [{"level": N, "from": list(a), "to": list(b), "multiplicity": m} for N, a, b, m in self.edges],
        }

    def to_dot(self) -> str:
        def name(N, node):
            return f"{node[1]}@{N}" if node[0] == "v" else f"{node[1]}~{node[2]}@{N}"

        lines = ["digraph Bratteli {", "  rankdir=TB;"]
        for N, lvl in enumerate(self.levels):
            shown = [n for n, m in lvl.items() if m]
            lines.append("  { rank=same; " + " ".join(f'"{name(N, n)}"' for n in shown) + " }")
            for n in shown:
                lines.append(f'  "{name(N, n)}" [label="{lvl[n]}"];')
        for N, a, b, m in self.edges:
            if self.levels[N][a] and self.levels[N + 1][b]:
                attr = f' [label="{m}"]' if m > 1 else ""
                lines.append(f'  "{name(N, a)}" -> "{name(N + 1, b)}"{attr};')
        lines.append("}")
        return "\n".join(lines)


def bratteli_diagram(E: DirectedGraph, depth: int) -> BratteliDiagram:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    counts = [path_counts(E, N) for N in range(depth + 1)]
    sinks = sorted(E.sinks)
    levels = []
    for N in range(depth + 1):
        lvl = {("v", v): counts[N][v] for v in E.vertices}
        for w in sinks:
            for i in range(N):
                lvl[("tail", w, i)] = counts[i][w]
        levels.append(lvl)
    edges = []
    for N in range(depth):
        for e_src in E.vertices:
            if e_src in E.sinks:
                edges.append((N, ("v", e_src), ("tail", e_src, N), 1))
                continue
            mult: dict[str, int] = {}
            for e in E.out_edges[e_src]:
                mult[E.dst[e]] = mult.get(E.dst[e], 0) + 1
            for v in sorted(mult):
                edges.append((N, ("v", e_src), ("v", v), mult[v]))
        for w in sinks:
            for i in range(N):
                edges.append((N, ("tail", w, i), ("tail", w, i), 1))
    return BratteliDiagram(levels, edges)


# -- ideals from hereditary saturated sets ---------------------------------------


@dataclass
class IdealReport:
    vertex_set: list[str]
    level: int
    basis_size: int
    closed_under_products: bool
    embedding_preserves_ideal: bool
    embedding_reflects_ideal: bool
    invariance_V: bool
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return (self.closed_under_products and self.embedding_preserves_ideal
                and self.embedding_reflects_ideal and self.invariance_V)

    def to_json(self) -> dict:
        return {
            "vertex_set": self.vertex_set,
            "level": self.level,
            "basis_size": self.basis_size,
            "closed_under_products": self.closed_under_products,
            "embedding_preserves_ideal": self.embedding_preserves_ideal,
            "embedding_reflects_ideal": self.embedding_reflects_ideal,
            "invariance_V": self.invariance_V,
            "witness": self.witness,
        }


def ideal_basis(E: DirectedGraph, V: Iterable[str], N: int) -> list[Unit]:
    V = set(V)
    return [u for u in level_basis(E, N) if E.path_range(u[0]) in V]


def ideal_from_hereditary_saturated(E: DirectedGraph, V: Iterable[str], level: int = 2) -> IdealReport:
    """The ideal spanned by units ending in ``V``, with closure checks at ``level``.

    Raises ``GraphValidationError`` unless ``V`` is hereditary and saturated.
    """
    from .interaction import apply_V  # local import: interaction builds on this module
    from .linalg import Span

    V = frozenset(V)
    if not V <= set(E.vertices):
        raise GraphValidationError(f"unknown vertices {sorted(V - set(E.vertices))}")
    if not (is_hereditary(E, V) and is_saturated(E, V)):
        raise GraphValidationError(f"{sorted(V)} is not hereditary and saturated")
    N = level
    inside = set(ideal_basis(E, V, N))
    basis = level_basis(E, N)
    one = ExactScalar.of(1)
    witness = None

    closed = True
    for x in inside:
        for y in basis:
            for prod in (multiply(AfElement(E, {x: one}, N, _canonical=True), AfElement(E, {y: one}, N, _canonical=True)),
                         multiply(AfElement(E, {y: one}, N, _canonical=True), AfElement(E, {x: one}, N, _canonical=True))):
                if any(u not in inside for u in prod.terms):
                    closed = False
                    witness = witness or f"product of {x} and {y} leaves the ideal"
    inside_next = set(ideal_basis(E, V, N + 1))
    preserves = reflects = True
    for x in basis:
        emb = AfElement(E, {x: one}, N, _canonical=True).embed(N + 1)
        landed = all(u in inside_next for u in emb.terms)
        if x in inside and not landed:
            preserves = False
            witness = witness or f"embedding of {x} leaves the ideal"
        if x not in inside and emb.terms and landed:
            reflects = False
            witness = witness or f"embedding of {x} falls into the ideal"
    # V(I_N) against V(1) I_{N+1} V(1), as spans
    v1 = apply_V(AfElement.identity(E))
    left = Span.of(apply_V(AfElement(E, {x: one}, N, _canonical=True)) for x in inside)
    right = Span.of(multiply(multiply(v1, AfElement(E, {y: one}, N + 1, _canonical=True)), v1)
                    for y in inside_next)
    invariance = left == right
    if not invariance:
        witness = witness or "V(I) differs from V(1) I V(1)"
    return IdealReport(sorted(V, key=E.vertex_position.get), N, len(inside), closed, preserves, reflects,
                       invariance, witness)
