"""Quasi-stochastic matrices and when powers of ``S`` are partial isometries.

``p[v][w] = A(v, w) / n_w`` where ``A(v, w)`` counts edges ``v -> w``. Every
column is either zero (``w`` a source) or sums to one. The power ``S^n`` is a
partial isometry exactly when ``P^n`` keeps that property, and this has two
combinatorial restatements in terms of paths starting at sources.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError
from .graph import DirectedGraph, adjacency_matrix, bounded_source_lengths, cycle_descendants, path_counts


@dataclass(frozen=True)
class RationalMatrix:
    labels: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_lists(cls, labels, rows) -> "RationalMatrix":
        return cls(tuple(labels), tuple(tuple(Fraction(x) for x in r) for r in rows))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        n = len(self.rows)
        cols = list(zip(*other.rows)) if other.rows else []
        return RationalMatrix(self.labels, tuple(
            tuple(sum((self.rows[i][k] * cols[j][k] for k in range(n)), Fraction(0)) for j in range(n))
            for i in range(n)))

    def power(self, n: int) -> "RationalMatrix":
        if n < 0:
            raise ValueError("negative power")
        size = len(self.rows)
        out = RationalMatrix(self.labels, tuple(
            tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)))
        for _ in range(n):
            out = out @ self
        return out

    def column_sums(self) -> list[Fraction]:
        return [sum(col, Fraction(0)) for col in zip(*self.rows)] if self.rows else []

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "rows": [[str(x) for x in r] for r in self.rows]}


def quasi_stochastic_matrix(E: DirectedGraph) -> RationalMatrix:
    A = adjacency_matrix(E)
    n = [E.in_degree[w] for w in E.vertices]
    return RationalMatrix.from_lists(
        E.vertices, [[Fraction(a, n[j]) if n[j] else Fraction(0) for j, a in enumerate(row)] for row in A])


def is_left_quasi_stochastic(P: RationalMatrix) -> bool:
    return all(s in (0, 1) for s in P.column_sums())


def _criterion_lengths(E: DirectedGraph, n: int) -> bool:
    # lengths of maximal backward paths into each vertex: all < n or all >= n.
    # A backward path that never reaches a source (it runs through a cycle)
    # counts as longer than n.
    window = n + len(E.vertices)
    endless = cycle_descendants(E)
    for v in E.vertices:
        ls = bounded_source_lengths(E, v, window)
        if any(k < n for k in ls) and (v in endless or any(k >= n for k in ls)):
            return False
    return True


def _criterion_ranges(E: DirectedGraph, n: int) -> bool:
    # no vertex is the range of a length-n path and of a source path shorter than n
    reach_n = path_counts(E, n)
    for v in E.vertices:
        if reach_n[v] and any(k < n for k in bounded_source_lengths(E, v, n - 1)):
            return False
    return True


def _criterion_operator(E: DirectedGraph, n: int) -> bool:
    # S^n is a partial isometry iff (S^n)* S^n = H^n(1) is a projection
    from .af import AfElement, multiply
    from .interaction import apply_H

    h = AfElement.identity(E)
    for _ in range(n):
        h = apply_H(h)
    return multiply(h, h) == h


@dataclass(frozen=True)
class PowerReport:
    n: int
    partial_isometry: bool
    matrix_criterion: bool
    length_criterion: bool
    range_criterion: bool
    operator_criterion: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "partial_isometry": self.partial_isometry,
            "criteria": {
                "matrix_power_quasi_stochastic": self.matrix_criterion,
                "source_lengths_split": self.length_criterion,
                "no_short_source_path_at_n_range": self.range_criterion,
                "H_power_of_one_is_projection": self.operator_criterion,
            },
        }


def power_partial_isometry_report(E: DirectedGraph, n: int) -> PowerReport:
    """Decide whether ``S^n`` is a partial isometry by four independent routes."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    m = is_left_quasi_stochastic(quasi_stochastic_matrix(E).power(n))
    ln = _criterion_lengths(E, n)
    rg = _criterion_ranges(E, n)
    op = _criterion_operator(E, n)
    if not m == ln == rg == op:
        raise ConsistencyError(
            f"partial-isometry criteria disagree at n={n}",
            {"matrix": m, "lengths": ln, "ranges": rg, "operator": op})
    return PowerReport(n, m, m, ln, rg, op)


def all_powers_partial_isometries(E: DirectedGraph) -> bool:
    """Every power of ``S`` is a partial isometry.

    A failing power, if any, shows up by ``n = |E^0|``: the shortest source
    path into an offending vertex has length below ``|E^0|``, and the power one
    above it fails.
    """
    P = quasi_stochastic_matrix(E)
    Pn = P
    for _ in range(len(E.vertices)):
        if not is_left_quasi_stochastic(Pn):
            return False
        Pn = Pn @ P
    return True


def confirmation_window(E: DirectedGraph) -> int:
    return len(E.vertices) + len(E.edges) + 1
