"""Exact linear spans of AF elements.

Coefficients live in a ring of square-root combinations, which is a
rational vector space with the square roots of distinct squarefree integers
as a basis. An element therefore flattens to a sparse rational vector keyed
by ``(unit, d)``, and spans reduce to rational row echelon forms.

Every coefficient produced for a graph lies in the field K generated by the
square roots of the primes dividing its in-degrees. A span is kept closed
under multiplication by K (each generator enters with all its ``sqrt(d)``
multiples), so it is a K-span; its dimension over K, which equals the
complex dimension, is the rational rank divided by ``[K:Q]``.
"""

from __future__ import annotations

from functools import reduce as _fold
from itertools import combinations
from operator import mul
from typing import Iterable

from gmpy2 import mpq

from .af import AfElement
from .graph import DirectedGraph
from .scalar import ExactScalar

Vector = dict


def _prime_factors(n: int) -> set[int]:
    out, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


def root_basis(E: DirectedGraph) -> tuple[int, ...]:
    """Squarefree ``d`` whose square roots form a rational basis of K."""
    memo = E.memo
    if "root_basis" not in memo:
        primes = sorted(set().union(*(_prime_factors(n) for n in E.in_degree.values() if n > 1)))
        ds = {_fold(mul, c, 1) for r in range(len(primes) + 1) for c in combinations(primes, r)}
        memo["root_basis"] = tuple(sorted(ds))
    return memo["root_basis"]


def field_multiples(a: AfElement) -> list[AfElement]:
    """``sqrt(d) * a`` for each basis root of the coefficient field."""
    return [a if d == 1 else a * ExactScalar.sqrt(d) for d in root_basis(a.graph)]


def flatten(a: AfElement) -> Vector:
    return {(u, d): q for u, c in a.terms.items() for d, q in c._terms.items()}


class Echelon:
    """Row echelon form keyed by leading coordinate."""

    def __init__(self):
        self.rows: dict = {}

    def reduce(self, vec: Vector) -> Vector:
        row = dict(vec)
        while row:
            k = min(row)
            piv = self.rows.get(k)
            if piv is None:
                break
            f = row[k]
            for key, val in piv.items():
                s = row.get(key, 0) - f * val
                if s:
                    row[key] = s
                else:
                    row.pop(key, None)
        return row

    def add(self, vec: Vector) -> bool:
        row = self.reduce(vec)
        if not row:
            return False
        k = min(row)
        lead = row[k]
        self.rows[k] = {key: mpq(val) / lead for key, val in row.items()}
        return True

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    def __len__(self):
        return len(self.rows)


class Span:
    """Linear span of AF elements, compared at a common level."""

    def __init__(self, level: int = 0):
        self.level = level
        self.generators: list[AfElement] = []
        self._ech = Echelon()
        self._degree = 1

    @classmethod
    def of(cls, elements: Iterable[AfElement], level: int | None = None) -> "Span":
        elements = list(elements)
        if level is None:
            level = max((a.level for a in elements), default=0)
        sp = cls(level)
        for a in elements:
            sp.add(a)
        return sp

    def _vec(self, a: AfElement) -> Vector:
        if a.level > self.level:
            self._raise_level(a.level)
        return flatten(a.embed(self.level))

    def _raise_level(self, level: int) -> None:
        gens = self.generators
        self.level = level
        self.generators = []
        self._ech = Echelon()
        for g in gens:
            self.add(g)

    def add(self, a: AfElement) -> bool:
        """Insert ``a``; returns True when it enlarged the span."""
        multiples = field_multiples(a)
        self._degree = len(multiples)
        grew = False
        for m in multiples:
            grew = self._ech.add(self._vec(m)) or grew
        if grew:
            self.generators.append(a)
        return grew

    def contains(self, a: AfElement) -> bool:
        return self._ech.contains(self._vec(a))

    @property
    def dim(self) -> int:
        """Dimension over the coefficient field."""
        q, r = divmod(len(self._ech), self._degree)
        if r:
            raise ArithmeticError("span is not closed under the coefficient field")
        return q

    def __len__(self):
        return self.dim

    def issubset(self, other: "Span") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, Span):
            return NotImplemented
        return self.dim == other.dim and self.issubset(other)

    __hash__ = None  # type: ignore[assignment]


def intersection_dim(a: Span, b: Span) -> int:
    """dim(A ∩ B) = dim A + dim B - dim(A + B)."""
    total = Span.of(a.generators + b.generators, max(a.level, b.level))
    return a.dim + b.dim - total.dim
