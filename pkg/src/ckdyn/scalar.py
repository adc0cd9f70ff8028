"""Exact arithmetic in the ring of rational combinations of square roots.

An element is stored as ``{d: q}`` meaning ``sum(q * sqrt(d))`` where every
``d`` is a squarefree positive integer and every ``q`` a nonzero rational
(``gmpy2.mpq`` internally, ``Fraction`` at the API surface).
Square roots of distinct squarefree integers are linearly independent over
the rationals, so this canonical form makes equality structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from gmpy2 import mpq

Number = Union[int, Fraction, "ExactScalar"]


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n == k*k*d`` and ``d`` squarefree."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    k, d, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            d *= p
        p += 1
    return k, d * n


@lru_cache(maxsize=4096)
def _root_product(d1: int, d2: int) -> tuple[int, int]:
    # sqrt(d1)*sqrt(d2) = g*sqrt(d1*d2/g^2)
    if d1 == 1:
        return 1, d2
    if d2 == 1:
        return 1, d1
    g = math.gcd(d1, d2)
    return g, (d1 // g) * (d2 // g)


class ExactScalar:
    """Element of Q[sqrt 2, sqrt 3, sqrt 5, ...] in canonical form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        clean: dict[int, mpq] = {}
        if terms:
            for d, q in terms.items():
                q = mpq(q)
                if q == 0:
                    continue
                k, sf = squarefree_split(int(d))
                clean[sf] = clean.get(sf, mpq(0)) + q * k
            clean = {d: q for d, q in clean.items() if q != 0}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "ExactScalar":
        # terms already canonical; skips validation on hot paths
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def of(cls, x: Number) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        q = mpq(x)
        return cls._raw({1: q} if q else {})

    @classmethod
    def sqrt(cls, x: int | Fraction) -> "ExactScalar":
        """Exact square root of a nonnegative rational."""
        x = Fraction(x)
        if x < 0:
            raise ValueError("square root of a negative number")
        if x == 0:
            return cls._raw({})
        # sqrt(p/q) = sqrt(p*q)/q
        k, d = squarefree_split(x.numerator * x.denominator)
        return cls._raw({d: mpq(k, x.denominator)})

    @property
    def terms(self) -> dict[int, Fraction]:
        return {d: Fraction(int(q.numerator), int(q.denominator)) for d, q in sorted(self._terms.items())}

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(d == 1 for d in self._terms)

    def rational_part(self) -> Fraction:
        q = self._terms.get(1, mpq(0))
        return Fraction(int(q.numerator), int(q.denominator))

    def __bool__(self):
        return bool(self._terms)

    def __float__(self):
        return float(sum(float(q) * math.sqrt(d) for d, q in self._terms.items()))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.of(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return ExactScalar._raw({d: -q for d, q in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        if other.__class__ is not ExactScalar:
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = ExactScalar.of(other)
        a, b = self._terms, other._terms
        if len(a) == 1 and len(b) == 1 and a.keys() == b.keys():
            ((d, q1),) = a.items()
            s = q1 + b[d]
            return ExactScalar._raw({d: s} if s else {})
        out = dict(a)
        for d, q in other._terms.items():
            s = out.get(d, 0) + q
            if s:
                out[d] = s
            else:
                out.pop(d, None)
        return ExactScalar._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.of(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ExactScalar.of(other) - self

    def __mul__(self, other):
        if other.__class__ is not ExactScalar:
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            if other == 0:
                return ExactScalar._raw({})
            other = mpq(other)
            return ExactScalar._raw({d: q * other for d, q in self._terms.items()})
        a, b = self._terms, other._terms
        if len(a) == 1 and len(b) == 1:
            ((d1, q1),) = a.items()
            ((d2, q2),) = b.items()
            if d1 == 1:
                return ExactScalar._raw({d2: q1 * q2})
            if d2 == 1:
                return ExactScalar._raw({d1: q1 * q2})
            g, d = _root_product(d1, d2)
            return ExactScalar._raw({d: q1 * q2 * g})
        out: dict[int, mpq] = {}
        for d1, q1 in self._terms.items():
            for d2, q2 in other._terms.items():
                g, d = _root_product(d1, d2)
                s = out.get(d, 0) + q1 * q2 * g
                if s:
                    out[d] = s
                else:
                    out.pop(d, None)
        return ExactScalar._raw(out)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        """Inverse of a nonzero monomial ``q*sqrt(d)``.

        General sums of radicals are never divided by in this package.
        """
        if len(self._terms) != 1:
            raise ZeroDivisionError("only nonzero monomials q*sqrt(d) are invertible here")
        ((d, q),) = self._terms.items()
        return ExactScalar._raw({d: 1 / (q * d)})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.of(other) * self.inverse()

    def to_json(self) -> dict[str, str]:
        return {str(d): str(q) for d, q in sorted(self._terms.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "ExactScalar":
        return cls({int(d): Fraction(q) for d, q in data.items()})

    def __repr__(self):
        if not self._terms:
            return "ExactScalar(0)"
        parts = []
        for d, q in sorted(self._terms.items()):
            parts.append(str(q) if d == 1 else f"{q}*sqrt({d})")
        return "ExactScalar(" + " + ".join(parts) + ")"


ZERO = ExactScalar()
ONE = ExactScalar.of(1)


def inv_sqrt(n: int) -> ExactScalar:
    """``1/sqrt(n)`` for a positive integer ``n``."""
    return ExactScalar.sqrt(Fraction(1, n))
