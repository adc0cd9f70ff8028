"""Eventually periodic sequences: a finite prefix followed by a repeating cycle."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Hashable, Sequence


def _minimal_period(cycle: tuple) -> tuple:
    n = len(cycle)
    for p in range(1, n + 1):
        if n % p == 0 and cycle == cycle[:p] * (n // p):
            return cycle[:p]
    return cycle


@dataclass(frozen=True, order=True)
class Lasso:
    """The sequence ``prefix + cycle + cycle + ...`` in canonical form.

    Canonical means the cycle has minimal period and the prefix does not end
    with the symbol that closes the cycle (otherwise it is absorbed by
    rotating the cycle).
    """

    prefix: tuple
    cycle: tuple

    @classmethod
    def make(cls, prefix: Sequence[Hashable], cycle: Sequence[Hashable]) -> "Lasso":
        prefix, cycle = tuple(prefix), tuple(cycle)
        if not cycle:
            raise ValueError("a lasso needs a nonempty cycle")
        cycle = _minimal_period(cycle)
        while prefix and prefix[-1] == cycle[-1]:
            cycle = cycle[-1:] + cycle[:-1]
            prefix = prefix[:-1]
        return cls(prefix, cycle)

    @property
    def period(self) -> int:
        return len(self.cycle)

    def symbol_at(self, k: int):
        if k < len(self.prefix):
            return self.prefix[k]
        return self.cycle[(k - len(self.prefix)) % len(self.cycle)]

    def head(self, n: int) -> tuple:
        return tuple(self.symbol_at(k) for k in range(n))

    def shift(self) -> "Lasso":
        if self.prefix:
            return Lasso.make(self.prefix[1:], self.cycle)
        return Lasso.make((), self.cycle[1:] + self.cycle[:1])

    def prepend(self, symbol) -> "Lasso":
        return Lasso.make((symbol,) + self.prefix, self.cycle)

    def eventually_equal(self, other: "Lasso") -> bool:
        """Equal at every index from some point on (no shift allowed)."""
        start = max(len(self.prefix), len(other.prefix))
        span = lcm(self.period, other.period)
        return all(self.symbol_at(k) == other.symbol_at(k) for k in range(start, start + span))

    def is_pure(self) -> bool:
        return not self.prefix

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "cycle": list(self.cycle)}
