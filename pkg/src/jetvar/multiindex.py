"""Multi-indices of partial derivatives.

A multi-index is a tuple of non-negative integers, one entry per base
variable.  The weight is the total number of differentiations.
"""

from __future__ import annotations

from math import comb
from typing import Iterator


class MultiIndex(tuple):
    __slots__ = ()

    @property
    def weight(self) -> int:
        return sum(self)

    def up(self, i: int) -> "MultiIndex":
        return MultiIndex(e + 1 if k == i else e for k, e in enumerate(self))

    def down(self, i: int) -> "MultiIndex":
        if self[i] == 0:
            raise ValueError(f"cannot lower index {i} of {self}")
        return MultiIndex(e - 1 if k == i else e for k, e in enumerate(self))

    def plus(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(a + b for a, b in zip(self, other))

    def minus(self, other: "MultiIndex") -> "MultiIndex":
        if not other.leq(self):
            raise ValueError(f"{other} is not below {self}")
        return MultiIndex(a - b for a, b in zip(self, other))

    def leq(self, other: "MultiIndex") -> bool:
        return len(self) == len(other) and all(a <= b for a, b in zip(self, other))

    def binom(self, lower: "MultiIndex") -> int:
        """Product of the entrywise binomial coefficients."""
        n = 1
        for a, b in zip(self, lower):
            n *= comb(a, b)
        return n

    def support(self) -> tuple:
        return tuple(k for k, e in enumerate(self) if e > 0)

    def sort_key(self) -> tuple:
        # Weight first; ties are broken so that indices loaded on the
        # earliest variables come first.
        return (self.weight, tuple(-e for e in self))


def zero_index(n: int) -> MultiIndex:
    return MultiIndex((0,) * n)


def unit_index(n: int, i: int) -> MultiIndex:
    return MultiIndex(1 if k == i else 0 for k in range(n))


def multiindices(n: int, weight: int) -> Iterator[MultiIndex]:
    """All multi-indices on ``n`` variables of the given weight."""
    if n == 1:
        yield MultiIndex((weight,))
        return
    for first in range(weight, -1, -1):
        for rest in multiindices(n - 1, weight - first):
            yield MultiIndex((first,) + tuple(rest))


def submultiindices(alpha: MultiIndex) -> Iterator[MultiIndex]:
    """All multi-indices below ``alpha``, in a fixed order."""
    if not alpha:
        yield MultiIndex(())
        return
    head = alpha[0]
    tail = MultiIndex(alpha[1:])
    for first in range(head + 1):
        for rest in submultiindices(tail):
            yield MultiIndex((first,) + tuple(rest))
