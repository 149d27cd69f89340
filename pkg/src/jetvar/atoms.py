"""Generators of the coordinate rings.

Four kinds of atoms occur: jet coordinates u^i_alpha, formal functions of
selected base variables together with their derivatives, base variables,
and parameters.  Atoms compare by a precomputed key; the key ranks jet
coordinates before formal functions, then base variables, then parameters,
and inside each kind it sorts by derivative weight with the earliest base
variables first.  The polynomial layer only ever sees keys and labels, so
it stays independent of any particular bundle.
"""

from __future__ import annotations

from .multiindex import MultiIndex


class Atom:
    __slots__ = ("key", "label", "_hash")

    def __init__(self, key: tuple, label: str):
        self.key = key
        self.label = label
        self._hash = hash(key)

    def __eq__(self, other):
        return self is other or (isinstance(other, Atom) and self.key == other.key)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return self.label


class JetCoord(Atom):
    """Coordinate u^i_alpha on a jet bundle; ``fiber`` is the fiber index."""

    __slots__ = ("fiber", "alpha")

    def __init__(self, fiber: int, alpha: MultiIndex, label: str):
        super().__init__((0, fiber, alpha.weight, tuple(-e for e in alpha)), label)
        self.fiber = fiber
        self.alpha = alpha


class FormalFn(Atom):
    """Derivative of an undetermined function of selected base variables."""

    __slots__ = ("name", "alpha", "args")

    def __init__(self, name: str, alpha: MultiIndex, args: tuple, label: str):
        super().__init__((1, name, alpha.weight, tuple(-e for e in alpha)), label)
        self.name = name
        self.alpha = alpha
        self.args = args


class BaseVar(Atom):
    __slots__ = ("index",)

    def __init__(self, index: int, label: str):
        super().__init__((2, index), label)
        self.index = index


class Param(Atom):
    __slots__ = ("name",)

    def __init__(self, name: str, label: str):
        super().__init__((3, name), label)
        self.name = name
