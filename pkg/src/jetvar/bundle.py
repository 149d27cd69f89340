"""Jet bundles over a fixed base, with total derivatives.

A Bundle records base variable names, fiber names, parameters, and formal
functions.  It interns every atom it hands out, enforces the global order
cap, and implements the total derivatives acting on expressions.  The cap
is read from JETVAR_MAX_ORDER when the bundle is created.
"""

from __future__ import annotations

import os

from .atoms import BaseVar, FormalFn, JetCoord, Param
from .errors import ContextMismatch, JetvarError, MaxOrderExceeded
from .expr import Expression, Registry
from .multiindex import MultiIndex, zero_index

DEFAULT_MAX_ORDER = 12


def _read_cap() -> int:
    raw = os.environ.get("JETVAR_MAX_ORDER", "")
    if not raw:
        return DEFAULT_MAX_ORDER
    try:
        cap = int(raw)
    except ValueError as exc:
        raise JetvarError(f"JETVAR_MAX_ORDER must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise JetvarError("JETVAR_MAX_ORDER must be at least 1")
    return cap


class Bundle:
    __slots__ = (
        "base",
        "fibers",
        "params",
        "formals",
        "reg",
        "max_order",
        "_jets",
        "_formal_atoms",
        "_base_atoms",
        "_param_atoms",
        "_fiber_index",
    )

    def __init__(
        self,
        base,
        fibers,
        params=(),
        formals=None,
        registry: Registry | None = None,
        max_order: int | None = None,
    ):
        self.base = tuple(base)
        self.fibers = tuple(fibers)
        self.params = tuple(params)
        self.formals = dict(formals or {})
        self.reg = registry if registry is not None else Registry()
        self.max_order = max_order if max_order is not None else _read_cap()
        self._jets = {}
        self._formal_atoms = {}
        self._base_atoms = tuple(
            BaseVar(i, name) for i, name in enumerate(self.base)
        )
        self._param_atoms = {name: Param(name, name) for name in self.params}
        self._fiber_index = {name: i for i, name in enumerate(self.fibers)}
        seen = set(self.base)
        for group in (self.fibers, self.params, tuple(self.formals)):
            for name in group:
                if name in seen:
                    raise JetvarError(f"name {name!r} declared twice")
                seen.add(name)

    # -- atoms ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.base)

    def jet(self, fiber: int, alpha: MultiIndex) -> JetCoord:
        key = (fiber, alpha)
        atom = self._jets.get(key)
        if atom is None:
            w = alpha.weight
            if w > self.max_order:
                raise MaxOrderExceeded(w, self.max_order)
            atom = JetCoord(fiber, alpha, self._jet_label(fiber, alpha))
            self._jets[key] = atom
        return atom

    def _jet_label(self, fiber: int, alpha: MultiIndex) -> str:
        suffix = "".join(
            name * e for name, e in zip(self.base, alpha)
        )
        name = self.fibers[fiber]
        return f"{name}_{suffix}" if suffix else name

    def formal(self, name: str, alpha: MultiIndex) -> FormalFn:
        args = self.formals.get(name)
        if args is None:
            raise JetvarError(f"unknown formal function {name!r}")
        for i, e in enumerate(alpha):
            if e and i not in args:
                raise JetvarError(
                    f"formal function {name!r} does not depend on {self.base[i]!r}"
                )
        key = (name, alpha)
        atom = self._formal_atoms.get(key)
        if atom is None:
            if alpha.weight > self.max_order:
                raise MaxOrderExceeded(alpha.weight, self.max_order)
            suffix = "".join(b * e for b, e in zip(self.base, alpha))
            label = f"{name}_{suffix}" if suffix else name
            atom = FormalFn(name, alpha, args, label)
            self._formal_atoms[key] = atom
        return atom

    def base_var(self, i: int) -> BaseVar:
        return self._base_atoms[i]

    def param(self, name: str) -> Param:
        return self._param_atoms[name]

    # -- expressions -----------------------------------------------------------

    def zero(self) -> Expression:
        return Expression.zero(self.reg)

    def one(self) -> Expression:
        return Expression.const(self.reg, 1)

    def const(self, c) -> Expression:
        return Expression.const(self.reg, c)

    def of(self, atom) -> Expression:
        return Expression.of_atom(self.reg, atom)

    def zero_index(self) -> MultiIndex:
        return zero_index(self.n)

    def coord(self, text: str) -> Expression:
        """Parse a coordinate label such as 'u', 'u_xxy', 'f_xy', or 'm'."""
        return self.of(self.coord_atom(text))

    def coord_atom(self, text: str):
        head, _, suffix = text.partition("_")
        alpha = self._parse_suffix(suffix) if suffix else self.zero_index()
        if head in self._fiber_index:
            return self.jet(self._fiber_index[head], alpha)
        if head in self.formals:
            return self.formal(head, alpha)
        if not suffix:
            if head in self._param_atoms:
                return self._param_atoms[head]
            if head in self.base:
                return self._base_atoms[self.base.index(head)]
        raise JetvarError(f"cannot resolve coordinate {text!r}")

    def _parse_suffix(self, suffix: str) -> MultiIndex:
        counts = [0] * self.n
        names = sorted(range(self.n), key=lambda i: -len(self.base[i]))
        pos = 0
        while pos < len(suffix):
            for i in names:
                b = self.base[i]
                if suffix.startswith(b, pos):
                    counts[i] += 1
                    pos += len(b)
                    break
            else:
                raise JetvarError(f"cannot parse derivative suffix {suffix!r}")
        return MultiIndex(counts)

    # -- calculus ---------------------------------------------------------------

    def D(self, e: Expression, i: int) -> Expression:
        """Total derivative along the i-th base variable."""
        if e.reg is not self.reg:
            raise ContextMismatch("expression belongs to a different registry")
        return e.derive(lambda a: self._d_atom(a, i))

    def _d_atom(self, a, i: int):
        if isinstance(a, JetCoord):
            return self.of(self.jet(a.fiber, a.alpha.up(i)))
        if isinstance(a, BaseVar):
            return self.one() if a.index == i else None
        if isinstance(a, FormalFn):
            if i in a.args:
                return self.of(self.formal(a.name, a.alpha.up(i)))
            return None
        return None

    def D_alpha(self, e: Expression, alpha: MultiIndex) -> Expression:
        for i, k in enumerate(alpha):
            for _ in range(k):
                e = self.D(e, i)
        return e

    def is_internal_jet(self, fiber: int, alpha: MultiIndex) -> bool:
        return True

    def theta_form(self, fiber: int, alpha: MultiIndex):
        from .forms import Cov, DifferentialForm

        return DifferentialForm.monomial(
            self, self.one(), (Cov.theta(self, fiber, alpha),)
        )

    # -- derived bundles ----------------------------------------------------------

    def extend(self, extra_fibers, extra_formals=None) -> "Bundle":
        formals = dict(self.formals)
        if extra_formals:
            formals.update(extra_formals)
        return Bundle(
            self.base,
            self.fibers + tuple(extra_fibers),
            self.params,
            formals,
            registry=self.reg,
            max_order=self.max_order,
        )

    def base_context(self, formals=None) -> "Bundle":
        """Bundle over the same base with no fibers, for pulled back data."""
        merged = dict(self.formals)
        if formals:
            merged.update(formals)
        return Bundle(
            self.base,
            (),
            self.params,
            merged,
            registry=self.reg,
            max_order=self.max_order,
        )

    def __repr__(self):
        return f"Bundle(base={self.base}, fibers={self.fibers})"
