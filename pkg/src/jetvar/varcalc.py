"""Variational calculus: C-differential operators, the Euler operator,
boundary forms, adjoints, and the top order coefficient matrix.

A C-differential operator is a matrix whose entries are finite sums
a_alpha D_alpha in the total derivatives of its context.  The same class
works over a free bundle and over an equation manifold, where D means the
restricted total derivative.
"""

from __future__ import annotations

from .atoms import FormalFn, JetCoord
from .errors import ShapeMismatch
from .expr import Expression
from .forms import DifferentialForm, iota
from .multiindex import MultiIndex, multiindices, submultiindices, zero_index


class CDiffOperator:
    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx, rows: int, cols: int, entries: dict):
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        cleaned = {}
        for (r, c), table in entries.items():
            t = {a: v for a, v in table.items() if not v.is_zero}
            if t:
                cleaned[(r, c)] = t
        self.entries = cleaned

    @staticmethod
    def zero(ctx, rows: int, cols: int) -> "CDiffOperator":
        return CDiffOperator(ctx, rows, cols, {})

    @staticmethod
    def identity(ctx, n: int) -> "CDiffOperator":
        b = _bundle(ctx)
        zero = zero_index(len(b.base))
        return CDiffOperator(
            ctx, n, n, {(i, i): {zero: b.one()} for i in range(n)}
        )

    @staticmethod
    def scalar(ctx, e: Expression) -> "CDiffOperator":
        b = _bundle(ctx)
        return CDiffOperator(ctx, 1, 1, {(0, 0): {zero_index(len(b.base)): e}})

    @staticmethod
    def total_derivative(ctx, i: int) -> "CDiffOperator":
        b = _bundle(ctx)
        return CDiffOperator(
            ctx, 1, 1, {(0, 0): {zero_index(len(b.base)).up(i): b.one()}}
        )

    def apply(self, vec) -> list:
        if len(vec) != self.cols:
            raise ShapeMismatch(
                f"operator acts on {self.cols} components, got {len(vec)}"
            )
        b = _bundle(self.ctx)
        out = [b.zero() for _ in range(self.rows)]
        for (r, c), table in sorted(self.entries.items()):
            for alpha in sorted(table, key=lambda a: a.sort_key()):
                out[r] = out[r] + table[alpha] * self.ctx.D_alpha(vec[c], alpha)
        return out

    def compose(self, other: "CDiffOperator") -> "CDiffOperator":
        """self after other."""
        if self.ctx is not other.ctx:
            raise ShapeMismatch("operators live over different contexts")
        if self.cols != other.rows:
            raise ShapeMismatch(
                f"cannot compose {self.rows}x{self.cols} with "
                f"{other.rows}x{other.cols}"
            )
        entries = {}
        for (r, k), ta in self.entries.items():
            for (k2, c), tb in other.entries.items():
                if k2 != k:
                    continue
                for alpha, a in ta.items():
                    for beta, bb in tb.items():
                        # a D_alpha (b D_beta) by the Leibniz rule
                        for gamma in submultiindices(alpha):
                            coeff = alpha.binom(gamma)
                            mid = self.ctx.D_alpha(bb, alpha.minus(gamma))
                            val = a * mid
                            if coeff != 1:
                                val = val * coeff
                            if val.is_zero:
                                continue
                            key = gamma.plus(beta)
                            slot = entries.setdefault((r, c), {})
                            slot[key] = slot.get(key, val - val) + val
        return CDiffOperator(self.ctx, self.rows, other.cols, entries)

    def adjoint(self) -> "CDiffOperator":
        entries = {}
        for (r, c), table in self.entries.items():
            for alpha, a in table.items():
                for gamma in submultiindices(alpha):
                    coeff = alpha.binom(gamma)
                    sign = -1 if alpha.weight % 2 else 1
                    val = self.ctx.D_alpha(a, alpha.minus(gamma))
                    val = val * (coeff * sign)
                    if val.is_zero:
                        continue
                    slot = entries.setdefault((c, r), {})
                    slot[gamma] = slot.get(gamma, val - val) + val
        return CDiffOperator(self.ctx, self.cols, self.rows, entries)

    def __add__(self, other: "CDiffOperator") -> "CDiffOperator":
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch("operator shapes differ")
        entries = {k: dict(t) for k, t in self.entries.items()}
        for k, t in other.entries.items():
            slot = entries.setdefault(k, {})
            for alpha, v in t.items():
                slot[alpha] = slot.get(alpha, v - v) + v
        return CDiffOperator(self.ctx, self.rows, self.cols, entries)

    def __neg__(self):
        return CDiffOperator(
            self.ctx,
            self.rows,
            self.cols,
            {k: {a: -v for a, v in t.items()} for k, t in self.entries.items()},
        )

    def __sub__(self, other):
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, CDiffOperator)
            and self.ctx is other.ctx
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        if not self.entries:
            return "0"
        bits = []
        for (r, c) in sorted(self.entries):
            table = self.entries[(r, c)]
            parts = []
            for alpha in sorted(table, key=lambda a: a.sort_key()):
                parts.append(f"({table[alpha]!r})*D{tuple(alpha)}")
            bits.append(f"[{r},{c}]: " + " + ".join(parts))
        return "; ".join(bits)


class SourceForm:
    """Components of a variational derivative, one per dependent."""

    __slots__ = ("ctx", "dependents", "components")

    def __init__(self, ctx, dependents, components):
        self.ctx = ctx
        self.dependents = tuple(dependents)
        self.components = tuple(components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def pairing(self, phi) -> Expression:
        out = _bundle(self.ctx).zero()
        for c, p in zip(self.components, phi):
            out = out + c * p
        return out

    def __repr__(self):
        lines = [f"{d}: {c!r}" for d, c in zip(self.dependents, self.components)]
        return "SourceForm(" + "; ".join(lines) + ")"


def _bundle(ctx):
    return getattr(ctx, "bundle", ctx)


def _jet_atoms_of(bundle, e: Expression, fiber: int):
    return sorted(
        (a for a in e.atoms() if isinstance(a, JetCoord) and a.fiber == fiber),
        key=lambda a: a.key,
    )


def _formal_atoms_of(e: Expression, name: str):
    return sorted(
        (a for a in e.atoms() if isinstance(a, FormalFn) and a.name == name),
        key=lambda a: a.key,
    )


def euler(bundle, lam: Expression, dependents=None) -> SourceForm:
    """Variational derivative of the density lam with respect to each
    dependent (fiber names, formal function names, or both)."""
    if dependents is None:
        dependents = bundle.fibers
    comps = []
    for dep in dependents:
        total = bundle.zero()
        if dep in bundle.fibers:
            fiber = bundle.fibers.index(dep)
            atoms = _jet_atoms_of(bundle, lam, fiber)
        elif dep in bundle.formals:
            atoms = _formal_atoms_of(lam, dep)
        else:
            from .errors import JetvarError

            raise JetvarError(f"unknown dependent {dep!r}")
        for a in atoms:
            piece = bundle.D_alpha(lam.diff(a), a.alpha)
            if a.alpha.weight % 2:
                piece = -piece
            total = total + piece
        comps.append(total)
    return SourceForm(bundle, dependents, comps)


def noether_form(bundle, lam: Expression, skip=None) -> DifferentialForm:
    """Boundary form produced by integrating the first variation by parts.

    Derivatives are peeled along the earliest base variable first; a
    variable listed in ``skip`` is only peeled once nothing else remains.
    """
    skipset = frozenset(skip or ())
    boundary = {}
    work = []
    for fiber in range(len(bundle.fibers)):
        for a in _jet_atoms_of(bundle, lam, fiber):
            if a.alpha.weight:
                work.append((lam.diff(a), fiber, a.alpha))
    while work:
        coeff, fiber, beta = work.pop()
        support = beta.support()
        preferred = [k for k in support if k not in skipset]
        k = preferred[0] if preferred else support[0]
        gamma = beta.down(k)
        key = (k, fiber, gamma)
        prev = boundary.get(key)
        boundary[key] = coeff if prev is None else prev + coeff
        if gamma.weight:
            work.append((-bundle.D(coeff, k), fiber, gamma))
    n = len(bundle.base)
    out = DifferentialForm.zero(bundle, n)
    for (k, fiber, gamma) in sorted(boundary):
        coeff = boundary[(k, fiber, gamma)]
        if coeff.is_zero:
            continue
        theta = bundle.theta_form(fiber, gamma).scale(coeff)
        out = out + theta.wedge(iota(bundle, k))
    return out


def linearize(ctx, components, nfibers=None) -> CDiffOperator:
    """Linearization of a list of expressions along the fiber directions."""
    b = _bundle(ctx)
    if nfibers is None:
        nfibers = len(b.fibers)
    entries = {}
    for r, F in enumerate(components):
        for a in sorted(F.atoms()):
            if not isinstance(a, JetCoord):
                continue
            coeff = F.diff(a)
            if coeff.is_zero:
                continue
            slot = entries.setdefault((r, a.fiber), {})
            slot[a.alpha] = slot.get(a.alpha, coeff - coeff) + coeff
    return CDiffOperator(ctx, len(components), nfibers, entries)


def adjoint(op: CDiffOperator) -> CDiffOperator:
    return op.adjoint()


def nondegeneracy_matrix(bundle, lam: Expression, k: int, xi) -> list:
    """Matrix sum_{|a|=|b|=k} d^2 lam / du^i_a du^j_b xi^{a+b}."""
    n = len(bundle.base)
    m = len(bundle.fibers)
    xi = [x if isinstance(x, Expression) else bundle.const(x) for x in xi]
    rows = [[bundle.zero() for _ in range(m)] for _ in range(m)]
    tops = list(multiindices(n, k))
    for i in range(m):
        for j in range(m):
            acc = bundle.zero()
            for alpha in tops:
                da = lam.diff(bundle.jet(i, alpha))
                if da.is_zero:
                    continue
                for beta in tops:
                    d2 = da.diff(bundle.jet(j, beta))
                    if d2.is_zero:
                        continue
                    weight = bundle.one()
                    for idx, e in enumerate(alpha.plus(beta)):
                        for _ in range(e):
                            weight = weight * xi[idx]
                    acc = acc + d2 * weight
            rows[i][j] = acc
    return rows
