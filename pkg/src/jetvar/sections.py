"""Sections adapted to direction fields and reductions along them.

A section ansatz assigns base-context expressions to the internal jet
coordinates of an equation manifold, tangent to prescribed directions.
Pulling an internal Lagrangian back along such a section kills the higher
contact terms and leaves a functional on the free data; its stationarity
equations are extracted by the Euler operator and brought to a normal
shape.  The module also contains the rewriting of a k-th order
variational problem as a first order one in a distinguished variable,
together with the symbolic verification of that rewriting.
"""

from __future__ import annotations

from fractions import Fraction

from .atoms import JetCoord
from .bundle import Bundle
from .equations import EquationManifold
from .errors import (
    ContextMismatch,
    JetvarError,
    NondegeneracyFailure,
    NotSolvable,
    OverDetermined,
    ShapeMismatch,
    UnderDetermined,
)
from .expr import Expression
from .forms import Cov, DifferentialForm
from .linalg import determinant, solve_linear
from .multiindex import MultiIndex, multiindices, unit_index, zero_index
from .poly import exact_div, nth_root
from .varcalc import euler, nondegeneracy_matrix


class SectionAnsatz:
    """Partial section of an equation manifold, tangent to given directions.

    ``assignment`` maps internal jet coordinates to expressions of the base
    context.  It is materialized one jet order at a time: the tangency
    conditions of the order-(o-1) coordinates are linear in the order-o
    unknowns and solved for them, with every non-constant pivot declared
    invertible and recorded.  Values of external coordinates follow from
    the normal form of the target system.
    """

    __slots__ = (
        "target",
        "context",
        "assignment",
        "directions",
        "pivots",
        "order",
        "_values",
        "_deferred",
    )

    def __init__(self, target, context, assignment, directions, order=0, pivots=()):
        self.target = target
        self.context = context
        self.assignment = dict(assignment)
        self.directions = tuple(tuple(w) for w in directions)
        self.pivots = list(pivots)
        self.order = order
        self._values = {}
        self._deferred = []

    # -- values ------------------------------------------------------------

    def value(self, atom: JetCoord) -> Expression:
        got = self._values.get(atom)
        if got is not None:
            return got
        if self.target.is_internal(atom):
            self.ensure_order(atom.alpha.weight)
            got = self.assignment[atom]
        else:
            got = self.evaluate(self.target.normal_form(atom))
        self._values[atom] = got
        return got

    def evaluate(self, e: Expression) -> Expression:
        jets = [a for a in e.atoms() if isinstance(a, JetCoord)]
        return e.substitute({a: self.value(a) for a in jets})

    def _close(self, e: Expression) -> Expression:
        """Substitute the assigned coordinates, leaving unknowns in place."""
        mapping = {}
        for a in e.atoms():
            if isinstance(a, JetCoord) and a in self.assignment:
                mapping[a] = self.assignment[a]
        return e.substitute(mapping)

    def _value_known(self, atom):
        got = self._values.get(atom)
        if got is not None:
            return got
        if self.target.is_internal(atom):
            return self.assignment.get(atom)
        out = self._known(self.target.normal_form(atom))
        if out is not None:
            self._values[atom] = out
        return out

    def _known(self, e: Expression):
        """Evaluate without materializing anything new; None if undecided."""
        mapping = {}
        for a in e.atoms():
            if not isinstance(a, JetCoord):
                continue
            v = self._value_known(a)
            if v is None:
                return None
            mapping[a] = v
        return e.substitute(mapping)

    # -- materialization -----------------------------------------------------

    def ensure_order(self, order: int) -> None:
        while self.order < order:
            self._advance()

    def _tangency(self, coord, val, w):
        """Tangency residual of one coordinate along one direction, with
        the assigned coordinates substituted."""
        bundle = self.target.bundle
        jet_side = bundle.zero()
        base_side = self.context.zero()
        for k, wk in enumerate(w):
            if wk.is_zero:
                continue
            jet_side = jet_side + wk * self.target.D(bundle.of(coord), k)
            base_side = base_side + wk * self.context.D(val, k)
        return self._close(jet_side) - base_side

    def _advance(self) -> None:
        bundle = self.target.bundle
        o = self.order + 1
        unknowns = []
        for fiber in range(len(bundle.fibers)):
            for alpha in multiindices(bundle.n, o):
                if not self.target.is_internal_jet(fiber, alpha):
                    continue
                a = bundle.jet(fiber, alpha)
                if a not in self.assignment:
                    unknowns.append(a)
        unknowns.sort(key=lambda a: a.key)
        equations = [e for w, e in self._deferred if w <= o]
        self._deferred = [(w, e) for w, e in self._deferred if w > o]
        for coord, val in sorted(self.assignment.items(), key=lambda kv: kv[0].key):
            if coord.alpha.weight != o - 1:
                continue
            for w in self.directions:
                equations.append(self._tangency(coord, val, w))
        pending = []
        for eq in equations:
            eq = self._close(eq)
            free = [
                a
                for a in eq.atoms()
                if isinstance(a, JetCoord) and a not in self.assignment
            ]
            top = max((a.alpha.weight for a in free), default=0)
            if top > o:
                self._deferred.append((top, eq))
                continue
            for a in free:
                da = eq.diff(a)
                for b in free:
                    if not da.diff(b).is_zero:
                        raise NotSolvable(
                            f"tangency conditions nonlinear in {a.label}"
                        )
            pending.append(eq)
        if not unknowns:
            bad = [eq for eq in pending if not eq.is_zero]
            if bad:
                raise OverDetermined(bad)
            self.order = o
            return
        if not pending:
            raise UnderDetermined([a.label for a in unknowns])
        zero = self.context.zero()
        blank = {a: zero for a in unknowns}
        rows = []
        rhs = []
        for eq in pending:
            rows.append([eq.diff(a) for a in unknowns])
            rhs.append(-eq.substitute(blank))
        sol = solve_linear(self.context.reg, rows, rhs, declare_pivots=True)
        if not sol.consistent:
            raise OverDetermined([r for r in sol.residuals if not r.is_zero])
        if sol.free_cols:
            raise UnderDetermined([unknowns[c].label for c in sol.free_cols])
        self.pivots.extend(sol.declared)
        for a, v in zip(unknowns, sol.values):
            self.assignment[a] = v
        self.order = o

    # -- pullback of contact covectors -----------------------------------------

    def theta_pullback(self, fiber: int, alpha: MultiIndex) -> DifferentialForm:
        bundle = self.target.bundle
        base_val = self.value(bundle.jet(fiber, alpha))
        out = DifferentialForm.zero(self.context, 1)
        for k in range(bundle.n):
            comp = self.context.D(base_val, k) - self.value(
                bundle.jet(fiber, alpha.up(k))
            )
            if not comp.is_zero:
                out = out + DifferentialForm.monomial(
                    self.context, comp, (Cov.dx(self.context, k),)
                )
        return out

    def __repr__(self):
        known = sorted(a.label for a in self.assignment)
        return f"SectionAnsatz(order={self.order}, assigned={known})"


def solve_ansatz(manifold, context, free, directions, order=None) -> SectionAnsatz:
    """Extend free data to a section ansatz tangent to the directions.

    ``free`` maps internal jet coordinates to base-context expressions and
    ``directions`` lists the tangent directions as coefficient tuples over
    the base variables.  Coordinates not covered by the free data are
    solved for order by order; pivots of the linear solves are declared
    invertible and recorded on the result.
    """
    bundle = manifold.bundle
    assignment = {}
    for atom, val in free.items():
        if not isinstance(atom, JetCoord) or not manifold.is_internal(atom):
            raise JetvarError(f"free data must assign internal coordinates")
        for a in val.atoms():
            if isinstance(a, JetCoord):
                raise JetvarError("free data must live in the base context")
        assignment[atom] = val
    dirs = []
    for w in directions:
        w = tuple(c if isinstance(c, Expression) else context.const(c) for c in w)
        if len(w) != bundle.n:
            raise ShapeMismatch("direction has wrong number of components")
        dirs.append(w)
    missing = [
        bundle.fibers[i]
        for i in range(len(bundle.fibers))
        if manifold.is_internal_jet(i, zero_index(bundle.n))
        and bundle.jet(i, zero_index(bundle.n)) not in assignment
    ]
    if missing:
        raise UnderDetermined(missing)
    sigma = SectionAnsatz(manifold, context, assignment, dirs)
    if order is None:
        order = max((a.alpha.weight for a in assignment), default=0)
    sigma.ensure_order(order)
    return sigma


def check_almost_cartan(sigma: SectionAnsatz) -> bool:
    """Check the tangency identity for every assigned coordinate whose
    derivatives are materialized; a definite mismatch yields False."""
    for coord, val in sorted(sigma.assignment.items(), key=lambda kv: kv[0].key):
        if coord.alpha.weight >= sigma.order:
            continue
        for w in sigma.directions:
            residual = sigma._known(sigma._tangency(coord, val, w))
            if residual is not None and not residual.is_zero:
                return False
    return True


class ReducedFunctional:
    """Density of a functional left after eliminating jet coordinates."""

    __slots__ = ("context", "density")

    def __init__(self, context, density: Expression):
        if not context.fibers:
            for a in density.atoms():
                if isinstance(a, JetCoord):
                    raise JetvarError("jet coordinate survived the reduction")
        self.context = context
        self.density = density

    def __repr__(self):
        return f"ReducedFunctional({self.density!r})"


def pullback_density(ell, sigma: SectionAnsatz) -> ReducedFunctional:
    """Pull the representative of an internal Lagrangian back along a
    section ansatz.  Terms of contact degree two and higher vanish on a
    section, so the result is a plain density on the base context."""
    if sigma.target is not ell.manifold:
        raise ContextMismatch("section belongs to a different system")
    ctx = sigma.context
    n = sigma.target.bundle.n
    total = DifferentialForm.zero(ctx, n)
    for word, coeff in sorted(ell.rep.terms.items()):
        piece = DifferentialForm.scalar(ctx, sigma.evaluate(coeff))
        for cov in word:
            if cov.kind == 0:
                factor = DifferentialForm.monomial(
                    ctx, ctx.one(), (Cov.dx(ctx, cov.index),)
                )
            else:
                factor = sigma.theta_pullback(cov.fiber, cov.alpha)
            piece = piece.wedge(factor)
        total = total + piece
    density = ctx.zero()
    volume = tuple(Cov.dx(ctx, k) for k in range(n))
    for word, c in total.terms.items():
        if word != volume:
            raise JetvarError("pullback left a non-volume word")
        density = density + c
    return ReducedFunctional(ctx, density)


def normalize_equation(reg, e: Expression) -> Expression:
    """Normal shape of the equation e = 0: denominators and declared
    invertible factors removed, content one, positive leading coefficient,
    perfect powers replaced by their root."""
    p = e.num
    if p.is_zero:
        return Expression.zero(reg)
    stripped = True
    while stripped:
        stripped = False
        for entry in reg.entries:
            q = exact_div(p, entry)
            while q is not None:
                p, stripped = q, True
                q = exact_div(p, entry)
    p = p.primitive()
    reduced = True
    while reduced and p.constant_value() is None:
        reduced = False
        for k in (2, 3):
            root = nth_root(p, k)
            if root is not None and root.degree() < p.degree():
                p = root.primitive()
                reduced = True
                break
    return Expression(reg, p)


def stationarity_equations(functional: ReducedFunctional, unknowns) -> list:
    """Euler equations of a reduced density with respect to the named
    unknowns, normalized; identically vanishing components are dropped."""
    src = euler(functional.context, functional.density, list(unknowns))
    out = []
    for comp in src.components:
        if comp.is_zero:
            continue
        out.append(normalize_equation(functional.context.reg, comp))
    return out


# -- reduction to first order in a distinguished variable ------------------------


def _axis(n: int, i: int, count: int) -> MultiIndex:
    return MultiIndex(count if j == i else 0 for j in range(n))


def kovalevskaya_reduction(bundle, lam: Expression, k: int, y):
    """Rewrite the order-k variational problem of ``lam`` as a first order
    one in the derivatives along ``y``.

    The stationarity equations of ``lam`` are solved for the top pure-y
    derivatives, the solved system is parametrized by new fibers carrying
    the y-derivatives up to order 2k-1, and the density of the pulled back
    problem is assembled on that bundle.  The stationarity equations of
    the result are verified symbolically: they force the new fibers to be
    the y-derivatives of the zeroth one and then reproduce the original
    equations.  Returns the reduced functional and the normalized
    consequence equations.
    """
    yi = bundle.base.index(y) if isinstance(y, str) else y
    n, m = bundle.n, len(bundle.fibers)
    reg = bundle.reg
    xi = tuple(Fraction(int(i == yi)) for i in range(n))
    matrix = nondegeneracy_matrix(bundle, lam, k, xi)
    det = determinant(reg, matrix)
    if det.is_zero:
        raise NondegeneracyFailure(
            f"degenerate along {bundle.base[yi]} at order {k}"
        )
    eps = euler(bundle, lam).components
    tops = [bundle.jet(i, _axis(n, yi, 2 * k)) for i in range(m)]
    blank = {t: bundle.zero() for t in tops}
    rows = []
    rhs = []
    for j in range(m):
        row = [eps[j].diff(t) for t in tops]
        for entry in row:
            if any(isinstance(a, JetCoord) and a in blank for a in entry.atoms()):
                raise NondegeneracyFailure(
                    "stationarity equations are not quasilinear at top order"
                )
        rows.append(row)
        rhs.append(-eps[j].substitute(blank))
    sol = solve_linear(reg, rows, rhs, declare_pivots=True)
    if not sol.consistent or sol.free_cols:
        raise NondegeneracyFailure("top order coefficient matrix is singular")
    system = EquationManifold(
        bundle, {tops[i]: sol.values[i] for i in range(m)}
    )

    names = [f"{name}{j}" for j in range(2 * k) for name in bundle.fibers]
    reduced = Bundle(
        bundle.base,
        names,
        bundle.params,
        bundle.formals,
        registry=reg,
        max_order=bundle.max_order,
    )

    def phi_star(e: Expression) -> Expression:
        mapping = {}
        for a in e.atoms():
            if not isinstance(a, JetCoord):
                continue
            j = a.alpha[yi]
            if j >= 2 * k:
                raise JetvarError(f"{a.label} is not internal to the reduction")
            spatial = MultiIndex(
                0 if idx == yi else c for idx, c in enumerate(a.alpha)
            )
            mapping[a] = reduced.of(reduced.jet(j * m + a.fiber, spatial))
        return e.substitute(mapping)

    ey = unit_index(n, yi)
    origin = zero_index(n)
    rho = phi_star(system.restrict(lam))
    for r in range(k):
        for i in range(m):
            bracket = reduced.of(reduced.jet(r * m + i, ey)) - reduced.of(
                reduced.jet((r + 1) * m + i, origin)
            )
            for weight in range(k - r):
                for alpha in multiindices(n, weight):
                    da = lam.diff(bundle.jet(i, alpha.plus(_axis(n, yi, r + 1))))
                    if da.is_zero:
                        continue
                    coeff = phi_star(system.D_alpha(system.restrict(da), alpha))
                    if alpha.weight % 2:
                        coeff = -coeff
                    rho = rho + coeff * bracket

    consequences = []
    lower = {}
    for t in range(1, 2 * k):
        stage = EquationManifold(reduced, dict(lower))
        comps = euler(
            reduced, rho, [names[(2 * k - t) * m + i] for i in range(m)]
        ).components
        for j in range(m):
            got = stage.restrict(comps[j])
            want = reduced.zero()
            for i in range(m):
                aji = stage.restrict(phi_star(system.restrict(matrix[j][i])))
                if aji.is_zero:
                    continue
                want = want + aji * stage.restrict(
                    reduced.of(reduced.jet((t - 1) * m + i, ey))
                    - reduced.of(reduced.jet(t * m + i, origin))
                )
            if (k - t) % 2:
                want = -want
            if not (got - want).is_zero:
                raise JetvarError("reduction stage has an unexpected shape")
        for i in range(m):
            consequences.append(
                normalize_equation(
                    reg,
                    reduced.of(reduced.jet(i, _axis(n, yi, t)))
                    - reduced.of(reduced.jet(t * m + i, origin)),
                )
            )
            lower[reduced.jet(t * m + i, origin)] = reduced.of(
                reduced.jet(i, _axis(n, yi, t))
            )
    final = EquationManifold(reduced, lower)
    comps = euler(reduced, rho, [names[i] for i in range(m)]).components
    for j in range(m):
        got = final.restrict(comps[j])
        if not (got - eps[j]).is_zero:
            raise JetvarError("reduction lost the original equations")
        consequences.append(normalize_equation(reg, got))
    return ReducedFunctional(reduced, rho), consequences
