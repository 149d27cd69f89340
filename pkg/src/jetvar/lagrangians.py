"""Internal Lagrangians of equation manifolds.

The representative of the internal Lagrangian of a density is the
restriction of (density * volume + boundary form) to the manifold.  Its
differential lies in the square of the contact ideal, which is checked at
construction.  Symmetries act by contraction into that differential, and
the contraction is classified by extracting the cosymmetry that the
one-contact part determines.
"""

from __future__ import annotations

import warnings

from .errors import (
    EulerNotVanishing,
    NotASymmetry,
    NotASymmetryWarning,
    ShapeMismatch,
)
from .expr import Expression
from .forms import DifferentialForm, iota, vol
from .jets import Characteristic
from .linalg import solve_linear
from .multiindex import zero_index
from .varcalc import CDiffOperator, euler, noether_form


class InternalLagrangian:
    __slots__ = ("manifold", "rep", "_dl")

    def __init__(self, manifold, rep: DifferentialForm):
        self.manifold = manifold
        self.rep = rep
        self._dl = None

    def differential(self) -> DifferentialForm:
        if self._dl is None:
            d = self.rep.exterior_d()
            low = d.min_contact_degree()
            if low is not None and low < 2:
                raise EulerNotVanishing(
                    "the differential of the representative is not in the "
                    "square of the contact ideal"
                )
            self._dl = d
        return self._dl

    def restrict_to(self, other) -> "InternalLagrangian":
        """Carry the representative to a covering or a finer chart."""
        return InternalLagrangian(other, other.restrict_form(self.rep))


def internal_lagrangian(lam: Expression, manifold, skip=None) -> InternalLagrangian:
    bundle = manifold.bundle
    source = euler(bundle, lam, bundle.fibers)
    for dep, comp in zip(source.dependents, source.components):
        if not manifold.restrict(comp).is_zero:
            raise EulerNotVanishing(
                f"euler component for {dep} does not vanish on the manifold"
            )
    free = DifferentialForm.scalar(bundle, lam).wedge(vol(bundle))
    free = free + noether_form(bundle, lam, skip=skip)
    ell = InternalLagrangian(manifold, manifold.restrict_form(free))
    ell.differential()
    return ell


def presymplectic(ell: InternalLagrangian) -> DifferentialForm:
    """The differential of the representative; a two-contact form."""
    return ell.differential()


def symmetry_action(ell: InternalLagrangian, field, check=True) -> DifferentialForm:
    """Contraction of a symmetry into the differential of the internal
    Lagrangian.  With ``check`` a characteristic that fails the symmetry
    test only warns, and the contraction is still returned."""
    if check and isinstance(field, Characteristic):
        if not ell.manifold.is_symmetry(field):
            warnings.warn(
                "the characteristic is not a symmetry of the manifold",
                NotASymmetryWarning,
                stacklevel=2,
            )
    return ell.differential().contract(field)


def check_conserved_current(manifold, current: DifferentialForm) -> bool:
    """Whether the horizontal (n-1)-form is closed on the manifold."""
    if current.ctx is manifold:
        dh = current.horizontal_d()
        return all(c.is_zero for c in dh.terms.values())
    dh = current.horizontal_d()
    restricted = manifold.restrict_form(dh)
    return restricted.is_zero


def check_presymplectic_operator(manifold, delta: CDiffOperator) -> bool:
    """Whether l* after delta equals delta* after l on the manifold."""
    lin = manifold.linearization()
    if delta.rows != lin.rows or delta.cols != lin.cols:
        raise ShapeMismatch(
            f"operator is {delta.rows}x{delta.cols}, "
            f"linearization is {lin.rows}x{lin.cols}"
        )
    lhs = lin.adjoint().compose(delta)
    rhs = delta.adjoint().compose(lin)
    return (lhs - rhs).is_zero


class NoetherClassification:
    __slots__ = ("outcome", "cosymmetry", "action")

    def __init__(self, outcome, cosymmetry, action):
        self.outcome = outcome
        self.cosymmetry = cosymmetry
        self.action = action

    def __repr__(self):
        return f"NoetherClassification({self.outcome})"


def noether_classify(ell: InternalLagrangian, phi: Characteristic):
    """Classify the action of a symmetry on an internal Lagrangian.

    The one-contact part of i_phi d(rep) determines a cosymmetry; when it
    vanishes the symmetry produces a conservation law, when it is a genuine
    cosymmetry the action is itself a nontrivial internal Lagrangian, and
    anything the linear solve cannot settle is reported undecided.
    """
    manifold = ell.manifold
    if not manifold.is_symmetry(phi):
        raise NotASymmetry("the characteristic does not preserve the manifold")
    theta_action = ell.differential().contract(phi)
    one_contact = _contact_part(theta_action, 1)
    if one_contact.is_zero:
        return NoetherClassification(
            "conservation-law-producing", None, theta_action
        )
    bundle = manifold.bundle
    n = len(bundle.base)
    nfibers = len(bundle.fibers)
    # Read the coefficients a^{j beta k} of theta^j_beta wedge iota_k.
    grads = {}
    for word, coeff in one_contact.terms.items():
        theta = next(cv for cv in word if cv.kind == 1)
        k = _missing_dx(word, n)
        ref = _theta_wedge_iota(manifold, theta, k)
        (ref_word, ref_coeff), = ref.terms.items()
        if ref_word != word:
            return NoetherClassification("undecided", None, theta_action)
        val = coeff / ref_coeff
        slot = grads.setdefault(k, {})
        slot[(theta.fiber, theta.alpha)] = val
    zero = zero_index(n)
    total = CDiffOperator.zero(manifold, 1, nfibers)
    for k in sorted(grads):
        nabla = CDiffOperator(
            manifold,
            1,
            nfibers,
            _nabla_entries(grads[k]),
        )
        dk = CDiffOperator(
            manifold, 1, 1, {(0, 0): {zero.up(k): bundle.one()}}
        )
        total = total + dk.compose(nabla)
    lin = manifold.linearization()
    psi = _solve_factorization(manifold, total, lin)
    if psi is None:
        return NoetherClassification("undecided", None, theta_action)
    if all(p.is_zero for p in psi):
        return NoetherClassification(
            "conservation-law-producing", tuple(psi), theta_action
        )
    if manifold.is_cosymmetry(psi):
        return NoetherClassification(
            "nontrivial-internal-lagrangian", tuple(psi), theta_action
        )
    return NoetherClassification("undecided", tuple(psi), theta_action)


def _nabla_entries(table):
    entries = {}
    for (fiber, alpha), val in table.items():
        slot = entries.setdefault((0, fiber), {})
        slot[alpha] = slot.get(alpha, val - val) + val
    return entries


def _contact_part(form: DifferentialForm, p: int) -> DifferentialForm:
    return DifferentialForm(
        form.ctx,
        form.degree,
        {
            w: c
            for w, c in form.terms.items()
            if sum(1 for cv in w if cv.kind == 1) == p
        },
    )


def _missing_dx(word, n: int):
    present = {cv.index for cv in word if cv.kind == 0}
    missing = [k for k in range(n) if k not in present]
    if len(missing) != 1:
        raise ShapeMismatch("unexpected shape of a one-contact term")
    return missing[0]


def _theta_wedge_iota(ctx, theta_cov, k: int) -> DifferentialForm:
    from .forms import Cov, DifferentialForm as DF

    bundle = ctx.bundle
    theta = DF.monomial(ctx, bundle.one(), (theta_cov,))
    return theta.wedge(iota(ctx, k))


def _solve_factorization(manifold, total: CDiffOperator, lin: CDiffOperator):
    """Solve sum_r psi_r * lin[r] = total for the scalars psi_r."""
    bundle = manifold.bundle
    keys = set()
    for (r, c), table in lin.entries.items():
        for alpha in table:
            keys.add((c, alpha))
    for (_, c), table in total.entries.items():
        for alpha in table:
            keys.add((c, alpha))
    rows = []
    rhs = []
    for c, alpha in sorted(keys, key=lambda t: (t[0], t[1].sort_key())):
        row = []
        for r in range(lin.rows):
            row.append(lin.entries.get((r, c), {}).get(alpha, bundle.zero()))
        rows.append(row)
        rhs.append(total.entries.get((0, c), {}).get(alpha, bundle.zero()))
    try:
        sol = solve_linear(bundle.reg, rows, rhs, declare_pivots=False)
    except Exception:
        return None
    if not sol.consistent:
        return None
    psi = sol.values
    # verify by reconstruction
    check = CDiffOperator.zero(manifold, 1, lin.cols)
    for r in range(lin.rows):
        scaled = {}
        for (rr, c), table in lin.entries.items():
            if rr != r:
                continue
            slot = {}
            for alpha, v in table.items():
                val = psi[r] * v
                if not val.is_zero:
                    slot[alpha] = val
            if slot:
                scaled[(0, c)] = slot
        check = check + CDiffOperator(manifold, 1, lin.cols, scaled)
    if not (check - total).is_zero:
        return None
    return psi
