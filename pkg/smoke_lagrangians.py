from fractions import Fraction

from jetvar.bundle import Bundle
from jetvar.equations import EquationManifold
from jetvar.jets import Characteristic
from jetvar.lagrangians import (
    check_conserved_current,
    check_presymplectic_operator,
    internal_lagrangian,
    noether_classify,
    presymplectic,
    symmetry_action,
)
from jetvar.forms import DifferentialForm, vol
from jetvar.multiindex import MultiIndex
from jetvar.varcalc import CDiffOperator


def show(form):
    parts = []
    for word, coeff in sorted(form.terms.items(), key=lambda t: tuple(c.key for c in t[0])):
        parts.append("(" + str(coeff) + ")*" + "^".join(c.label for c in word))
    return "  +  ".join(parts) if parts else "0"


b = Bundle(base=("x", "y"), fibers=("u",))
u = lambda *a: b.of(b.jet(0, MultiIndex(a)))
lam = (u(1, 0) * u(1, 0) + u(0, 1) * u(0, 1)) * b.const(Fraction(-1, 2))
E = EquationManifold(b, {b.jet(0, MultiIndex((0, 2))): -b.of(b.jet(0, MultiIndex((2, 0))))})

ell = internal_lagrangian(lam, E)
print("rep:", show(ell.rep))
dl = presymplectic(ell)
print("min contact degree of dl:", dl.min_contact_degree())
print("dl:", show(dl))

phi = Characteristic((b.of(b.jet(0, (1, 0))),))
res = noether_classify(ell, phi)
print("x-translation:", res.outcome, "psi:", [str(p) for p in (res.cosymmetry or ())])

phi_u = Characteristic((b.of(b.jet(0, (0, 0))),))
res2 = noether_classify(ell, phi_u)
print("scaling phi=u:", res2.outcome, "psi:", [str(p) for p in (res2.cosymmetry or ())])

# conserved current from x-translation of the free Lagrangian:
# T = (u_x^2 - u_y^2)/2 dy - u_x u_y (-dx) ... check d_h closed on E directly.
half = Fraction(1, 2)
dx = DifferentialForm.monomial(E, E.bundle.one(), (E.bundle.dx_cov(0),)) if hasattr(E.bundle, "dx_cov") else None
from jetvar.forms import Cov
dxc = Cov.dx(b, 0)
dyc = Cov.dx(b, 1)
t_y = (u(0, 1) * u(0, 1) - u(1, 0) * u(1, 0)) * b.const(half)
t_x = u(1, 0) * u(0, 1)
cur = DifferentialForm.monomial(E, t_x, (dxc,)) + DifferentialForm.monomial(E, t_y, (dyc,))
print("current closed on E:", check_conserved_current(E, cur))
bad = DifferentialForm.monomial(E, u(1, 0), (dxc,))
print("bad current closed:", check_conserved_current(E, bad))

# presymplectic operator check: for Laplace, Delta = identity works since l is
# self-adjoint.
ident = CDiffOperator.identity(E, 1)
print("identity is presymplectic for laplace:", check_presymplectic_operator(E, ident))

act = symmetry_action(ell, phi)
print("action contact degrees:", sorted({sum(1 for c in w if c.kind == 1) for w in act.terms}))
