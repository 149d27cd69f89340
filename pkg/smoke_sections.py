from fractions import Fraction

from jetvar.bundle import Bundle
from jetvar.equations import EquationManifold, adjoin_covering
from jetvar.errors import NondegeneracyFailure, UnderDetermined
from jetvar.jets import Characteristic
from jetvar.lagrangians import internal_lagrangian
from jetvar.multiindex import MultiIndex
from jetvar.sections import (
    SectionAnsatz,
    check_almost_cartan,
    kovalevskaya_reduction,
    normalize_equation,
    pullback_density,
    solve_ansatz,
    stationarity_equations,
)
from jetvar.varcalc import euler, nondegeneracy_matrix
from jetvar.linalg import determinant

half = Fraction(1, 2)

print("== heat ==")
b = Bundle(("x", "t"), ("u",))
E = EquationManifold(b, {b.coord_atom("u_t"): b.coord("u_xx")})
ctx = b.base_context({"f": frozenset({0, 1})})
sig = solve_ansatz(E, ctx, {b.coord_atom("u"): ctx.coord("f")}, [(1, 0)])
for label, want in [
    ("u_x", "f_x"),
    ("u_t", "f_xx"),
    ("u_xt", "f_xxx"),
    ("u_tt", "f_xxxx"),
]:
    got = sig.value(b.coord_atom(label))
    ok = (got - ctx.coord(want)).is_zero
    print(f"  {label} -> {got!r} ok={ok}")
print("  almost cartan:", check_almost_cartan(sig))

print("== heat dx-section underdetermined ==")
try:
    solve_ansatz(E, ctx, {b.coord_atom("u"): ctx.coord("f")}, [(0, 1)], order=1)
    print("  NO ERROR (bad)")
except UnderDetermined as e:
    print("  UnderDetermined:", e)

print("== laplace ==")
b = Bundle(("x", "y"), ("u",))
E = EquationManifold(b, {b.coord_atom("u_yy"): -b.coord("u_xx")})
lam = (b.coord("u_x").pow(2) + b.coord("u_y").pow(2)) * b.const(-half)
ell = internal_lagrangian(lam, E)
ctx = b.base_context(
    {"f": frozenset({0, 1}), "g": frozenset({0, 1}), "Y": frozenset({0, 1})}
)
Y = ctx.coord("Y")
sig = solve_ansatz(
    E,
    ctx,
    {b.coord_atom("u"): ctx.coord("f"), b.coord_atom("u_y"): ctx.coord("g")},
    [(ctx.one(), Y)],
)
ux = sig.value(b.coord_atom("u_x"))
want_ux = ctx.coord("f_x") + Y * (ctx.coord("f_y") - ctx.coord("g"))
print("  u_x ok:", (ux - want_ux).is_zero, repr(ux))
print("  almost cartan:", check_almost_cartan(sig))
R = pullback_density(ell, sig)
fx, fy, g = ctx.coord("f_x"), ctx.coord("f_y"), ctx.coord("g")
want_rho = (Y * Y * (fy - g).pow(2) - fx * fx + g * g) * ctx.const(half) - g * fy
print("  density ok:", (R.density - want_rho).is_zero, repr(R.density))
sig.ensure_order(2)
print("  pivots after order 2:", [repr(p) for p in sig.pivots])
uxx = sig.value(b.coord_atom("u_xx"))
uxy = sig.value(b.coord_atom("u_xy"))
tangent = ctx.D(ux, 0) + Y * ctx.D(ux, 1) - (uxx + Y * uxy)
print("  order-2 tangency ok:", tangent.is_zero)
print("  almost cartan at 2:", check_almost_cartan(sig))
eqs = stationarity_equations(R, ["f", "g"])
for e in eqs:
    print("  eq:", repr(e))
want1 = (
    ctx.coord("f_xx")
    + ctx.coord("g_y")
    + ctx.D(Y * Y * (g - fy), 1)
)
want2 = (g - fy) * (Y * Y + 1)
print("  eq1 ok:", (eqs[0] - normalize_equation(ctx.reg, want1)).is_zero)
print("  eq2 ok:", (eqs[1] - normalize_equation(ctx.reg, want2)).is_zero)

bogus = SectionAnsatz(
    E,
    ctx,
    {
        b.coord_atom("u"): ctx.coord("f"),
        b.coord_atom("u_x"): ctx.coord("f_x"),
        b.coord_atom("u_y"): ctx.coord("g"),
    },
    [(ctx.one(), Y)],
    order=1,
)
print("  bogus almost cartan:", check_almost_cartan(bogus))

print("== wave ==")
b = Bundle(("x", "y"), ("u",))
E = EquationManifold(b, {b.coord_atom("u_xy"): b.zero()})
lam = b.coord("u_x") * b.coord("u_y") * b.const(-half)
ell = internal_lagrangian(lam, E)
print("  nondegeneracy det along dy:")
A = nondegeneracy_matrix(b, lam, 1, (Fraction(0), Fraction(1)))
print("   det:", repr(determinant(b.reg, A)))
try:
    kovalevskaya_reduction(b, lam, 1, "y")
    print("   NO ERROR (bad)")
except NondegeneracyFailure as e:
    print("   NondegeneracyFailure:", e)
ctx = b.base_context(
    {
        "f": frozenset({0, 1}),
        "h1": frozenset({1}),
        "h2": frozenset({1}),
        "h3": frozenset({1}),
    }
)
sig = solve_ansatz(
    E,
    ctx,
    {
        b.coord_atom("u"): ctx.coord("f"),
        b.coord_atom("u_y"): ctx.coord("h1"),
        b.coord_atom("u_yy"): ctx.coord("h2"),
        b.coord_atom("u_yyy"): ctx.coord("h3"),
    },
    [(1, 0)],
)
R = pullback_density(ell, sig)
want = ctx.coord("f_x") * ctx.coord("f_y") * ctx.const(-half)
print("  density ok:", (R.density - want).is_zero, repr(R.density))
eqs = stationarity_equations(R, ["f"])
print("  eqs:", [repr(e) for e in eqs])

print("== schrodinger ==")
b = Bundle(("t", "x"), ("u", "v"), formals={"V": frozenset({1})})
V = b.coord("V")
E = EquationManifold(
    b,
    {
        b.coord_atom("u_t"): V * b.coord("v") - b.coord("v_xx"),
        b.coord_atom("v_t"): b.coord("u_xx") - V * b.coord("u"),
    },
)
lam = (
    (b.coord("u_t") * b.coord("v") - b.coord("u") * b.coord("v_t")) * b.const(half)
    - (b.coord("u_x").pow(2) + b.coord("v_x").pow(2)) * b.const(half)
    - V * (b.coord("u").pow(2) + b.coord("v").pow(2)) * b.const(half)
)
ell = internal_lagrangian(lam, E)
print("  rep:", repr(ell.rep))
ctx = b.base_context({"f": frozenset({0, 1}), "g": frozenset({0, 1})})
sig = solve_ansatz(
    E,
    ctx,
    {b.coord_atom("u"): ctx.coord("f"), b.coord_atom("v"): ctx.coord("g")},
    [(0, 1)],
)
R = pullback_density(ell, sig)
f, g = ctx.coord("f"), ctx.coord("g")
Vc = ctx.coord("V")
want = (
    (g * ctx.coord("f_t") - f * ctx.coord("g_t")) * ctx.const(half)
    - (ctx.coord("f_x").pow(2) + ctx.coord("g_x").pow(2)) * ctx.const(half)
    - Vc * (f * f + g * g) * ctx.const(half)
)
print("  density ok:", (R.density - want).is_zero, repr(R.density))
eqs = stationarity_equations(R, ["f", "g"])
w1 = -ctx.coord("g_t") + ctx.coord("f_xx") - Vc * f
w2 = ctx.coord("f_t") + ctx.coord("g_xx") - Vc * g
print("  eq1 ok:", (eqs[0] - normalize_equation(ctx.reg, w1)).is_zero)
print("  eq2 ok:", (eqs[1] - normalize_equation(ctx.reg, w2)).is_zero)

print("== cauchy-riemann ==")
b = Bundle(("x", "y"), ("u",))
E = EquationManifold(b, {b.coord_atom("u_yy"): -b.coord("u_xx")})
lam = (b.coord("u_x").pow(2) + b.coord("u_y").pow(2)) * b.const(-half)
ell = internal_lagrangian(lam, E)
ext = b.extend(("v",))
C = adjoin_covering(
    E,
    ("v",),
    {
        ext.coord_atom("v_x"): -ext.coord("u_y"),
        ext.coord_atom("v_y"): ext.coord("u_x"),
    },
)
print("  covering fibers:", C.bundle.fibers)
S = EquationManifold(
    C.bundle,
    {
        C.bundle.coord_atom("u_y"): -C.bundle.coord("v_x"),
        C.bundle.coord_atom("v_y"): C.bundle.coord("u_x"),
    },
)
ellS = ell.restrict_to(S)
print("  rep on S:", repr(ellS.rep))
dl = ellS.differential()
act = dl.contract(Characteristic((C.bundle.zero(), C.bundle.one())))
print("  i_dv dl zero:", act.is_zero)
bb = C.bundle
ctx = bb.base_context(
    {"f": frozenset({0, 1}), "g": frozenset({0, 1}), "Y": frozenset({0, 1})}
)
Y = ctx.coord("Y")
sig = solve_ansatz(
    S,
    ctx,
    {bb.coord_atom("u"): ctx.coord("f"), bb.coord_atom("v"): ctx.coord("g")},
    [(ctx.one(), Y)],
    order=1,
)
fx, fy = ctx.coord("f_x"), ctx.coord("f_y")
gx, gy = ctx.coord("g_x"), ctx.coord("g_y")
den = Y * Y + ctx.one()
want_ux = (fx + Y * fy + Y * gx + Y * Y * gy) / den
want_vx = (gx + Y * gy - Y * fx - Y * Y * fy) / den
print("  u_x ok:", (sig.value(bb.coord_atom("u_x")) - want_ux).is_zero)
print("  v_x ok:", (sig.value(bb.coord_atom("v_x")) - want_vx).is_zero)
R = pullback_density(ellS, sig)
want_rho = -(
    (fx + Y * fy).pow(2)
    - (gx + Y * gy).pow(2)
    + (gx + Y * gy) * (Y * fx - fy) * ctx.const(2)
) / (den * ctx.const(2))
print("  density ok:", (R.density - want_rho).is_zero)
print("  density:", repr(R.density))
eqs = stationarity_equations(R, ["f", "g", "Y"])
print("  eqs:", len(eqs))
for e in eqs:
    print("   ", repr(e))
case1 = Y * fx - fy - gx - Y * gy
case2 = fx + Y * fy + Y * gx - gy
print("  product ok:", (eqs[2] - normalize_equation(ctx.reg, case1 * case2)).is_zero)

print("== pkdv ==")
b = Bundle(("t", "x"), ("u",))
E = EquationManifold(
    b,
    {b.coord_atom("u_xxx"): b.coord("u_t") - b.coord("u_x").pow(2) * b.const(3)},
)
lam = (
    b.coord("u_x") * b.coord("u_t") * b.const(half)
    - b.coord("u_x").pow(3)
    + b.coord("u_xx").pow(2) * b.const(half)
)
ell = internal_lagrangian(lam, E)
print("  rep:", repr(ell.rep))
ctx = b.base_context(
    {
        "f": frozenset({0, 1}),
        "g": frozenset({0, 1}),
        "h": frozenset({0, 1}),
        "X": frozenset({0, 1}),
    }
)
X = ctx.coord("X")
sig = solve_ansatz(
    E,
    ctx,
    {
        b.coord_atom("u"): ctx.coord("f"),
        b.coord_atom("u_x"): ctx.coord("g"),
        b.coord_atom("u_xx"): ctx.coord("h"),
    },
    [(ctx.one(), X)],
)
f, g, h = ctx.coord("f"), ctx.coord("g"), ctx.coord("h")
ft, fx = ctx.coord("f_t"), ctx.coord("f_x")
gt, gx = ctx.coord("g_t"), ctx.coord("g_x")
want_ut = ft + X * (fx - g)
want_uxt = gt + X * (gx - h)
print("  u_t ok:", (sig.value(b.coord_atom("u_t")) - want_ut).is_zero)
print("  u_xt ok:", (sig.value(b.coord_atom("u_xt")) - want_uxt).is_zero)
R = pullback_density(ell, sig)
want_rho = (
    -fx * ft * ctx.const(half)
    + g * ft
    - g.pow(3)
    + h * gx
    - h * h * ctx.const(half)
    - X * (fx - g).pow(2) * ctx.const(half)
)
print("  density ok:", (R.density - want_rho).is_zero, repr(R.density))
eqs = stationarity_equations(R, ["f", "g", "h"])
w1 = ctx.D(fx - g, 0) + ctx.D(X * (fx - g), 1)
w2 = ft - g * g * ctx.const(3) - ctx.coord("h_x") + X * (fx - g)
w3 = gx - h
for got, want in zip(eqs, (w1, w2, w3)):
    print("  eq ok:", (got - normalize_equation(ctx.reg, want)).is_zero, repr(got))
eqs4 = stationarity_equations(R, ["f", "g", "h", "X"])
print("  delta X:", repr(eqs4[3]), (eqs4[3] - normalize_equation(ctx.reg, fx - g)).is_zero)

print("== kovalevskaya: laplace ==")
b = Bundle(("x", "y"), ("u",))
lam = (b.coord("u_x").pow(2) + b.coord("u_y").pow(2)) * b.const(-half)
R, cons = kovalevskaya_reduction(b, lam, 1, "y")
print("  fibers:", R.context.fibers)
W = R.context
want_rho = (
    -W.coord("u0_x").pow(2) * W.const(half)
    + W.coord("u1").pow(2) * W.const(half)
    - W.coord("u1") * W.coord("u0_y")
)
print("  rho ok:", (R.density - want_rho).is_zero, repr(R.density))
for c in cons:
    print("  consequence:", repr(c))

print("== kovalevskaya: free particle ==")
b = Bundle(("y",), ("u",))
lam = b.coord("u_y").pow(2) * b.const(half)
R, cons = kovalevskaya_reduction(b, lam, 1, "y")
W = R.context
want_rho = W.coord("u1") * W.coord("u0_y") - W.coord("u1").pow(2) * W.const(half)
print("  rho ok:", (R.density - want_rho).is_zero, repr(R.density))
for c in cons:
    print("  consequence:", repr(c))
eqs = stationarity_equations(R, list(W.fibers))
print("  stationarity:", [repr(e) for e in eqs])

print("== kovalevskaya: schrodinger ==")
b = Bundle(("t", "x"), ("u", "v"), formals={"V": frozenset({1})})
V = b.coord("V")
lam = (
    (b.coord("u_t") * b.coord("v") - b.coord("u") * b.coord("v_t")) * b.const(half)
    - (b.coord("u_x").pow(2) + b.coord("v_x").pow(2)) * b.const(half)
    - V * (b.coord("u").pow(2) + b.coord("v").pow(2)) * b.const(half)
)
A = nondegeneracy_matrix(b, lam, 1, (Fraction(0), Fraction(1)))
print("  A:", [[repr(x) for x in row] for row in A])
R, cons = kovalevskaya_reduction(b, lam, 1, "x")
W = R.context
print("  fibers:", W.fibers)
for c in cons:
    print("  consequence:", repr(c))
