"""Differential forms on jet bundles and equation manifolds.

Forms are sums of coefficient times a wedge word of basis covectors.  The
basis consists of the horizontal dx^i and the contact forms theta^i_alpha;
words keep their covectors strictly ascending, with all horizontal factors
before the contact ones.  A form is attached to a context (a Bundle or an
EquationManifold) that supplies total derivatives and the meaning of the
contact basis.
"""

from __future__ import annotations

from .atoms import FormalFn, JetCoord
from .errors import ContextMismatch, NotHorizontal
from .expr import Expression
from .multiindex import MultiIndex


class Cov:
    """Basis covector: a horizontal dx^i (kind 0) or theta^i_alpha (kind 1)."""

    __slots__ = ("kind", "index", "fiber", "alpha", "key", "label")

    def __init__(self, kind, index, fiber, alpha, key, label):
        self.kind = kind
        self.index = index
        self.fiber = fiber
        self.alpha = alpha
        self.key = key
        self.label = label

    @staticmethod
    def dx(ctx, i: int) -> "Cov":
        return Cov(0, i, None, None, (0, i), "d" + base_names(ctx)[i])

    @staticmethod
    def theta(ctx, fiber: int, alpha: MultiIndex) -> "Cov":
        atom = bundle_of(ctx).jet(fiber, alpha)
        return Cov(
            1,
            None,
            fiber,
            alpha,
            (1, fiber, alpha.weight, tuple(-e for e in alpha)),
            f"th[{atom.label}]",
        )

    def __eq__(self, other):
        return isinstance(other, Cov) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return self.label


def bundle_of(ctx):
    return getattr(ctx, "bundle", ctx)


def base_names(ctx):
    return bundle_of(ctx).base


def _merge_word(wa, wb):
    """Concatenate two ascending words; returns (sign, word) or (0, None)."""
    out = []
    sign = 1
    i = j = 0
    while i < len(wa) and j < len(wb):
        if wa[i].key == wb[j].key:
            return 0, None
        if wa[i].key < wb[j].key:
            out.append(wa[i])
            i += 1
        else:
            # wb[j] jumps over the remaining entries of wa
            if (len(wa) - i) % 2:
                sign = -sign
            out.append(wb[j])
            j += 1
    out.extend(wa[i:])
    out.extend(wb[j:])
    return sign, tuple(out)


class DifferentialForm:
    __slots__ = ("ctx", "degree", "terms")

    def __init__(self, ctx, degree: int, terms: dict):
        self.ctx = ctx
        self.degree = degree
        self.terms = {w: c for w, c in terms.items() if not c.is_zero}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(ctx, degree: int) -> "DifferentialForm":
        return DifferentialForm(ctx, degree, {})

    @staticmethod
    def scalar(ctx, e: Expression) -> "DifferentialForm":
        return DifferentialForm(ctx, 0, {(): e})

    @staticmethod
    def monomial(ctx, coeff: Expression, covs) -> "DifferentialForm":
        covs = tuple(covs)
        word = tuple(sorted(covs))
        if len(set(c.key for c in word)) != len(word):
            return DifferentialForm.zero(ctx, len(covs))
        sign = _permutation_sign(covs, word)
        c = coeff if sign == 1 else -coeff
        return DifferentialForm(ctx, len(covs), {word: c})

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.ctx is not other.ctx:
            raise ContextMismatch("forms live over different contexts")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        if self.degree != other.degree:
            raise ContextMismatch("cannot add forms of different degree")
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w)
            terms[w] = c if s is None else s + c
        return DifferentialForm(self.ctx, self.degree, terms)

    def __neg__(self):
        return DifferentialForm(
            self.ctx, self.degree, {w: -c for w, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, e) -> "DifferentialForm":
        return DifferentialForm(
            self.ctx, self.degree, {w: c * e for w, c in self.terms.items()}
        )

    def __eq__(self, other):
        return (
            isinstance(other, DifferentialForm)
            and self.ctx is other.ctx
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.ctx), self.degree, frozenset(self.terms.items())))

    # -- graded algebra --------------------------------------------------------

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        terms = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                sign, w = _merge_word(wa, wb)
                if not sign:
                    continue
                c = ca * cb
                if sign < 0:
                    c = -c
                s = terms.get(w)
                terms[w] = c if s is None else s + c
        return DifferentialForm(self.ctx, self.degree + other.degree, terms)

    def theta_split(self):
        """Map contact degree -> subform."""
        parts = {}
        for w, c in self.terms.items():
            p = sum(1 for cov in w if cov.kind == 1)
            parts.setdefault(p, {})[w] = c
        return {
            p: DifferentialForm(self.ctx, self.degree, t) for p, t in parts.items()
        }

    def horizontal_part(self) -> "DifferentialForm":
        return DifferentialForm(
            self.ctx,
            self.degree,
            {w: c for w, c in self.terms.items() if all(cv.kind == 0 for cv in w)},
        )

    def contact_filter(self, p: int) -> "DifferentialForm":
        """Terms of contact degree at least p."""
        return DifferentialForm(
            self.ctx,
            self.degree,
            {
                w: c
                for w, c in self.terms.items()
                if sum(1 for cv in w if cv.kind == 1) >= p
            },
        )

    def min_contact_degree(self):
        degs = [sum(1 for cv in w if cv.kind == 1) for w in self.terms]
        return min(degs) if degs else None

    # -- calculus ----------------------------------------------------------------

    def exterior_d(self) -> "DifferentialForm":
        ctx = self.ctx
        out = DifferentialForm.zero(ctx, self.degree + 1)
        for w, c in self.terms.items():
            word_form = DifferentialForm(ctx, len(w), {w: ctx_one(ctx)})
            out = out + d_scalar(ctx, c).wedge(word_form)
            for j, cov in enumerate(w):
                if cov.kind == 0:
                    continue
                before = DifferentialForm(ctx, j, {tuple(w[:j]): c})
                after = DifferentialForm(
                    ctx, len(w) - j - 1, {tuple(w[j + 1:]): ctx_one(ctx)}
                )
                sign = -1 if j % 2 else 1
                piece = before.wedge(d_theta(ctx, cov)).wedge(after)
                if sign < 0:
                    piece = -piece
                out = out + piece
        return out

    def horizontal_d(self) -> "DifferentialForm":
        if self.min_contact_degree() not in (None, 0):
            raise NotHorizontal("horizontal differential of a contact form")
        ctx = self.ctx
        n = len(base_names(ctx))
        out = DifferentialForm.zero(ctx, self.degree + 1)
        for w, c in self.terms.items():
            for k in range(n):
                dk = ctx.D(c, k)
                if dk.is_zero:
                    continue
                out = out + DifferentialForm.monomial(
                    ctx, dk, (Cov.dx(ctx, k),) + w
                )
        return out

    def contract(self, field) -> "DifferentialForm":
        """Interior product with an evolutionary or Cartan field."""
        ctx = self.ctx
        out = DifferentialForm.zero(ctx, self.degree - 1)
        terms = {}
        for w, c in self.terms.items():
            for j, cov in enumerate(w):
                val = field.pair_cov(ctx, cov)
                if val is None or val.is_zero:
                    continue
                nw = w[:j] + w[j + 1:]
                nc = c * val
                if j % 2:
                    nc = -nc
                s = terms.get(nw)
                terms[nw] = nc if s is None else s + nc
        return out + DifferentialForm(ctx, self.degree - 1, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: tuple(c.key for c in w)):
            coeff = self.terms[w]
            word = "^".join(c.label for c in w) if w else "1"
            bits.append(f"({coeff!r})*{word}")
        return " + ".join(bits)


class CartanField:
    """A field with horizontal components along the total derivatives plus a
    vertical part given on the contact basis."""

    __slots__ = ("horizontal", "vertical")

    def __init__(self, horizontal, vertical=None):
        self.horizontal = tuple(horizontal)
        self.vertical = dict(vertical or {})

    def pair_cov(self, ctx, cov):
        if cov.kind == 0:
            return self.horizontal[cov.index]
        return self.vertical.get((cov.fiber, cov.alpha))


def _permutation_sign(src, dst) -> int:
    order = [dst.index(c) for c in src]
    sign = 1
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                sign = -sign
    return sign


def ctx_one(ctx) -> Expression:
    return bundle_of(ctx).one()


def d_scalar(ctx, e: Expression) -> DifferentialForm:
    """Full differential of a scalar, split into dx and theta parts."""
    b = bundle_of(ctx)
    n = len(b.base)
    out = DifferentialForm.zero(ctx, 1)
    for k in range(n):
        dk = ctx.D(e, k)
        if not dk.is_zero:
            out = out + DifferentialForm.monomial(ctx, dk, (Cov.dx(ctx, k),))
    for a in sorted(e.atoms()):
        if not isinstance(a, JetCoord):
            continue
        coeff = e.diff(a)
        if coeff.is_zero:
            continue
        out = out + ctx.theta_form(a.fiber, a.alpha).scale(coeff)
    return out


def d_theta(ctx, cov: Cov) -> DifferentialForm:
    """d(theta^i_alpha) = sum_k dx^k wedge theta^i_{alpha+1_k}."""
    b = bundle_of(ctx)
    out = DifferentialForm.zero(ctx, 2)
    for k in range(len(b.base)):
        dxk = DifferentialForm.monomial(ctx, b.one(), (Cov.dx(ctx, k),))
        out = out + dxk.wedge(ctx.theta_form(cov.fiber, cov.alpha.up(k)))
    return out


def vol(ctx) -> DifferentialForm:
    b = bundle_of(ctx)
    return DifferentialForm.monomial(
        ctx, b.one(), tuple(Cov.dx(ctx, k) for k in range(len(b.base)))
    )


def iota(ctx, k: int) -> DifferentialForm:
    """Interior product of the volume form with the k-th coordinate field."""
    b = bundle_of(ctx)
    covs = tuple(Cov.dx(ctx, i) for i in range(len(b.base)) if i != k)
    coeff = b.one() if k % 2 == 0 else -b.one()
    return DifferentialForm.monomial(ctx, coeff, covs)
