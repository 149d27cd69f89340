"""Infinitely prolonged equations in solved form.

An EquationManifold is given by relations u^i_alpha -> rhs whose right
hand sides involve only internal coordinates.  A jet coordinate is external
when some relation applies to it; its normal form is obtained by
prolonging the minimal applicable relation, differentiating along the
earliest base variable first.  Building the manifold verifies that
overlapping relations prolong consistently.
"""

from __future__ import annotations

from .atoms import JetCoord
from .errors import (
    InconsistentCovering,
    InconsistentSystem,
    NotSolved,
    ShapeMismatch,
)
from .expr import Expression
from .forms import DifferentialForm
from .jets import Characteristic, apply_evolutionary
from .multiindex import MultiIndex
from .varcalc import CDiffOperator, linearize


class EquationManifold:
    __slots__ = ("bundle", "relations", "_nf", "_active", "_by_fiber")

    def __init__(self, bundle, relations, _check=True):
        self.bundle = bundle
        rels = {}
        for atom, rhs in relations.items():
            if not isinstance(atom, JetCoord):
                raise NotSolved(f"left hand side {atom!r} is not a jet coordinate")
            if atom in rels:
                raise NotSolved(f"two relations solve for {atom!r}")
            rels[atom] = rhs
        self.relations = dict(sorted(rels.items(), key=lambda kv: kv[0].key))
        self._by_fiber = {}
        for atom in self.relations:
            self._by_fiber.setdefault(atom.fiber, []).append(atom)
        for atoms in self._by_fiber.values():
            atoms.sort(key=lambda a: a.key)
        self._nf = {}
        self._active = set()
        for atom, rhs in self.relations.items():
            for a in rhs.atoms():
                if isinstance(a, JetCoord) and not self.is_internal(a):
                    # solved forms may chain; normalize now and fail on cycles
                    self.restrict(rhs)
                    break
        if _check:
            self._check_consistency()

    # -- chart -------------------------------------------------------------

    def _relation_for(self, atom: JetCoord):
        for lhs in self._by_fiber.get(atom.fiber, ()):
            if lhs.alpha.leq(atom.alpha):
                return lhs
        return None

    def is_internal(self, atom: JetCoord) -> bool:
        return self._relation_for(atom) is None

    def is_internal_jet(self, fiber: int, alpha: MultiIndex) -> bool:
        return self.is_internal(self.bundle.jet(fiber, alpha))

    def normal_form(self, atom: JetCoord) -> Expression:
        """Internal expression equal to the coordinate on the manifold."""
        got = self._nf.get(atom)
        if got is not None:
            return got
        lhs = self._relation_for(atom)
        if lhs is None:
            val = self.bundle.of(atom)
            self._nf[atom] = val
            return val
        if atom in self._active:
            raise NotSolved(f"relations for {atom!r} form a cycle")
        self._active.add(atom)
        try:
            beta = atom.alpha.minus(lhs.alpha)
            if beta.weight == 0:
                val = self.restrict(self.relations[lhs])
            else:
                k = beta.support()[0]
                below = self.bundle.jet(atom.fiber, atom.alpha.down(k))
                val = self.restrict(self.bundle.D(self.normal_form(below), k))
        finally:
            self._active.discard(atom)
        self._nf[atom] = val
        return val

    def restrict(self, e: Expression) -> Expression:
        mapping = {}
        for a in e.atoms():
            if isinstance(a, JetCoord) and not self.is_internal(a):
                mapping[a] = self.normal_form(a)
        return e.substitute(mapping) if mapping else e

    # -- calculus -----------------------------------------------------------

    def D(self, e: Expression, i: int) -> Expression:
        return self.restrict(self.bundle.D(self.restrict(e), i))

    def D_alpha(self, e: Expression, alpha: MultiIndex) -> Expression:
        for i, k in enumerate(alpha):
            for _ in range(k):
                e = self.D(e, i)
        return e

    def theta_form(self, fiber: int, alpha: MultiIndex) -> DifferentialForm:
        from .forms import Cov

        atom = self.bundle.jet(fiber, alpha)
        if self.is_internal(atom):
            return DifferentialForm.monomial(
                self, self.bundle.one(), (Cov.theta(self, fiber, alpha),)
            )
        nf = self.normal_form(atom)
        out = DifferentialForm.zero(self, 1)
        for a in sorted(nf.atoms()):
            if not isinstance(a, JetCoord):
                continue
            coeff = nf.diff(a)
            if coeff.is_zero:
                continue
            out = out + DifferentialForm.monomial(
                self, coeff, (Cov.theta(self, a.fiber, a.alpha),)
            )
        return out

    def restrict_form(self, form: DifferentialForm) -> DifferentialForm:
        """Restriction of a form written over the free bundle (or over a
        larger chart of the same bundle) to this manifold."""
        out = DifferentialForm.zero(self, form.degree)
        from .forms import Cov

        for word, coeff in form.terms.items():
            piece = DifferentialForm.scalar(self, self.restrict(coeff))
            for cov in word:
                if cov.kind == 0:
                    factor = DifferentialForm.monomial(
                        self, self.bundle.one(), (Cov.dx(self, cov.index),)
                    )
                else:
                    factor = self.theta_form(cov.fiber, cov.alpha)
                piece = piece.wedge(factor)
            out = out + piece
        return out

    # -- consistency -----------------------------------------------------------

    def _check_consistency(self):
        for fiber, atoms in sorted(self._by_fiber.items()):
            for i in range(len(atoms)):
                for j in range(i + 1, len(atoms)):
                    a, b = atoms[i], atoms[j]
                    gamma = MultiIndex(
                        max(p, q) for p, q in zip(a.alpha, b.alpha)
                    )
                    va = self._prolong(a, gamma)
                    vb = self._prolong(b, gamma)
                    if va != vb:
                        raise InconsistentSystem(
                            f"relations for {a!r} and {b!r} disagree at "
                            f"{self.bundle.jet(fiber, gamma)!r}: "
                            f"{va!r} vs {vb!r}"
                        )

    def _prolong(self, lhs: JetCoord, gamma: MultiIndex) -> Expression:
        val = self.restrict(self.relations[lhs])
        beta = gamma.minus(lhs.alpha)
        for i, k in enumerate(beta):
            for _ in range(k):
                val = self.restrict(self.bundle.D(val, i))
        return val

    # -- symmetries ----------------------------------------------------------

    def equations(self) -> list:
        """The relations as expressions lhs - rhs on the free bundle."""
        return [
            self.bundle.of(atom) - rhs for atom, rhs in self.relations.items()
        ]

    def linearization(self) -> CDiffOperator:
        """Restricted linearization of the solved relations."""
        free = linearize(self.bundle, self.equations())
        entries = {}
        for key, table in free.entries.items():
            slot = {}
            for alpha, coeff in table.items():
                val = self.restrict(coeff)
                if not val.is_zero:
                    slot[alpha] = val
            if slot:
                entries[key] = slot
        return CDiffOperator(self, free.rows, free.cols, entries)

    def is_symmetry(self, phi: Characteristic) -> bool:
        for F in self.equations():
            if not self.restrict(apply_evolutionary(self.bundle, phi, F)).is_zero:
                return False
        return True

    def is_cosymmetry(self, psi) -> bool:
        psi = tuple(psi)
        lin = self.linearization()
        if len(psi) != lin.rows:
            raise ShapeMismatch(
                f"expected {lin.rows} cosymmetry components, got {len(psi)}"
            )
        image = lin.adjoint().apply(list(psi))
        return all(v.is_zero for v in image)

    def __repr__(self):
        rels = ", ".join(f"{a!r} -> {r!r}" for a, r in self.relations.items())
        return f"EquationManifold({rels})"


def adjoin_covering(manifold: EquationManifold, new_fibers, relations):
    """Extend the bundle by new fibers and impose relations that tie them
    to the old system; the old relations are kept in the combined solved
    set, which is then rechecked for consistency.

    Atoms are keyed structurally and fiber indices are stable under
    extension, so the old right hand sides remain valid verbatim.
    """
    big = manifold.bundle.extend(new_fibers)
    combined = {}
    for atom, rhs in manifold.relations.items():
        combined[big.jet(atom.fiber, atom.alpha)] = rhs
    for atom, rhs in relations.items():
        key = big.jet(atom.fiber, atom.alpha)
        if key in combined:
            raise InconsistentCovering(f"{atom!r} is already solved for")
        combined[key] = rhs
    try:
        return EquationManifold(big, combined)
    except InconsistentCovering:
        raise
    except InconsistentSystem as exc:
        raise InconsistentCovering(str(exc)) from exc
