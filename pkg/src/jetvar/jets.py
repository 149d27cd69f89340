"""Evolutionary vector fields on jet bundles and equation manifolds.

A characteristic is one expression per fiber.  The associated evolutionary
field acts on an expression by the chain rule through the jet coordinates;
on an equation manifold the prolongation uses the restricted total
derivatives, so the same object serves both settings.
"""

from __future__ import annotations

from .atoms import JetCoord
from .expr import Expression
from .multiindex import MultiIndex


class Characteristic:
    __slots__ = ("components", "_cache")

    def __init__(self, components):
        self.components = tuple(components)
        self._cache = {}

    def __len__(self):
        return len(self.components)

    def D_alpha(self, ctx, fiber: int, alpha: MultiIndex) -> Expression:
        key = (id(ctx), fiber, alpha)
        val = self._cache.get(key)
        if val is None:
            if alpha.weight == 0:
                val = self.components[fiber]
            else:
                i = alpha.support()[0]
                val = ctx.D(self.D_alpha(ctx, fiber, alpha.down(i)), i)
            self._cache[key] = val
        return val

    def pair_cov(self, ctx, cov):
        """Value of the contact form ``cov`` on this evolutionary field."""
        if cov.kind == 0:
            return None
        return self.D_alpha(ctx, cov.fiber, cov.alpha)

    def __repr__(self):
        return "Characteristic(" + ", ".join(map(repr, self.components)) + ")"


def apply_evolutionary(ctx, phi: Characteristic, e: Expression) -> Expression:
    """Prolonged action of the evolutionary field with characteristic phi."""

    def rule(a):
        if isinstance(a, JetCoord):
            return phi.D_alpha(ctx, a.fiber, a.alpha)
        return None

    return e.derive(rule)
