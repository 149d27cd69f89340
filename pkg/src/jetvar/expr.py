"""Exact rational expressions with a declared set of invertible denominators.

An Expression is a polynomial numerator over a factored denominator.  Every
denominator factor must have been declared invertible in the registry that
the expression carries, so dividing by anything else raises immediately
instead of producing an unsound answer.  Factors are stored as (registry
id, exponent) pairs and cancelled by exact polynomial division; with the
declared factors pairwise coprime this representation is canonical and
structural equality coincides with equality of values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .atoms import Atom
from .errors import DivisionByNonInvertible
from .poly import Poly, exact_div


class Registry:
    """Append-only list of monic primitive polynomials declared invertible."""

    __slots__ = ("entries", "_lookup")

    def __init__(self):
        self.entries = []
        self._lookup = {}

    def declare(self, poly: Poly) -> int:
        if poly.is_zero:
            raise ValueError("zero cannot be declared invertible")
        if poly.constant_value() is not None:
            raise ValueError("constants need no invertibility declaration")
        poly = poly.primitive()
        fid = self._lookup.get(poly.terms)
        if fid is None:
            fid = len(self.entries)
            self.entries.append(poly)
            self._lookup[poly.terms] = fid
        return fid

    def factorize(self, poly: Poly):
        """Split off declared factors: (constant, ((fid, exp), ...)) or None."""
        if poly.is_zero:
            return None
        c = poly.content()
        p = poly.scale(1 / c)
        if p.constant_value() == 1:
            return c, ()
        factors = []
        for fid, entry in enumerate(self.entries):
            k = 0
            while True:
                q = exact_div(p, entry)
                if q is None:
                    break
                p = q
                k += 1
            if k:
                factors.append((fid, k))
            if p.constant_value() is not None:
                break
        tail = p.constant_value()
        if tail is None:
            return None
        return c * tail, tuple(factors)


def _merge_den(da, db):
    out = dict(da)
    for fid, k in db:
        out[fid] = out.get(fid, 0) + k
    return tuple(sorted((f, k) for f, k in out.items() if k))


class Expression:
    __slots__ = ("reg", "num", "den", "_hash")

    def __init__(self, reg: Registry, num: Poly, den: tuple = ()):
        self.reg = reg
        if num.is_zero:
            den = ()
        elif den:
            num, den = _cancel(reg, num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(reg: Registry) -> "Expression":
        return Expression(reg, Poly(()))

    @staticmethod
    def const(reg: Registry, c) -> "Expression":
        return Expression(reg, Poly.const(c))

    @staticmethod
    def of_atom(reg: Registry, atom: Atom) -> "Expression":
        return Expression(reg, Poly.var(atom))

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def constant_value(self) -> Optional[Fraction]:
        if self.den:
            return None
        return self.num.constant_value()

    def atoms(self):
        seen = set()
        for a in self.num.atoms():
            seen.add(a)
            yield a
        for fid, _ in self.den:
            for a in self.reg.entries[fid].atoms():
                if a not in seen:
                    seen.add(a)
                    yield a

    def den_poly(self) -> Poly:
        p = Poly.const(1)
        for fid, k in self.den:
            p = p * self.reg.entries[fid].pow(k)
        return p

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Expression":
        if isinstance(other, Expression):
            return other
        if isinstance(other, (int, Fraction)):
            return Expression.const(self.reg, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.den and not other.den:
            return Expression(self.reg, self.num + other.num)
        da, db = dict(self.den), dict(other.den)
        lcm = dict(da)
        for f, k in db.items():
            lcm[f] = max(lcm.get(f, 0), k)
        na = self.num
        for f, k in lcm.items():
            extra = k - da.get(f, 0)
            if extra:
                na = na * self.reg.entries[f].pow(extra)
        nb = other.num
        for f, k in lcm.items():
            extra = k - db.get(f, 0)
            if extra:
                nb = nb * self.reg.entries[f].pow(extra)
        return Expression(self.reg, na + nb, tuple(sorted(lcm.items())))

    __radd__ = __add__

    def __neg__(self):
        return Expression(self.reg, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Expression.zero(self.reg)
        return Expression(
            self.reg, self.num * other.num, _merge_den(self.den, other.den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self) -> "Expression":
        if self.is_zero:
            raise ZeroDivisionError("division by zero expression")
        split = self.reg.factorize(self.num)
        if split is None:
            raise DivisionByNonInvertible(repr(self.num))
        c, factors = split
        num = Poly.const(1 / c)
        for fid, k in self.den:
            num = num * self.reg.entries[fid].pow(k)
        return Expression(self.reg, num, factors)

    def pow(self, k: int) -> "Expression":
        if k < 0:
            return self.inverse().pow(-k)
        out = Expression.const(self.reg, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus ------------------------------------------------------------

    def diff(self, atom: Atom) -> "Expression":
        dn = self.num.diff(atom)
        if not self.den:
            return Expression(self.reg, dn)
        # d(N / prod p_i^k_i) with every factor handled by the product rule.
        touched = [
            (fid, k)
            for fid, k in self.den
            if not self.reg.entries[fid].diff(atom).is_zero
        ]
        if not touched:
            return Expression(self.reg, dn, self.den)
        num = dn
        for fid, _ in touched:
            num = num * self.reg.entries[fid]
        for fid, k in touched:
            part = self.num.scale(-k) * self.reg.entries[fid].diff(atom)
            for other, _ in touched:
                if other != fid:
                    part = part * self.reg.entries[other]
            num = num + part
        den = _merge_den(self.den, tuple((fid, 1) for fid, _ in touched))
        return Expression(self.reg, num, den)

    def derive(self, rule) -> "Expression":
        """Sum of rule(a) * d(self)/d(a) over the atoms present.

        ``rule`` maps an atom to an Expression or None (meaning zero).
        """
        out = Expression.zero(self.reg)
        for a in sorted(self.atoms()):
            img = rule(a)
            if img is None or img.is_zero:
                continue
            d = self.diff(a)
            if not d.is_zero:
                out = out + img * d
        return out

    def substitute(self, mapping) -> "Expression":
        """Simultaneous substitution of atoms by expressions."""
        if not mapping:
            return self
        relevant = {a: v for a, v in mapping.items()}
        num_atoms = set(self.num.atoms())
        out = Expression.zero(self.reg)
        cache = {}
        if num_atoms & relevant.keys():
            for mono, c in self.num.terms:
                kept = []
                t = Expression.const(self.reg, c)
                for x, e in mono:
                    img = relevant.get(x)
                    if img is None:
                        kept.append((x, e))
                    else:
                        key = (x, e)
                        p = cache.get(key)
                        if p is None:
                            p = img.pow(e)
                            cache[key] = p
                        t = t * p
                if kept:
                    t = t * Expression(self.reg, Poly(((tuple(kept), Fraction(1)),)))
                out = out + t
        else:
            out = Expression(self.reg, self.num)
        for fid, k in self.den:
            entry = self.reg.entries[fid]
            if set(entry.atoms()) & relevant.keys():
                img = Expression(self.reg, entry).substitute(relevant)
                out = out / img.pow(k)
            else:
                out = Expression(self.reg, out.num, _merge_den(out.den, ((fid, k),)))
        return out

    # -- comparison ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expression.const(self.reg, other)
        return (
            isinstance(other, Expression)
            and self.num == other.num
            and self.den == other.den
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num.terms, self.den))
        return self._hash

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        bits = []
        for fid, k in self.den:
            p = self.reg.entries[fid]
            body = repr(p) if len(p.terms) == 1 else f"({p!r})"
            bits.append(body if k == 1 else f"{body}^{k}")
        den = "*".join(bits)
        if len(self.den) > 1 or self.den[0][1] > 1 or len(bits[0]) > 2:
            den = f"({den})" if "*" in den or "+" in den else den
        return f"({self.num!r})/{den}"


def _cancel(reg: Registry, num: Poly, den: tuple):
    out = []
    for fid, k in den:
        entry = reg.entries[fid]
        while k:
            q = exact_div(num, entry)
            if q is None:
                break
            num = q
            k -= 1
        if k:
            out.append((fid, k))
    return num, tuple(out)


def semantically_equal(a: Expression, b: Expression) -> bool:
    """Equality by cross multiplication; tolerant of unreduced input."""
    return (a.num * b.den_poly() - b.num * a.den_poly()).is_zero
