"""Sparse multivariate polynomials over exact rationals.

Monomials are tuples of (atom, exponent) pairs with atoms strictly
ascending; terms are kept in descending degree-lexicographic order, so the
leading term of a polynomial is terms[0].  Between monomials of equal total
degree the one whose first differing atom has the smaller key is the larger
monomial; on an equal atom the larger exponent wins.  All coefficients are
fractions.Fraction and every operation is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

Mono = tuple


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        xa, ea = a[i]
        xb, eb = b[j]
        if xa.key == xb.key:
            out.append((xa, ea + eb))
            i += 1
            j += 1
        elif xa.key < xb.key:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_div(a: Mono, b: Mono) -> Optional[Mono]:
    """Quotient monomial a/b, or None when b does not divide a."""
    out = []
    i = 0
    for xb, eb in b:
        while i < len(a) and a[i][0].key < xb.key:
            out.append(a[i])
            i += 1
        if i == len(a) or a[i][0].key != xb.key or a[i][1] < eb:
            return None
        if a[i][1] > eb:
            out.append((a[i][0], a[i][1] - eb))
        i += 1
    out.extend(a[i:])
    return tuple(out)


def mono_pow(a: Mono, k: int) -> Mono:
    if k == 0:
        return ()
    return tuple((x, e * k) for x, e in a)


def mono_deg(a: Mono) -> int:
    return sum(e for _, e in a)


def mono_cmp(a: Mono, b: Mono) -> int:
    """Degree-lexicographic comparison; positive when a is the larger."""
    da, db = mono_deg(a), mono_deg(b)
    if da != db:
        return 1 if da > db else -1
    for (xa, ea), (xb, eb) in zip(a, b):
        if xa.key != xb.key:
            return 1 if xa.key < xb.key else -1
        if ea != eb:
            return 1 if ea > eb else -1
    return 0


def _merge_terms(ta, tb) -> tuple:
    """Add two descending term lists."""
    out = []
    i = j = 0
    while i < len(ta) and j < len(tb):
        c = mono_cmp(ta[i][0], tb[j][0])
        if c > 0:
            out.append(ta[i])
            i += 1
        elif c < 0:
            out.append(tb[j])
            j += 1
        else:
            s = ta[i][1] + tb[j][1]
            if s:
                out.append((ta[i][0], s))
            i += 1
            j += 1
    out.extend(ta[i:])
    out.extend(tb[j:])
    return tuple(out)


def _sorted_terms(pairs) -> tuple:
    cleaned = [(m, c) for m, c in pairs if c]
    cleaned.sort(key=_term_key, reverse=True)
    return tuple(cleaned)


class _MonoKey:
    __slots__ = ("m",)

    def __init__(self, m):
        self.m = m

    def __lt__(self, other):
        return mono_cmp(self.m, other.m) < 0

    def __eq__(self, other):
        return mono_cmp(self.m, other.m) == 0


def _term_key(term):
    return _MonoKey(term[0])


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: tuple):
        self.terms = terms

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly((((), c),)) if c else Poly(())

    @staticmethod
    def var(atom) -> "Poly":
        return Poly(((((atom, 1),), Fraction(1)),))

    @staticmethod
    def from_pairs(pairs) -> "Poly":
        acc = {}
        for m, c in pairs:
            acc[m] = acc.get(m, Fraction(0)) + c
        return Poly(_sorted_terms(acc.items()))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> Optional[Fraction]:
        """The value when the polynomial is constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and not self.terms[0][0]:
            return self.terms[0][1]
        return None

    def leading(self):
        return self.terms[0]

    def degree(self) -> int:
        return mono_deg(self.terms[0][0]) if self.terms else 0

    def atoms(self) -> Iterator:
        seen = set()
        for m, _ in self.terms:
            for x, _e in m:
                if x not in seen:
                    seen.add(x)
                    yield x

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(_merge_terms(self.terms, other.terms))

    def __neg__(self) -> "Poly":
        return Poly(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly(())
        if len(other.terms) == 1:
            m2, c2 = other.terms[0]
            return Poly(tuple((mono_mul(m, m2), c * c2) for m, c in self.terms))
        acc = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return Poly(_sorted_terms(acc.items()))

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly(())
        return Poly(tuple((m, k * c) for m, k in self.terms))

    def pow(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base_needed = k > 1
            k >>= 1
            if base_needed and k:
                base = base * base
        return out

    def diff(self, atom) -> "Poly":
        pairs = []
        for m, c in self.terms:
            for pos, (x, e) in enumerate(m):
                if x == atom:
                    if e == 1:
                        nm = m[:pos] + m[pos + 1:]
                    else:
                        nm = m[:pos] + ((x, e - 1),) + m[pos + 1:]
                    pairs.append((nm, c * e))
                    break
        return Poly.from_pairs(pairs)

    def content(self) -> Fraction:
        """gcd of the coefficients, carrying the sign of the leading one."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for _, c in self.terms:
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        f = Fraction(num, den)
        return -f if self.terms[0][1] < 0 else f

    def primitive(self) -> "Poly":
        c = self.content()
        return self if c == 1 else self.scale(1 / c)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in self.terms:
            body = "*".join(
                x.label if e == 1 else f"{x.label}^{e}" for x, e in m
            )
            if not body:
                bits.append(str(c))
            elif c == 1:
                bits.append(body)
            elif c == -1:
                bits.append(f"-{body}")
            else:
                bits.append(f"{c}*{body}")
        return " + ".join(bits).replace("+ -", "- ")


def exact_div(f: Poly, g: Poly) -> Optional[Poly]:
    """Exact quotient f/g, or None when g does not divide f."""
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero:
        return f
    mg, cg = g.leading()
    out = []
    rem = f
    while not rem.is_zero:
        mr, cr = rem.leading()
        mq = mono_div(mr, mg)
        if mq is None:
            return None
        cq = cr / cg
        out.append((mq, cq))
        rem = rem - g * Poly(((mq, cq),))
    return Poly(_sorted_terms(out))


def _int_nth_root(n: int, k: int) -> Optional[int]:
    if n < 0:
        if k % 2 == 0:
            return None
        r = _int_nth_root(-n, k)
        return None if r is None else -r
    if n in (0, 1):
        return n
    lo, hi = 1, n
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid**k
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def nth_root(f: Poly, k: int) -> Optional[Poly]:
    """Exact k-th root of f, or None when f is not a perfect power."""
    if k == 1:
        return f
    if f.is_zero:
        return f
    mf, cf = f.leading()
    if any(e % k for _, e in mf) or mono_deg(mf) % k:
        return None
    rn = _int_nth_root(cf.numerator, k)
    rd = _int_nth_root(cf.denominator, k)
    if rn is None or rd is None:
        return None
    mt = tuple((x, e // k) for x, e in mf)
    ct = Fraction(rn, rd)
    root = Poly(((mt, ct),))
    guard = 0
    while True:
        rem = f - root.pow(k)
        if rem.is_zero:
            return root
        guard += 1
        if guard > 1000:
            return None
        mr, cr = rem.leading()
        ms = mono_div(mr, mono_pow(mt, k - 1))
        if ms is None:
            return None
        cs = cr / (k * ct ** (k - 1))
        term = Poly(((ms, cs),))
        # Each correction must be strictly below the previous leading term,
        # otherwise the expansion cannot converge.
        if mono_cmp(ms, root.terms[-1][0]) >= 0:
            return None
        root = root + term
