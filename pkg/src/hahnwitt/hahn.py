"""Truncated Hahn series over an arbitrary coefficient ring.

Supports are finite sorted exponent lists with exact rational exponents, all
strictly below a truncation order (None meaning +infinity).  Null-series
detection and division by (t - r) work over r-adically complete coefficient
rings that report valuations.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

Frac = Fraction


class FqRing:
    """Coefficient-ring adapter for a finite field."""

    def __init__(self, field):
        self.field = field
        self.zero = field.zero
        self.one = field.one

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def val(self, a) -> Optional[Frac]:
        return None if a.is_zero() else Frac(0)

    def eq_rings(self, other) -> bool:
        return isinstance(other, FqRing) and self.field == other.field

    def render(self, a) -> str:
        return a.render()


class ZModPN:
    """Z / p^N as a p-adically complete coefficient ring."""

    def __init__(self, p: int, prec: int):
        self.p = p
        self.prec = prec
        self.modulus = p ** prec
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def is_zero(self, a) -> bool:
        return a % self.modulus == 0

    def val(self, a) -> Optional[Frac]:
        a %= self.modulus
        if a == 0:
            return None
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return Frac(v)

    def eq_rings(self, other) -> bool:
        return isinstance(other, ZModPN) and (self.p, self.prec) == (other.p, other.prec)

    def render(self, a) -> str:
        return str(a % self.modulus)


INF = None  # truncation order +infinity


def _min_order(a: Optional[Frac], b: Optional[Frac]) -> Optional[Frac]:
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


def _add_order(a: Optional[Frac], b: Optional[Frac]) -> Optional[Frac]:
    if a is INF or b is INF:
        return INF
    return a + b


class HahnSeries:
    """A finite sorted sum of c * t^e with exact rational exponents e < order."""

    __slots__ = ("ring", "terms", "order")

    def __init__(self, ring, terms, order: Optional[Frac] = INF):
        cleaned = []
        last = None
        for e, c in sorted(terms, key=lambda t: t[0]):
            e = Frac(e)
            if ring.is_zero(c):
                continue
            if order is not INF and e >= order:
                continue
            if last is not None and e == last:
                raise ValueError("duplicate exponent in term list")
            last = e
            cleaned.append((e, c))
        self.ring = ring
        self.terms = tuple(cleaned)
        self.order = order

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(ring, order=INF) -> "HahnSeries":
        return HahnSeries(ring, [], order)

    @staticmethod
    def monomial(ring, coeff, exp, order=INF) -> "HahnSeries":
        return HahnSeries(ring, [(Frac(exp), coeff)], order)

    # -- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def min_exp(self) -> Optional[Frac]:
        """Leading exponent, or the truncation order for a zero-at-cap series."""
        return self.terms[0][0] if self.terms else self.order

    def coeff_at(self, e) -> object:
        e = Frac(e)
        for ee, c in self.terms:
            if ee == e:
                return c
        return self.ring.zero

    def support(self):
        return tuple(e for e, _ in self.terms)

    # -- ring operations --------------------------------------------------

    def _check(self, other: "HahnSeries") -> None:
        if not self.ring.eq_rings(other.ring):
            raise ValueError("coefficient ring mismatch")

    def __add__(self, other: "HahnSeries") -> "HahnSeries":
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms:
            if e in acc:
                acc[e] = self.ring.add(acc[e], c)
            else:
                acc[e] = c
        return HahnSeries(self.ring, acc.items(), _min_order(self.order, other.order))

    def __neg__(self) -> "HahnSeries":
        return HahnSeries(self.ring, [(e, self.ring.neg(c)) for e, c in self.terms], self.order)

    def __sub__(self, other: "HahnSeries") -> "HahnSeries":
        return self + (-other)

    def __mul__(self, other: "HahnSeries") -> "HahnSeries":
        self._check(other)
        order = _min_order(
            _add_order(self.order, other.min_exp() if other.terms else other.order),
            _add_order(other.order, self.min_exp() if self.terms else self.order),
        )
        if self.is_zero() and self.order is INF:
            order = INF
        if other.is_zero() and other.order is INF:
            order = INF
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                prod = self.ring.mul(c1, c2)
                if e in acc:
                    acc[e] = self.ring.add(acc[e], prod)
                else:
                    acc[e] = prod
        return HahnSeries(self.ring, acc.items(), order)

    def scale(self, coeff) -> "HahnSeries":
        return HahnSeries(self.ring, [(e, self.ring.mul(coeff, c)) for e, c in self.terms],
                          self.order)

    def shift(self, delta) -> "HahnSeries":
        delta = Frac(delta)
        return HahnSeries(self.ring, [(e + delta, c) for e, c in self.terms],
                          _add_order(self.order, delta))

    def truncate(self, order) -> "HahnSeries":
        return HahnSeries(self.ring, self.terms, _min_order(self.order, Frac(order)))

    def __pow__(self, n: int) -> "HahnSeries":
        out = HahnSeries.monomial(self.ring, self.ring.one, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, HahnSeries):
            return NotImplemented
        cut = _min_order(self.order, other.order)
        a = self.terms if cut is INF else tuple((e, c) for e, c in self.terms if e < cut)
        b = other.terms if cut is INF else tuple((e, c) for e, c in other.terms if e < cut)
        return a == b

    def __hash__(self):
        raise TypeError("HahnSeries is unhashable (truncation-aware equality)")

    def __repr__(self) -> str:
        return self.render()

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(f"[{self.ring.render(c)}]")
            else:
                parts.append(f"[{self.ring.render(c)}]*t^({e})")
        return " + ".join(parts)

    def to_json_terms(self):
        return [{"exp": str(e), "coeff": self.ring.render(c)} for e, c in self.terms]


def is_null_series(f: HahnSeries, r, precision) -> bool:
    """True iff every exponent-class sum  sum_n a_{i+n} r^n  vanishes mod p^precision.

    The coefficient ring must report p-adic valuations (ZModPN-style); r is a
    ring element of positive valuation.
    """
    ring = f.ring
    vr = ring.val(r)
    if vr is None or vr <= 0:
        raise ValueError("r must be a non-unit non-zero-divisor")
    precision = Frac(precision)
    if Frac(getattr(ring, "prec", precision)) < precision:
        raise ValueError("coefficient ring precision is insufficient")
    classes: dict = {}
    for e, c in f.terms:
        key = e - math.floor(e)
        classes.setdefault(key, []).append((e, c))
    for group in classes.values():
        base = min(e for e, _ in group)
        total = ring.zero
        for e, c in group:
            n = int(e - base)
            rp = ring.one
            for _ in range(n):
                rp = ring.mul(rp, r)
            total = ring.add(total, ring.mul(c, rp))
        v = ring.val(total)
        if v is not None and v < precision:
            return False
    return True


def divide_by_t_minus_r(f: HahnSeries, r, precision) -> HahnSeries:
    """f / (t - r) for a null series f, by the class-wise geometric-sum formula."""
    ring = f.ring
    if not is_null_series(f, r, precision):
        raise ValueError("f is not a null series at the requested precision")
    if f.is_zero():
        return HahnSeries.zero(ring, f.order)
    vr = ring.val(r)
    n_max = int(math.ceil(Frac(precision) / vr))
    out: dict = {}
    candidates = sorted({e - 1 - n for e, _ in f.terms for n in range(n_max + 1)})
    for i in candidates:
        total = ring.zero
        rp = ring.one
        for n in range(n_max + 1):
            c = f.coeff_at(i + n + 1)
            if not ring.is_zero(c):
                total = ring.add(total, ring.mul(c, rp))
            rp = ring.mul(rp, r)
        v = ring.val(total)
        if v is not None and v < precision:
            out[i] = total
    order = INF if f.order is INF else f.order - 1
    return HahnSeries(ring, out.items(), order)


def eq_mod(f: HahnSeries, g: HahnSeries, precision) -> bool:
    """Equality of truncated series with coefficients compared mod p^precision."""
    diff = f - g
    for _, c in diff.terms:
        v = diff.ring.val(c)
        if v is not None and v < precision:
            return False
    return True


def frobenius_power(f: HahnSeries, q: int) -> HahnSeries:
    """f^q for a characteristic-p coefficient field with q a power of p:
    exponents scale by q and coefficients take q-th powers (no cross terms)."""
    if not isinstance(f.ring, FqRing):
        raise TypeError("frobenius_power needs finite-field coefficients")
    p = f.ring.field.p
    qq = q
    while qq > 1:
        if qq % p:
            raise ValueError("q must be a power of the characteristic")
        qq //= p
    order = INF if f.order is INF else f.order * q
    return HahnSeries(f.ring, [(e * q, c ** q) for e, c in f.terms], order)
