"""Truncated Hahn-Witt series fields HW_(K,pi)(F_{q^m}).

An element is a canonical Teichmuller-digit expansion sum [a_i] pi^i with
exponents in (1/d)Z below a precision cap N, mirrored internally by an element
of the finite tower L = K + Unramified(m) + Eisenstein(X^d - pi).  Arithmetic
is delegated to the tower; digit extraction recovers the canonical form.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .fq import FqElem, FqField
from .tower import AtLeast, LocalElem, LocalTower, TowerSpec

Frac = Fraction


class BudgetError(ValueError):
    """Denominator or precision budget exhausted."""


class HWContext:
    """Working context for HW_(K,pi)(F_{q^m}) at denominator d and cap N."""

    def __init__(self, k_spec: TowerSpec, m: int, denom: int, prec,
                 base_margin: int = 8):
        if denom < 1:
            raise ValueError("denominator budget must be >= 1")
        prec = Frac(prec)
        k_stages = list(k_spec.stages)
        e_K = 1
        for st in k_stages:
            if st[0] != "unramified":
                e_K *= st[1] if st[0] == "eisenstein_pure" else max(d for _, d in st[1])
        # absolute base precision: enough p-adic digits to hold pi^N at denominator d
        import math
        base_prec = int(math.ceil(prec / e_K)) + base_margin
        if k_spec.base[0] == "mixed":
            base = ("mixed", k_spec.base[1], base_prec)
        else:
            base = k_spec.base[:-1] + (base_prec,)
        stages = list(k_stages)
        k_index = len(stages)
        if m > 1:
            stages.append(("unramified", m))
        if denom > 1:
            stages.append(("eisenstein_pure", denom))
        self.k_spec = TowerSpec(k_spec.base, tuple(k_stages), k_index=None)
        self.tower = LocalTower(TowerSpec(base, tuple(stages), k_index=k_index))
        self.m = m
        self.d = denom
        self.prec = prec
        self.q = self.tower.q_K
        self.f_K = self.tower.f_K
        self.res_field = self.tower.res_field
        self._pi_frac_cache: dict[Frac, LocalElem] = {}
        self._rescale_cache: dict[int, "HWContext"] = {}

    # -- pi powers -------------------------------------------------------

    def pi_power(self, e) -> LocalElem:
        """pi^e for e in (1/d)Z, e >= 0."""
        e = Frac(e)
        k = e * self.d
        if k.denominator != 1:
            raise BudgetError(f"exponent {e} needs a denominator beyond {self.d}")
        if k < 0:
            raise ValueError("negative pi power has no integral representative")
        if e in self._pi_frac_cache:
            return self._pi_frac_cache[e]
        if self.d > 1:
            out = self.tower.gen() ** int(k)
        else:
            out = self.tower.pi_K() ** int(k)
        self._pi_frac_cache[e] = out
        return out

    def residue_at(self, x: LocalElem, e) -> FqElem:
        """Residue of x / pi^e (e = v(x) in v(pi_K) = 1 units)."""
        return self.tower.residue(x / self.pi_power(e))

    # -- element constructors ---------------------------------------------

    def zero(self) -> "HWElem":
        return HWElem(self, (), self.tower.zero(), shift=Frac(0))

    def one(self) -> "HWElem":
        return self.from_digits([(Frac(0), self.res_field.one)])

    def from_digits(self, digits) -> "HWElem":
        mirror = self.tower.zero()
        cleaned = []
        for e, a in sorted(digits, key=lambda t: Frac(t[0])):
            e = Frac(e)
            if a.is_zero() or e >= self.prec:
                continue
            if e < 0:
                raise ValueError("negative exponents require an explicit shift")
            cleaned.append((e, a))
            mirror = mirror + self.tower.teichmuller(a) * self.pi_power(e)
        return HWElem(self, tuple(cleaned), mirror, shift=Frac(0))

    def from_int(self, n: int) -> "HWElem":
        return self.normalize(self.tower.from_int(n))

    def pi(self, e=1) -> "HWElem":
        return self.from_digits([(Frac(e), self.res_field.one)])

    def normalize(self, mirror: LocalElem, shift=Frac(0)) -> "HWElem":
        """Canonical digit extraction: peel leading Teichmuller terms."""
        digits = []
        x = mirror
        cap = self.cap_of(mirror)
        while True:
            v = x.valuation()
            if isinstance(v, AtLeast) or v >= min(cap, self.prec + shift):
                break
            r = self.residue_at(x, v)
            digits.append((v - shift, r))
            x = x - self.tower.teichmuller(r) * self.pi_power(v)
        if shift > 0 and (not digits or digits[0][0] >= 0):
            # integral element: re-anchor at shift 0 so the cap is not eroded
            eff_cap_abs = min(self.tower.max_cap,
                              mirror.cap - shift / self.tower.e_K)
            rebuilt = self.tower.zero()
            for e, a in digits:
                rebuilt = rebuilt + self.tower.teichmuller(a) * self.pi_power(e)
            rebuilt = LocalElem(self.tower, rebuilt.data, eff_cap_abs)
            return HWElem(self, tuple(digits), rebuilt, shift=Frac(0))
        return HWElem(self, tuple(digits), mirror, shift=shift)

    def cap_of(self, mirror: LocalElem) -> Frac:
        return mirror.cap * self.tower.e_K

    def frobenius_digit(self, a: FqElem) -> FqElem:
        return a.frobenius(1, self.f_K)

    def describe(self) -> dict:
        return {"q": self.q, "m": self.m, "d": self.d, "prec": str(self.prec)}


class HWElem:
    """Canonical expansion plus its tower mirror; element = mirror / pi^shift."""

    __slots__ = ("ctx", "digits", "mirror", "shift")

    def __init__(self, ctx: HWContext, digits, mirror: LocalElem, shift=Frac(0)):
        self.ctx = ctx
        self.digits = tuple(digits)
        self.mirror = mirror
        self.shift = Frac(shift)

    # -- basic queries -----------------------------------------------------

    def is_zero_at_cap(self) -> bool:
        return not self.digits

    def valuation(self) -> Union[Frac, AtLeast]:
        if self.digits:
            return self.digits[0][0]
        return AtLeast(min(self.ctx.cap_of(self.mirror) - self.shift, self.ctx.prec))

    def digit_at(self, e) -> FqElem:
        e = Frac(e)
        for ee, a in self.digits:
            if ee == e:
                return a
        return self.ctx.res_field.zero

    def support(self):
        return tuple(e for e, _ in self.digits)

    # -- arithmetic ---------------------------------------------------------

    def _align(self, other: "HWElem"):
        if self.ctx is not other.ctx:
            raise ValueError("context mismatch")
        s = max(self.shift, other.shift)
        a = self.mirror * self.ctx.pi_power(s - self.shift)
        b = other.mirror * other.ctx.pi_power(s - other.shift)
        return a, b, s

    def __add__(self, other: "HWElem") -> "HWElem":
        a, b, s = self._align(other)
        return self.ctx.normalize(a + b, s)

    def __sub__(self, other: "HWElem") -> "HWElem":
        a, b, s = self._align(other)
        return self.ctx.normalize(a - b, s)

    def __neg__(self) -> "HWElem":
        return self.ctx.normalize(-self.mirror, self.shift)

    def __mul__(self, other: "HWElem") -> "HWElem":
        if self.ctx is not other.ctx:
            raise ValueError("context mismatch")
        return self.ctx.normalize(self.mirror * other.mirror, self.shift + other.shift)

    def __pow__(self, n: int) -> "HWElem":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ctx.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "HWElem":
        v = self.valuation()
        if isinstance(v, AtLeast):
            raise ZeroDivisionError("inverting an element indistinguishable from 0 at cap")
        ctx = self.ctx
        # x = pi^v * u with u a unit; x^-1 = u^-1 * pi^-v, held as mirror / pi^s
        unit = self.mirror / ctx.pi_power(v + self.shift)
        s = max(v, Frac(0))
        mirror = unit.inverse() * ctx.pi_power(s - v)
        return ctx.normalize(mirror, s)

    def __truediv__(self, other: "HWElem") -> "HWElem":
        return self * other.inverse()

    # -- structure maps ------------------------------------------------------

    def frobenius(self) -> "HWElem":
        """Digit-wise a -> a^q."""
        ctx = self.ctx
        mirror = ctx.tower.zero()
        digits = []
        for e, a in self.digits:
            fa = ctx.frobenius_digit(a)
            digits.append((e, fa))
            mirror = mirror + ctx.tower.teichmuller(fa) * ctx.pi_power(e + self.shift)
        return HWElem(ctx, digits, mirror, self.shift)

    def frobenius_via_tower(self) -> "HWElem":
        return self.ctx.normalize(self.ctx.tower.frob(self.mirror), self.shift)

    def in_subfield(self, m_sub: int) -> bool:
        if self.ctx.m % m_sub != 0:
            raise ValueError("m_sub must divide m")
        deg = self.ctx.f_K * m_sub
        return all(a.in_subfield(deg) for _, a in self.digits)

    def render(self) -> str:
        if not self.digits:
            return "0"
        return " + ".join(f"[{a.render()}]*pi^({e})" for e, a in self.digits)

    def to_json(self) -> dict:
        doc = self.ctx.describe()
        doc["digits"] = [{"exp": str(e), "coeff": a.render()} for e, a in self.digits]
        return doc

    def __repr__(self) -> str:
        return self.render()

    def __eq__(self, other) -> bool:
        if not isinstance(other, HWElem):
            return NotImplemented
        return (self - other).is_zero_at_cap()

    def __hash__(self):
        raise TypeError("HWElem is unhashable")


def hw_rescale(x: HWElem, n: int) -> HWElem:
    """The exponent-scaling isomorphism into HW over K(pi^(1/n)) with pi' = pi^(1/n).

    Digits are preserved; an exponent e becomes n*e.  The source context must
    have denominator divisible by n.
    """
    ctx = x.ctx
    if ctx.d % n != 0:
        raise ValueError("source denominator budget is not divisible by n")
    if x.shift:
        raise ValueError("rescale expects an integral element")
    target = rescale_context(ctx, n)
    return target.from_digits([(e * n, a) for e, a in x.digits])


def rescale_context(ctx: HWContext, n: int) -> HWContext:
    if n not in ctx._rescale_cache:
        spec = ctx.k_spec
        new_spec = TowerSpec(spec.base, tuple(list(spec.stages) + [("eisenstein_pure", n)]))
        ctx._rescale_cache[n] = HWContext(new_spec, ctx.m, ctx.d // n, ctx.prec * n)
    return ctx._rescale_cache[n]


# ---------------------------------------------------------------------------
# Newton polygons

def lower_hull(points: Sequence[tuple]) -> list[tuple]:
    """Lower convex hull vertices of (i, v) points, ascending in i."""
    pts = sorted(points)
    hull: list[tuple] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(coeffs: Sequence[HWElem]) -> list[tuple[Frac, int]]:
    """Root valuations with multiplicities from the lower hull of (i, v(c_i)).

    Returns [(valuation, multiplicity), ...] ascending in valuation, covering
    the roots of positive and zero valuation (slopes <= 0 of the hull).
    """
    pts = []
    caps = []
    for i, c in enumerate(coeffs):
        v = c.valuation()
        if isinstance(v, AtLeast):
            caps.append((i, v.bound))
            continue
        pts.append((i, v))
    if not pts or pts[-1][0] != len(coeffs) - 1:
        raise ValueError("leading coefficient is zero at its precision cap")
    hull = lower_hull(pts)
    # a skipped (zero-at-cap) coefficient must be certifiably above the hull
    for i, bound in caps:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= i <= x2:
                line = y1 + (y2 - y1) * Frac(i - x1, x2 - x1)
                if bound <= line:
                    raise ValueError(
                        f"coefficient {i} valuation is below cap; polygon uncertifiable")
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Frac(y2 - y1, x2 - x1)
        if slope <= 0:
            out.append((-slope, x2 - x1))
    out.sort(key=lambda t: t[0])
    return out


# ---------------------------------------------------------------------------
# digit-DFS root finding

@dataclass
class RootResult:
    elem: HWElem
    digits: tuple
    vpoly: Union[Frac, AtLeast]
    vdpoly: Optional[Frac]
    certified: bool

    def agreement_bound(self) -> Optional[Frac]:
        """Certified v(y - root) for the nearest true root (Newton regime only)."""
        if self.vdpoly is None:
            return None
        v = self.vpoly.bound if isinstance(self.vpoly, AtLeast) else self.vpoly
        return v - self.vdpoly

    def sort_key(self):
        return tuple((e, a.lex_index()) for e, a in self.digits)


def _taylor_shift(coeffs: list[HWElem], y: HWElem) -> list[HWElem]:
    """Divided derivatives d_j = sum_k C(k,j) c_k y^(k-j)."""
    import math
    n = len(coeffs) - 1
    ypow = [y.ctx.one()]
    for _ in range(n):
        ypow.append(ypow[-1] * y)
    out = []
    for j in range(n + 1):
        acc = y.ctx.zero()
        for k in range(j, n + 1):
            c = math.comb(k, j)
            if c == 0:
                continue
            term = coeffs[k] * ypow[k - j]
            if c != 1:
                term = term * _int_elem(y.ctx, c)
            acc = acc + term
        out.append(acc)
    return out


def _raw_val(x: HWElem):
    """Valuation with the tower cap (not the context cap) as the zero bound."""
    v = x.mirror.valuation()
    if isinstance(v, AtLeast):
        return AtLeast(v.bound - x.shift)
    return v - x.shift


def _int_elem(ctx: HWContext, n: int) -> HWElem:
    return ctx.from_int(n)


def find_roots(coeffs: Sequence[HWElem], max_nodes: int = 20000) -> list[RootResult]:
    """All roots (and wall-limited approximations) of a polynomial over the context.

    Digit DFS over Teichmuller digits guided by Newton polygons of shifted
    polynomials, with a switch to Newton iteration once v(P(y)) > 2 v(P'(y)).
    Deterministic: branches explored in lex order of the digit coefficients.
    """
    coeffs = list(coeffs)
    ctx = coeffs[0].ctx
    field = ctx.res_field
    results: list[RootResult] = []
    nodes = 0

    def residue_poly(ds, face):
        (x1, y1), (x2, y2) = face
        slope = Frac(y2 - y1, x2 - x1)
        rho = {}
        for j in range(x1, x2 + 1):
            v = ds[j].valuation()
            if isinstance(v, AtLeast):
                continue
            line = y1 + slope * (j - x1)
            if v == line:
                rho[j] = ds[j].digits[0][1]  # leading Teichmuller digit
        return rho

    def solve_face(ds, face, s):
        """Nonzero residue roots of the face equation at slope -s."""
        rho = residue_poly(ds, face)
        roots = []
        for c in field.elements():
            if c.is_zero():
                continue
            total = field.zero
            for j, r in rho.items():
                total = total + r * (c ** j)
            if total.is_zero():
                roots.append(c)
        return roots

    def newton_polish(y: HWElem) -> HWElem:
        for _ in range(ctx.tower.base_prec.bit_length() + 6):
            ds = _taylor_shift(coeffs, y)
            v0, v1 = _raw_val(ds[0]), _raw_val(ds[1])
            if isinstance(v0, AtLeast):
                return y
            if isinstance(v1, AtLeast) or not v0 > 2 * v1:
                return y
            y = y - ds[0] / ds[1]
        return y

    def dfs(digits: list, y: HWElem, last_exp: Optional[Frac]):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetError("root search exceeded the node budget")
        ds = _taylor_shift(coeffs, y)
        v0 = _raw_val(ds[0])
        v1 = _raw_val(ds[1]) if len(ds) > 1 else AtLeast(ctx.prec)
        recorded = False
        consumed = None  # slope taken over by a Newton polish
        if isinstance(v0, AtLeast):
            results.append(RootResult(y, tuple(digits), v0,
                                      None if isinstance(v1, AtLeast) else v1, True))
            recorded = True
        elif not isinstance(v1, AtLeast) and v0 > 2 * v1:
            y2 = newton_polish(y)
            ds2 = _taylor_shift(coeffs, y2)
            v0b, v1b = _raw_val(ds2[0]), _raw_val(ds2[1])
            cert = isinstance(v0b, AtLeast) or v0b >= ctx.prec
            results.append(RootResult(
                y2, tuple(y2.digits), v0b,
                None if isinstance(v1b, AtLeast) else v1b, cert))
            recorded = True
            consumed = v0 - v1
        pts = []
        for j, dj in enumerate(ds):
            vj = _raw_val(dj)
            if not isinstance(vj, AtLeast):
                pts.append((j, vj))
        hull = lower_hull(pts) if len(pts) >= 2 else []
        expanded = False
        for face in zip(hull, hull[1:]):
            (x1, y1v), (x2, y2v) = face
            slope = Frac(y2v - y1v, x2 - x1)
            s = -slope
            if last_exp is None:
                if s < 0:
                    continue  # negative-valuation roots are out of scope here
            elif s <= last_exp:
                continue
            if s >= ctx.prec:
                continue
            if consumed is not None and s >= consumed:
                continue
            if (s * ctx.d).denominator != 1:
                continue  # representability wall at this branch
            for c in sorted(solve_face(ds, face, s), key=lambda a: a.lex_index()):
                child = y + ctx.from_digits([(s, c)])
                dfs(digits + [(s, c)], child, s)
                expanded = True
        if not expanded and not recorded:
            cert = not isinstance(v0, AtLeast) and v0 >= ctx.prec
            results.append(RootResult(y, tuple(digits), v0,
                                      None if isinstance(v1, AtLeast) else v1, cert))

    dfs([], ctx.zero(), None)
    results.sort(key=lambda r: r.sort_key())
    exact = [r for r in results if r.certified]
    for i in range(len(exact)):
        for j in range(i + 1, len(exact)):
            if exact[i].elem == exact[j].elem:
                raise ValueError("multiple root detected at cap: polynomial not separable")
    return results
