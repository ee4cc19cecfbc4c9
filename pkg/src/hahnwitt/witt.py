"""pi-typical Witt vectors of finite length.

Ghost coordinates are w_n = sum_{i<=n} pi^i x_i^(q^(n-i)).  Three cooperating
realizations live here:

* ghost / ghost_inverse over exact torsion-free rings (ints, Fractions),
* universal addition/multiplication polynomials, computed symbolically over
  Z[pi, p/pi] with an integrality assertion (the independent oracle),
* digit arithmetic over F_{q^m} through the unramified-tower bijection.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fq import FqElem, FqField
from .tower import LocalTower, TowerSpec

Frac = Fraction


def _vp(c: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    v = 0
    num, den = c.numerator, c.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def ghost(coords: Sequence, q: int, pi) -> tuple:
    """Ghost vector (w_0, ..., w_{n-1}) by direct evaluation."""
    out = []
    for n in range(len(coords)):
        total = 0
        for i in range(n + 1):
            total = total + pi ** i * coords[i] ** (q ** (n - i))
        out.append(total)
    return tuple(out)


def ghost_inverse(ghosts: Sequence, q: int, pi) -> tuple:
    """Coordinates from ghost components; divisions must be exact."""
    coords = []
    for n, g in enumerate(ghosts):
        acc = g
        for i in range(n):
            acc = acc - pi ** i * coords[i] ** (q ** (n - i))
        den = pi ** n
        if isinstance(acc, int) and isinstance(den, int):
            quo, rem = divmod(acc, den)
            if rem:
                raise ValueError(f"ghost component {n} fails the divisibility condition")
            coords.append(quo)
        else:
            coords.append(acc / den)
    return tuple(coords)


# ---------------------------------------------------------------------------
# sparse multivariate polynomials over Q in x_0.., y_0.., pi, theta = p/pi

class MPoly:
    """Polynomial in x_0..x_{n-1}, y_0..y_{n-1}, pi and theta = p/pi.

    Monomials never contain pi and theta simultaneously (theta*pi = p is
    rewritten away), so integrality over Z[pi, p/pi] is just coefficient
    integrality.
    """

    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, p: int, terms=None):
        self.n = n
        self.p = p
        self.terms: dict[tuple, Frac] = {}
        if terms:
            for mono, c in terms.items() if isinstance(terms, dict) else terms:
                c = Frac(c)
                if c:
                    self.terms[mono] = self.terms.get(mono, Frac(0)) + c
            self.terms = {m: c for m, c in self.terms.items() if c}

    # monomial layout: (x_0..x_{n-1}, y_0..y_{n-1}, pi_exp, theta_exp)

    def _mono_dim(self) -> int:
        return 2 * self.n + 2

    @staticmethod
    def const(n: int, p: int, c) -> "MPoly":
        return MPoly(n, p, {tuple([0] * (2 * n + 2)): Frac(c)})

    @staticmethod
    def var(n: int, p: int, kind: str, i: int = 0) -> "MPoly":
        mono = [0] * (2 * n + 2)
        if kind == "x":
            mono[i] = 1
        elif kind == "y":
            mono[n + i] = 1
        elif kind == "pi":
            mono[2 * n] = 1
        else:
            raise ValueError(kind)
        return MPoly(n, p, {tuple(mono): Frac(1)})

    def __add__(self, other: "MPoly") -> "MPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Frac(0)) + c
        return MPoly(self.n, self.p, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.n, self.p, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        out: dict[tuple, Frac] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                mono = self._normalize_mono(mono, out, c1 * c2)
        return MPoly(self.n, self.p, out)

    def _normalize_mono(self, mono, out, coeff):
        # rewrite theta^a * pi^b -> p^min(a, b) * leftover
        k = 2 * self.n
        a_pi, a_th = mono[k], mono[k + 1]
        m = min(a_pi, a_th)
        if m:
            coeff = coeff * self.p ** m
            mono = mono[:k] + (a_pi - m, a_th - m)
        out[mono] = out.get(mono, Frac(0)) + coeff
        return mono

    def __pow__(self, e: int) -> "MPoly":
        out = MPoly.const(self.n, self.p, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def div_pi_exact(self) -> "MPoly":
        """Divide by pi, turning pi-free monomials into theta-monomials via 1/pi = theta/p."""
        k = 2 * self.n
        out: dict[tuple, Frac] = {}
        for mono, c in self.terms.items():
            if mono[k] >= 1:
                m2 = mono[:k] + (mono[k] - 1, mono[k + 1])
                out[m2] = out.get(m2, Frac(0)) + c
            else:
                m2 = mono[:k] + (0, mono[k + 1] + 1)
                out[m2] = out.get(m2, Frac(0)) + c / self.p
        return MPoly(self.n, self.p, out)

    def _xy_groups(self) -> dict:
        """Coefficients grouped by the x-y part: {xy_mono: {(pi_exp, theta_exp): c}}."""
        k = 2 * self.n
        groups: dict[tuple, dict] = {}
        for mono, c in self.terms.items():
            groups.setdefault(mono[:k], {})[(mono[k], mono[k + 1])] = c
        return groups

    def assert_integral(self) -> None:
        """Check that every coefficient lies in O_K for every local (K, pi).

        Criteria: p-power denominators only; exact p-integrality after the
        pi = p collapse (theta = 1), sampled over a few unit twists pi = u*p;
        and termwise valuation bounds covering every ramification e >= 2
        (theta-side terms at the worst case e = 2, pi-side terms at e = inf).
        """
        p = self.p
        for xy, parts in self._xy_groups().items():
            collapse = {}
            for (a_pi, a_th), c in parts.items():
                den = c.denominator
                while den % p == 0:
                    den //= p
                if den != 1:
                    raise AssertionError("non-p-power denominator in a universal polynomial")
                if a_pi > 0:
                    if _vp(c, p) < 0:
                        raise AssertionError("pi-side coefficient not p-integral")
                else:
                    if _vp(c, p) + Frac(a_th, 2) < 0:
                        raise AssertionError("theta-side coefficient fails the e >= 2 bound")
                collapse[(a_pi, a_th)] = c
            for u in (1, 1 + p, 2 * p - 1):
                total = Frac(0)
                for (a_pi, a_th), c in collapse.items():
                    total += c * Frac(u * p) ** a_pi * (Frac(1, u)) ** a_th
                if total and _vp(total, p) < 0:
                    raise AssertionError("coefficient not integral at a pi = u*p specialization")

    def evaluate_field(self, xs: Sequence[FqElem], ys: Sequence[FqElem], field: FqField) -> FqElem:
        """Evaluate mod p with pi = p: pi-monomials vanish, theta = p/pi = 1."""
        k = 2 * self.n
        p = field.p
        total = field.zero
        for xy, parts in self._xy_groups().items():
            c = Frac(0)
            for (a_pi, a_th), coeff in parts.items():
                if a_pi >= 1:
                    continue  # pi = p = 0 in the residue field
                c += coeff
            if not c:
                continue
            if _vp(c, p) < 0:
                raise ValueError("coefficient with negative p-valuation at pi = p")
            num = c.numerator % p
            den = c.denominator % p
            term = field.elem([num * pow(den, -1, p)])
            for i in range(self.n):
                if xy[i]:
                    term = term * xs[i] ** xy[i]
                if xy[self.n + i]:
                    term = term * ys[i] ** xy[self.n + i]
            total = total + term
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        names = [f"x{i}" for i in range(self.n)] + [f"y{i}" for i in range(self.n)] + ["pi", "p/pi"]

        def keyfun(item):
            mono, _ = item
            return (-sum(mono), tuple(-e for e in mono))

        parts = []
        for mono, c in sorted(self.terms.items(), key=keyfun):
            factors = []
            for e, name in zip(mono, names):
                if e == 1:
                    factors.append(name if "/" not in name else f"({name})")
                elif e > 1:
                    factors.append(f"{name}^{e}" if "/" not in name else f"({name})^{e}")
            body = "*".join(factors) if factors else "1"
            if c == 1 and factors:
                parts.append(body)
            elif c == -1 and factors:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}" if factors else str(c))
        text = " + ".join(parts).replace("+ -", "- ")
        return text


def witt_universal_polys(n: int, op: str, q: int, p: int) -> list[MPoly]:
    """Universal sum/product polynomials S_0..S_{n-1} (or P_0..P_{n-1}).

    Computed by inverting the ghost map symbolically over Z[pi, p/pi];
    non-integral coefficients raise, they are never a legitimate outcome.
    """
    if n > 4:
        raise ValueError("universal polynomials supported for n <= 4")
    if op not in ("add", "mul"):
        raise ValueError("op must be 'add' or 'mul'")
    pi = MPoly.var(n, p, "pi")
    ghosts = []
    for m in range(n):
        wx = MPoly.const(n, p, 0)
        wy = MPoly.const(n, p, 0)
        for i in range(m + 1):
            wx = wx + pi ** i * MPoly.var(n, p, "x", i) ** (q ** (m - i))
            wy = wy + pi ** i * MPoly.var(n, p, "y", i) ** (q ** (m - i))
        ghosts.append(wx + wy if op == "add" else wx * wy)
    polys: list[MPoly] = []
    for m in range(n):
        acc = ghosts[m]
        for i in range(m):
            acc = acc - pi ** i * polys[i] ** (q ** (m - i))
        for _ in range(m):
            acc = acc.div_pi_exact()
        acc.assert_integral()
        polys.append(acc)
    return polys


# ---------------------------------------------------------------------------
# digit arithmetic over F_{q^m} through the tower W_(K,pi)(F_{q^m}) = O_{K_m}

@dataclass(frozen=True)
class WittContext:
    """The theory (q = p^f, pi = p) acting on coordinates in F_{q^m}."""

    p: int
    f: int
    m: int
    prec: int = 24

    @property
    def q(self) -> int:
        return self.p ** self.f

    def field(self) -> FqField:
        return FqField.make(self.p, self.f * self.m)

    def build_tower(self) -> LocalTower:
        stages = []
        if self.f > 1:
            stages.append(("unramified", self.f))
        k_index = len(stages)
        if self.m > 1:
            stages.append(("unramified", self.m))
        return LocalTower(TowerSpec.mixed(self.p, self.prec, stages, k_index=k_index))


class WittVec:
    """Finite-length Witt vector with F_{q^m} coordinates."""

    __slots__ = ("ctx", "coords", "_tower")

    def __init__(self, ctx: WittContext, coords: Sequence[FqElem], tower=None):
        self.ctx = ctx
        self.coords = tuple(coords)
        self._tower = tower

    @staticmethod
    def zero(ctx: WittContext, n: int, tower=None) -> "WittVec":
        fld = ctx.field()
        return WittVec(ctx, [fld.zero] * n, tower)

    def to_tower_elem(self, tower: LocalTower):
        """sum_i [x_i^(q^-i)] pi^i: the standard coordinates-to-digits bijection."""
        ctx = self.ctx
        total = tower.zero()
        pi = tower.from_int(ctx.p)
        pi_pow = tower.one()
        for i, x in enumerate(self.coords):
            if not x.is_zero():
                twist = x.frobenius((-i) % max(ctx.m, 1), ctx.f) if ctx.m > 1 else x
                total = total + tower.teichmuller(twist) * pi_pow
            pi_pow = pi_pow * pi
        return total

    @staticmethod
    def from_tower_elem(ctx: WittContext, tower: LocalTower, elem, n: int) -> "WittVec":
        fld = ctx.field()
        coords = []
        x = elem
        p_elem = tower.from_int(ctx.p)
        for i in range(n):
            r = tower.residue(x)
            digit = r.frobenius(i % max(ctx.m, 1), ctx.f) if ctx.m > 1 else r
            coords.append(digit)
            x = (x - tower.teichmuller(r)) / p_elem
        return WittVec(ctx, coords)

    def _binop(self, other: "WittVec", op: str) -> "WittVec":
        if self.ctx != other.ctx or len(self.coords) != len(other.coords):
            raise ValueError("length or coefficient-field mismatch")
        tower = self._tower or other._tower or self.ctx.build_tower()
        a = self.to_tower_elem(tower)
        b = other.to_tower_elem(tower)
        c = a + b if op == "add" else a * b
        out = WittVec.from_tower_elem(self.ctx, tower, c, len(self.coords))
        return WittVec(self.ctx, out.coords, tower)

    def __add__(self, other: "WittVec") -> "WittVec":
        return self._binop(other, "add")

    def __mul__(self, other: "WittVec") -> "WittVec":
        return self._binop(other, "mul")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WittVec)
            and self.ctx == other.ctx
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.ctx, self.coords))

    def __repr__(self) -> str:
        return "(" + ", ".join(c.render() for c in self.coords) + ")"


def witt_apply_universal(ctx: WittContext, op: str, a: WittVec, b: WittVec) -> WittVec:
    """Evaluate the universal polynomials on coordinates; the symbolic oracle."""
    n = len(a.coords)
    polys = witt_universal_polys(n, op, ctx.q, ctx.p)
    fld = ctx.field()
    coords = [poly.evaluate_field(a.coords, b.coords, fld) for poly in polys]
    return WittVec(ctx, coords)
