"""Lubin-Tate formal group machinery at truncated degree.

The pi-model f(X) = X^q + pi X (plus) or X^q - pi X (minus) drives everything:
the group law F(X,Y) and the endomorphisms [r]_F are solved degree by degree
from their functional equations, the torsion polynomials g_n come from exact
polynomial iteration, and the logarithm is the alternating q-power series.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .tower import AtLeast, LocalElem, LocalTower, TowerSpec

Frac = Fraction


# ---------------------------------------------------------------------------
# truncated series helpers (one variable: list; two variables: dict[(i,j)])

def _ser_trim(c: list) -> list:
    return c


def ser_compose(outer: Sequence[LocalElem], inner: Sequence[LocalElem],
                tower: LocalTower, deg: int) -> list[LocalElem]:
    """outer(inner(X)) truncated at degree deg; inner has no constant term."""
    out = [tower.zero() for _ in range(deg + 1)]
    power = [tower.zero() for _ in range(deg + 1)]
    power[0] = tower.one()
    for k, c in enumerate(outer):
        if k > deg:
            break
        if k > 0:
            nxt = [tower.zero() for _ in range(deg + 1)]
            for i, a in enumerate(power):
                if i > deg or a.is_zero_at_cap():
                    continue
                for j, b in enumerate(inner):
                    if i + j > deg:
                        break
                    nxt[i + j] = nxt[i + j] + a * b
            power = nxt
        for i in range(deg + 1):
            out[i] = out[i] + c * power[i]
    return out


def biv_mul(a: dict, b: dict, tower: LocalTower, deg: int) -> dict:
    out: dict = {}
    for (i1, j1), c1 in a.items():
        if c1.is_zero_at_cap():
            continue
        for (i2, j2), c2 in b.items():
            i, j = i1 + i2, j1 + j2
            if i + j > deg:
                continue
            key = (i, j)
            prod = c1 * c2
            out[key] = out[key] + prod if key in out else prod
    return out


def biv_compose_univ(outer: Sequence[LocalElem], inner: dict,
                     tower: LocalTower, deg: int) -> dict:
    """outer(inner(X,Y)) truncated at total degree deg."""
    out: dict = {}
    power = {(0, 0): tower.one()}
    for k, c in enumerate(outer):
        if k > deg:
            break
        if k > 0:
            power = biv_mul(power, inner, tower, deg)
        if not c.is_zero_at_cap():
            for key, a in power.items():
                term = c * a
                out[key] = out[key] + term if key in out else term
    return out


def biv_substitute(series: dict, fx: Sequence[LocalElem], fy: Sequence[LocalElem],
                   tower: LocalTower, deg: int) -> dict:
    """series(f(X), g(Y)) truncated at total degree deg."""
    xmax = max((i for i, _ in series), default=0)
    ymax = max((j for _, j in series), default=0)
    xpow: list[list[LocalElem]] = [[tower.one()]]
    for _ in range(xmax):
        last = xpow[-1]
        nxt = [tower.zero() for _ in range(min(deg, len(last) + len(fx) - 2) + 1)]
        for i, a in enumerate(last):
            if a.is_zero_at_cap():
                continue
            for j, b in enumerate(fx):
                if i + j <= deg:
                    nxt[i + j] = nxt[i + j] + a * b
        xpow.append(nxt)
    ypow: list[list[LocalElem]] = [[tower.one()]]
    for _ in range(ymax):
        last = ypow[-1]
        nxt = [tower.zero() for _ in range(min(deg, len(last) + len(fy) - 2) + 1)]
        for i, a in enumerate(last):
            if a.is_zero_at_cap():
                continue
            for j, b in enumerate(fy):
                if i + j <= deg:
                    nxt[i + j] = nxt[i + j] + a * b
        ypow.append(nxt)
    out: dict = {}
    for (i, j), c in series.items():
        if c.is_zero_at_cap():
            continue
        for a, ca in enumerate(xpow[i]):
            if ca.is_zero_at_cap():
                continue
            for b, cb in enumerate(ypow[j]):
                if a + b > deg or cb.is_zero_at_cap():
                    continue
                term = c * ca * cb
                key = (a, b)
                out[key] = out[key] + term if key in out else term
    return out


class FormalGroupData:
    """A pi-model f = X^q + sign * pi X over a tower, with cached F and [r]_F."""

    def __init__(self, tower: LocalTower, q: int, degree: int, sign: int = 1,
                 f_coeffs: Sequence[LocalElem] | None = None):
        self.tower = tower
        self.q = q
        self.degree = degree
        self.sign = sign
        pi = tower.pi_K()
        if f_coeffs is None:
            coeffs = [tower.zero() for _ in range(q + 1)]
            coeffs[1] = pi if sign > 0 else -pi
            coeffs[q] = tower.one()
            f_coeffs = coeffs
        self.f = list(f_coeffs)
        self._check_model()
        self.pi = pi
        self.pi_f = self.f[1]  # the model's own uniformizer f'(0)
        self._F: dict | None = None
        self._scalars: dict = {}

    def _check_model(self) -> None:
        # f(X) = pi X + X^q mod pi X^2, for the uniformizer pi = f'(0)
        t = self.tower
        lin = self.f[1]
        v = lin.valuation()
        if isinstance(v, AtLeast) or v != 1:
            raise ValueError("linear coefficient of f is not a uniformizer")
        for k, c in enumerate(self.f):
            if k in (0, 1):
                if k == 0 and not c.is_zero_at_cap():
                    raise ValueError("f has a constant term")
                continue
            expect_unit = (k == self.q)
            vc = c.valuation()
            if expect_unit:
                residue_one = (c - t.one()).valuation()
                ok = not isinstance(residue_one, AtLeast) and residue_one >= 1
                ok = ok or isinstance(residue_one, AtLeast)
                if not ok:
                    raise ValueError("X^q coefficient of f is not 1 mod pi")
            else:
                if not isinstance(vc, AtLeast) and vc < 1:
                    raise ValueError(f"degree-{k} coefficient of f is a unit")

    # ------------------------------------------------------------------

    def _solve_division(self, elem: LocalElem, k: int) -> LocalElem:
        """Divide by pi_f^k - pi_f (pi_f = f'(0)), checking the valuation first."""
        den = self.pi_f ** k - self.pi_f
        v = den.valuation()
        if isinstance(v, AtLeast) or v != 1:
            raise ValueError("pi^k - pi denominator has unexpected valuation")
        return elem / den

    def group_law(self) -> dict:
        """F(X,Y) with F = X + Y mod deg 2 and F(f(X), f(Y)) = f(F(X,Y))."""
        if self._F is not None:
            return self._F
        t = self.tower
        D = self.degree
        F = {(1, 0): t.one(), (0, 1): t.one()}
        for k in range(2, D + 1):
            lhs = biv_substitute(F, self.f, self.f, t, k)
            rhs = biv_compose_univ(self.f, F, t, k)
            delta = {}
            for key in set(lhs) | set(rhs):
                if sum(key) != k:
                    continue
                d = rhs.get(key, t.zero()) - lhs.get(key, t.zero())
                if not d.is_zero_at_cap():
                    delta[key] = d
            for key, d in delta.items():
                F[key] = self._solve_division(d, k)
        self._F = F
        return F

    def scalar(self, r) -> list[LocalElem]:
        """[r]_F with linear term r, commuting with f."""
        t = self.tower
        if isinstance(r, int):
            key = r
            relem = t.from_int(r)
        else:
            key = None
            relem = r
        if key is not None and key in self._scalars:
            return self._scalars[key]
        D = self.degree
        ser = [t.zero(), relem]
        for k in range(2, D + 1):
            ser.append(t.zero())
            lhs = ser_compose(ser, self.f, t, k)   # [r](f(X))
            rhs = ser_compose(self.f, ser, t, k)   # f([r](X))
            d = rhs[k] - lhs[k]
            if not d.is_zero_at_cap():
                ser[k] = self._solve_division(d, k)
        if key is not None:
            self._scalars[key] = ser
        return ser

    def check_axioms(self) -> None:
        t = self.tower
        F = self.group_law()
        for (i, j), c in F.items():
            if j == 0 and i != 1 and not c.is_zero_at_cap():
                raise AssertionError("F(X, 0) != X")
            if i == 0 and j != 1 and not c.is_zero_at_cap():
                raise AssertionError("F(0, Y) != Y")
            sym = F.get((j, i), t.zero())
            if not (c - sym).is_zero_at_cap():
                raise AssertionError("F is not symmetric")


def lt_iterate(q: int, pi: int, n: int, sign: int = 1) -> list[int]:
    """Exact integer coefficients of f^[n] for f = X^q + sign*pi*X over Z."""
    f = [0] * (q + 1)
    f[1] = sign * pi
    f[q] = 1
    out = [0, 1]
    for _ in range(n):
        # out = f(out)
        acc = [0]
        power = [1]
        for k, c in enumerate(f):
            if k > 0:
                new = [0] * (len(power) + len(out) - 1)
                for i, a in enumerate(power):
                    if a:
                        for j, b in enumerate(out):
                            if b:
                                new[i + j] += a * b
                power = new
            if c:
                while len(acc) < len(power):
                    acc.append(0)
                for i, a in enumerate(power):
                    acc[i] += c * a
        out = acc
    return out


def lt_torsion_poly(q: int, pi: int, n: int, sign: int = 1) -> list[int]:
    """g_n = (f^[n-1])^(q-1) + sign*pi: the primitive pi^n-torsion polynomial."""
    base = lt_iterate(q, pi, n - 1, sign)
    out = [1]
    for _ in range(q - 1):
        new = [0] * (len(out) + len(base) - 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(base):
                    if b:
                        new[i + j] += a * b
        out = new
    out[0] += sign * pi
    return out


def poly_mul_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def lt_log(q: int, p: int, degree: int) -> list[Frac]:
    """H(x) = x - x^q/pi + x^(q^2)/pi^2 - ... truncated at the given degree (pi = p)."""
    coeffs = [Frac(0)] * (degree + 1)
    power, j, sgn = 1, 0, 1
    while power <= degree:
        coeffs[power] = Frac(sgn, p ** j)
        power *= q
        j += 1
        sgn = -sgn
    return coeffs
