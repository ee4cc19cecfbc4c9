"""Arithmetic in staged extensions of local rings, modulo a precision cap.

A tower starts from Z_p mod p^N (mixed characteristic) or F_q[[t]] mod t^N
(equal characteristic) and stacks unramified and Eisenstein stages.  Elements
are nested dense coefficient vectors, reduced at every stage.  Valuations are
exact Fractions in absolute units (v(p) = 1, resp. v(t) = 1); the designated
K-level rescales them so the K-uniformizer has valuation 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .fq import FqElem, FqField

Frac = Fraction


@dataclass(frozen=True)
class AtLeast:
    """Valuation lower bound for an element indistinguishable from 0 at its cap."""

    bound: Frac

    def __repr__(self) -> str:
        return f"at-least({self.bound})"


@dataclass(frozen=True)
class TowerSpec:
    """Base descriptor plus ordered stages.

    base: ("mixed", p, prec) or ("equal", p, f, prec)
    stages: tuple of ("unramified", m) | ("eisenstein", coeff_pairs) |
            ("eisenstein_pure", d)   [X^d - pi at the current uniformizer]
    k_index: how many leading stages constitute the designated field K
             (None means the full tower).
    """

    base: tuple
    stages: tuple = ()
    k_index: Optional[int] = None

    @staticmethod
    def mixed(p: int, prec: int, stages=(), k_index=None) -> "TowerSpec":
        return TowerSpec(("mixed", p, prec), tuple(stages), k_index)

    @staticmethod
    def equal(p: int, f: int, prec: int, stages=(), k_index=None) -> "TowerSpec":
        return TowerSpec(("equal", p, f, prec), tuple(stages), k_index)

    def to_json(self) -> str:
        if self.base[0] == "mixed":
            base = {"p": self.base[1], "prec": self.base[2]}
        else:
            base = {"q": self.base[1] ** self.base[2], "prec": self.base[3]}
        stages = []
        for st in self.stages:
            if st[0] == "unramified":
                stages.append({"unramified": st[1]})
            elif st[0] == "eisenstein_pure":
                stages.append({"eisenstein_pure": st[1]})
            else:
                stages.append({"eisenstein": [[str(c), d] for c, d in st[1]]})
        doc = {"base": base, "stages": stages}
        if self.k_index is not None:
            doc["k_index"] = self.k_index
        return json.dumps(doc, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "TowerSpec":
        doc = json.loads(text)
        b = doc["base"]
        if "p" in b:
            base = ("mixed", b["p"], b.get("prec", 32))
        else:
            q = b["q"]
            p = 2
            while q % p != 0:
                p += 1
            f = 0
            qq = q
            while qq > 1:
                qq //= p
                f += 1
            base = ("equal", p, f, b.get("prec", 32))
        stages = []
        for st in doc.get("stages", []):
            if "unramified" in st:
                stages.append(("unramified", st["unramified"]))
            elif "eisenstein_pure" in st:
                stages.append(("eisenstein_pure", st["eisenstein_pure"]))
            else:
                pairs = tuple((int(c), d) for c, d in st["eisenstein"])
                stages.append(("eisenstein", pairs))
        return TowerSpec(base, tuple(stages), doc.get("k_index"))


class _Stage:
    __slots__ = (
        "kind", "deg", "poly", "gen_val", "res_field", "gen_residue",
        "unembed_matrix", "frob_images",
    )

    def __init__(self, kind, deg, poly, gen_val, res_field, gen_residue):
        self.kind = kind
        self.deg = deg
        self.poly = poly  # monic: tuple of deg+1 sub-level coefficient datas
        self.gen_val = gen_val
        self.res_field = res_field
        self.gen_residue = gen_residue
        self.unembed_matrix = None
        self.frob_images = {}


def _gauss_solve_fp(matrix, rhs, p):
    """Solve an n x n system over F_p; matrix is a list of row lists."""
    n = len(matrix)
    m = [row[:] + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] % p != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = pow(m[col][col], -1, p)
        m[col] = [(x * inv) % p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                c = m[r][col]
                m[r] = [(x - c * y) % p for x, y in zip(m[r], m[col])]
    return [m[r][n] % p for r in range(n)]


class LocalTower:
    """A built tower; all raw operations take/return nested coefficient data."""

    def __init__(self, spec: TowerSpec):
        self.spec = spec
        base = spec.base
        if base[0] == "mixed":
            self.base_kind = "mixed"
            self.p = base[1]
            self.base_prec = base[2]
            self.base_res = FqField.make(self.p, 1)
        else:
            self.base_kind = "equal"
            self.p = base[1]
            self.base_f = base[2]
            self.base_prec = base[3]
            self.base_res = FqField.make(self.p, self.base_f)
        self.stages: list[_Stage] = []
        self.e_abs = 1
        for st in spec.stages:
            self._push_stage(st)
        self.res_field = self.stages[-1].res_field if self.stages else self.base_res
        k = spec.k_index if spec.k_index is not None else len(spec.stages)
        if not 0 <= k <= len(spec.stages):
            raise ValueError("k_index out of range")
        self.k_index = k
        self.e_K = 1
        f_K = self.base_res.deg
        for st in self.stages[:k]:
            if st.kind == "eisenstein":
                self.e_K *= st.deg
            else:
                f_K *= st.deg
        self.f_K = f_K
        self.q_K = self.p ** f_K
        self.max_cap = Frac(self.base_prec)
        self._sub_cache: Optional[LocalTower] = None

    # ------------------------------------------------------------------
    # construction

    def _push_stage(self, st) -> None:
        lvl = len(self.stages)
        prev_res = self.stages[-1].res_field if self.stages else self.base_res
        if st[0] == "unramified":
            m = st[1]
            if m == 1:
                raise ValueError("unramified stage must have degree >= 2")
            new_res = FqField.make(self.p, prev_res.deg * m)
            ghat = new_res.gen
            # minimal polynomial of ghat over prev_res: product over conjugates
            conj = [ghat]
            for _ in range(m - 1):
                conj.append(conj[-1].frobenius(1, prev_res.deg))
            polys = [new_res.one]
            coeffs = [new_res.one]
            for root in conj:
                nxt = [new_res.zero] * (len(coeffs) + 1)
                for i, c in enumerate(coeffs):
                    nxt[i + 1] = nxt[i + 1] + c
                    nxt[i] = nxt[i] - c * root
                coeffs = nxt
            # un-embed each coefficient into prev_res, lift into the subtower
            pre = {new_res.embed(a): a for a in prev_res.elements()}
            poly_data = []
            for c in coeffs:
                if c not in pre:
                    raise AssertionError("minimal polynomial coefficient escaped the subfield")
                poly_data.append(self._lift_res_raw(pre[c], lvl))
            stage = _Stage("unramified", m, tuple(poly_data), Frac(0), new_res, ghat)
            stage.unembed_matrix = self._build_unembed(prev_res, new_res, ghat)
            self.stages.append(stage)
        else:
            if st[0] == "eisenstein_pure":
                d = st[1]
                pi = self._uniformizer_raw(lvl)
                poly_pairs = [(self._neg(pi, lvl), 0)]
                deg = d
            else:
                pairs = st[1]
                deg = max(dd for _, dd in pairs)
                poly_pairs = [(self._from_int_raw(c, lvl), dd) for c, dd in pairs if dd < deg]
                lead = [c for c, dd in pairs if dd == deg]
                if lead != [1]:
                    raise ValueError("Eisenstein stage polynomial must be monic")
            poly_data = [self._zero(lvl) for _ in range(deg + 1)]
            poly_data[deg] = self._one(lvl)
            for c, dd in poly_pairs:
                poly_data[dd] = c
            unif_val = Frac(1, self.e_abs)
            v0 = self._val_raw(poly_data[0], lvl)
            if v0 != unif_val:
                raise ValueError("constant term is not a uniformizer times a unit")
            for i in range(1, deg):
                vi = self._val_raw(poly_data[i], lvl)
                if vi is not None and vi < unif_val:
                    raise ValueError("lower coefficient is a unit: polynomial not Eisenstein")
            gen_val = unif_val / deg
            stage = _Stage("eisenstein", deg, tuple(poly_data), gen_val,
                           prev_res, prev_res.zero)
            self.stages.append(stage)
            self.e_abs *= deg

    def _build_unembed(self, prev_res: FqField, new_res: FqField, ghat: FqElem):
        """Matrix solving r = sum c_i ghat^i with c_i in prev_res, over F_p."""
        p = self.p
        n = new_res.deg
        m = n // prev_res.deg
        cols = []
        for i in range(m):
            gi = ghat ** i
            for j in range(prev_res.deg):
                bj = new_res.embed(prev_res.gen ** j) if prev_res.deg > 1 else new_res.one
                col = (gi * bj).coeffs
                cols.append(list(col))
        matrix = [[cols[c][r] for c in range(n)] for r in range(n)]
        return matrix

    def _unembed(self, stage: _Stage, prev_res: FqField, r: FqElem) -> list[FqElem]:
        sol = _gauss_solve_fp(stage.unembed_matrix, list(r.coeffs), self.p)
        m = stage.deg
        out = []
        for i in range(m):
            chunk = sol[i * prev_res.deg:(i + 1) * prev_res.deg]
            out.append(prev_res.elem(chunk))
        return out

    def sub_tower(self) -> "LocalTower":
        if not self.stages:
            raise ValueError("tower has no stages")
        if self._sub_cache is None:
            k = self.spec.k_index
            if k is not None and k >= len(self.spec.stages):
                k = len(self.spec.stages) - 1
            self._sub_cache = LocalTower(
                TowerSpec(self.spec.base, self.spec.stages[:-1], k))
        return self._sub_cache

    # ------------------------------------------------------------------
    # raw data helpers (level-indexed; level == len(self.stages) is the top)

    def _zero(self, lvl: int):
        if lvl == 0:
            return 0 if self.base_kind == "mixed" else (self.base_res.zero,) * self.base_prec
        st = self.stages[lvl - 1]
        return tuple(self._zero(lvl - 1) for _ in range(st.deg))

    def _one(self, lvl: int):
        return self._from_int_raw(1, lvl)

    def _from_int_raw(self, n: int, lvl: int):
        if lvl == 0:
            if self.base_kind == "mixed":
                return n % self.p ** self.base_prec
            c = [self.base_res.zero] * self.base_prec
            c[0] = self.base_res.elem([n % self.p])
            return tuple(c)
        st = self.stages[lvl - 1]
        return tuple([self._from_int_raw(n, lvl - 1)] +
                     [self._zero(lvl - 1)] * (st.deg - 1))

    def _is_zero_raw(self, x, lvl: int) -> bool:
        if lvl == 0:
            if self.base_kind == "mixed":
                return x % self.p ** self.base_prec == 0
            return all(c.is_zero() for c in x)
        return all(self._is_zero_raw(c, lvl - 1) for c in x)

    def _add(self, x, y, lvl: int):
        if lvl == 0:
            if self.base_kind == "mixed":
                return (x + y) % self.p ** self.base_prec
            return tuple(a + b for a, b in zip(x, y))
        return tuple(self._add(a, b, lvl - 1) for a, b in zip(x, y))

    def _neg(self, x, lvl: int):
        if lvl == 0:
            if self.base_kind == "mixed":
                return (-x) % self.p ** self.base_prec
            return tuple(-a for a in x)
        return tuple(self._neg(a, lvl - 1) for a in x)

    def _sub(self, x, y, lvl: int):
        return self._add(x, self._neg(y, lvl), lvl)

    def _mul(self, x, y, lvl: int):
        if lvl == 0:
            if self.base_kind == "mixed":
                return (x * y) % self.p ** self.base_prec
            n = self.base_prec
            out = [self.base_res.zero] * n
            for i, a in enumerate(x):
                if a.is_zero():
                    continue
                for j, b in enumerate(y):
                    if i + j >= n:
                        break
                    if not b.is_zero():
                        out[i + j] = out[i + j] + a * b
            return tuple(out)
        st = self.stages[lvl - 1]
        d = st.deg
        prod = [self._zero(lvl - 1) for _ in range(2 * d - 1)]
        for i, a in enumerate(x):
            if self._is_zero_raw(a, lvl - 1):
                continue
            for j, b in enumerate(y):
                if not self._is_zero_raw(b, lvl - 1):
                    prod[i + j] = self._add(prod[i + j], self._mul(a, b, lvl - 1), lvl - 1)
        # reduce modulo the monic stage polynomial
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if self._is_zero_raw(c, lvl - 1):
                continue
            prod[k] = self._zero(lvl - 1)
            for j in range(d):
                if not self._is_zero_raw(st.poly[j], lvl - 1):
                    prod[k - d + j] = self._sub(
                        prod[k - d + j], self._mul(c, st.poly[j], lvl - 1), lvl - 1)
        return tuple(prod[:d])

    def _scalar_int(self, n: int, x, lvl: int):
        return self._mul(self._from_int_raw(n, lvl), x, lvl)

    def _pow_raw(self, x, e: int, lvl: int):
        out = self._one(lvl)
        base = x
        while e:
            if e & 1:
                out = self._mul(out, base, lvl)
            base = self._mul(base, base, lvl)
            e >>= 1
        return out

    # ------------------------------------------------------------------
    # valuation / residue / lifting

    def _val_raw(self, x, lvl: int) -> Optional[Frac]:
        """Exact absolute valuation, or None when x = 0 at full base precision."""
        if lvl == 0:
            if self.base_kind == "mixed":
                x %= self.p ** self.base_prec
                if x == 0:
                    return None
                v = 0
                while x % self.p == 0:
                    x //= self.p
                    v += 1
                return Frac(v)
            for i, c in enumerate(x):
                if not c.is_zero():
                    return Frac(i)
            return None
        st = self.stages[lvl - 1]
        best = None
        for i, c in enumerate(x):
            v = self._val_raw(c, lvl - 1)
            if v is None:
                continue
            v = v + i * st.gen_val
            if best is None or v < best:
                best = v
        return best

    def _residue(self, x, lvl: int) -> FqElem:
        """Image in the residue field at this level."""
        if lvl == 0:
            if self.base_kind == "mixed":
                return self.base_res.elem([x % self.p])
            return x[0]
        st = self.stages[lvl - 1]
        if st.kind == "eisenstein":
            return self._residue(x[0], lvl - 1)
        acc = st.res_field.zero
        gpow = st.res_field.one
        for c in x:
            acc = acc + st.res_field.embed(self._residue(c, lvl - 1)) * gpow
            gpow = gpow * st.gen_residue
        return acc

    def _lift_res_raw(self, r: FqElem, lvl: int):
        """Plain (non-canonical) section of the residue map."""
        if lvl == 0:
            if self.base_kind == "mixed":
                return r.coeffs[0] % self.p ** self.base_prec
            c = [self.base_res.zero] * self.base_prec
            c[0] = r
            return tuple(c)
        st = self.stages[lvl - 1]
        if st.kind == "eisenstein":
            return tuple([self._lift_res_raw(r, lvl - 1)] +
                         [self._zero(lvl - 1)] * (st.deg - 1))
        prev = self.stages[lvl - 2].res_field if lvl >= 2 else self.base_res
        coords = self._unembed(st, prev, r)
        return tuple(self._lift_res_raw(c, lvl - 1) for c in coords)

    def _res_field_at(self, lvl: int) -> FqField:
        return self.stages[lvl - 1].res_field if lvl else self.base_res

    def _teichmuller_raw(self, r: FqElem, lvl: int):
        x = self._lift_res_raw(r, lvl)
        q = self._res_field_at(lvl).order
        for _ in range(self.base_prec + 2):
            x = self._pow_raw(x, q, lvl)
        return x

    # ------------------------------------------------------------------
    # units, division

    def _inv_unit(self, x, lvl: int):
        r = self._residue(x, lvl)
        if r.is_zero():
            raise ZeroDivisionError("not a unit (zero residue)")
        z = self._lift_res_raw(r.inverse(), lvl)
        steps = (self.base_prec * self.e_abs).bit_length() + 2
        two = self._from_int_raw(2, lvl)
        for _ in range(steps):
            z = self._mul(z, self._sub(two, self._mul(x, z, lvl), lvl), lvl)
        return z

    def _div_uniformizer(self, x, lvl: int):
        """Exact division by the uniformizer of the level-lvl tower."""
        if lvl == 0:
            if self.base_kind == "mixed":
                if x % self.p != 0:
                    raise ValueError("not divisible by the uniformizer")
                return x // self.p
            if not x[0].is_zero():
                raise ValueError("not divisible by the uniformizer")
            return tuple(list(x[1:]) + [self.base_res.zero])
        st = self.stages[lvl - 1]
        if st.kind == "unramified":
            return tuple(self._div_uniformizer(c, lvl - 1) for c in x)
        # Eisenstein: divide by the stage generator
        pure = all(self._is_zero_raw(st.poly[i], lvl - 1) for i in range(1, st.deg))
        if pure:
            c0 = self._div_exact_raw(x[0], self._neg(st.poly[0], lvl - 1), lvl - 1)
            return tuple(list(x[1:]) + [c0])
        # gamma * u = -a_0 with u = gamma^(d-1) + a_(d-1) gamma^(d-2) + ... + a_1
        d = st.deg
        u = [self._zero(lvl - 1) for _ in range(d)]
        u[d - 1] = self._one(lvl - 1)
        for i in range(1, d):
            u[i - 1] = st.poly[i]
        xu = self._mul(x, tuple(u), lvl)
        neg_a0 = self._neg(st.poly[0], lvl - 1)
        return tuple(self._div_exact_raw(c, neg_a0, lvl - 1) for c in xu)

    def _div_exact_raw(self, a, b, lvl: int):
        vb = self._val_raw(b, lvl)
        if vb is None:
            raise ZeroDivisionError("division by zero at precision")
        unif_val = Frac(1, self._e_at(lvl))
        strips = vb / unif_val
        if strips.denominator != 1:
            raise ValueError("divisor valuation not a multiple of the uniformizer valuation")
        for _ in range(int(strips)):
            a = self._div_uniformizer(a, lvl)
            b = self._div_uniformizer(b, lvl)
        return self._mul(a, self._inv_unit(b, lvl), lvl)

    def _e_at(self, lvl: int) -> int:
        e = 1
        for st in self.stages[:lvl]:
            if st.kind == "eisenstein":
                e *= st.deg
        return e

    def _uniformizer_raw(self, lvl: int):
        for i in range(lvl - 1, -1, -1):
            if self.stages[i].kind == "eisenstein":
                g = self._gen_raw(i + 1)
                for j in range(i + 1, lvl):
                    g = self._inject(g, j + 1)
                return g
        x = self._base_uniformizer()
        for j in range(lvl):
            x = self._inject(x, j + 1)
        return x

    def _base_uniformizer(self):
        if self.base_kind == "mixed":
            return self.p
        c = [self.base_res.zero] * self.base_prec
        if self.base_prec > 1:
            c[1] = self.base_res.one
        return tuple(c)

    def _gen_raw(self, lvl: int):
        st = self.stages[lvl - 1]
        data = [self._zero(lvl - 1) for _ in range(st.deg)]
        data[1] = self._one(lvl - 1)
        return tuple(data)

    def _inject(self, subdata, lvl: int):
        st = self.stages[lvl - 1]
        return tuple([subdata] + [self._zero(lvl - 1)] * (st.deg - 1))

    # ------------------------------------------------------------------
    # Frobenius lift

    def _frob_gen_image(self, lvl: int):
        """Image of the level-lvl unramified generator under the q_K-Frobenius lift."""
        st = self.stages[lvl - 1]
        if self.q_K in st.frob_images:
            return st.frob_images[self.q_K]
        target = st.gen_residue ** self.q_K
        x = self._lift_res_raw(target, lvl)
        # Hensel: refine x to a root of the stage polynomial (lifted to level lvl)
        poly = [self._inject(c, lvl) for c in st.poly]
        x_lift = x
        for _ in range((self.base_prec * self.e_abs).bit_length() + 2):
            fx = self._poly_eval(poly, x_lift, lvl)
            dfx = self._poly_eval(self._poly_derivative(poly, lvl), x_lift, lvl)
            x_lift = self._sub(x_lift, self._mul(fx, self._inv_unit(dfx, lvl), lvl), lvl)
        st.frob_images[self.q_K] = x_lift
        return x_lift

    def _poly_eval(self, coeffs, x, lvl: int):
        acc = self._zero(lvl)
        for c in reversed(coeffs):
            acc = self._add(self._mul(acc, x, lvl), c, lvl)
        return acc

    def _poly_derivative(self, coeffs, lvl: int):
        return [self._scalar_int(i, c, lvl) for i, c in enumerate(coeffs)][1:] or [self._zero(lvl)]

    def _frob_raw(self, x, lvl: int):
        if lvl == 0:
            if self.base_kind == "mixed":
                return x
            return tuple(c ** self.q_K for c in x)
        st = self.stages[lvl - 1]
        coords = [self._frob_raw(c, lvl - 1) for c in x]
        if st.kind == "eisenstein":
            return tuple(coords)
        gimg = self._frob_gen_image(lvl)
        acc = self._zero(lvl)
        gpow = self._one(lvl)
        for c in coords:
            acc = self._add(acc, self._mul(self._inject(c, lvl), gpow, lvl), lvl)
            gpow = self._mul(gpow, gimg, lvl)
        return acc

    # ------------------------------------------------------------------
    # norms

    def _norm_down_raw(self, x):
        lvl = len(self.stages)
        if lvl == 0:
            raise ValueError("tower has no stages")
        st = self.stages[-1]
        d = st.deg
        if d > 6:
            raise ValueError("norm_down implemented for stage degree <= 6")
        cols = []
        g = self._gen_raw(lvl)
        cur = x
        for _ in range(d):
            cols.append(cur)
            cur = self._mul(cur, g, lvl)
        # matrix[i][j] = coefficient of gamma^i in x * gamma^j
        import itertools as _it
        total = self._zero(lvl - 1)
        for perm in _it.permutations(range(d)):
            sign = 1
            seen = list(perm)
            for i in range(d):
                for j in range(i + 1, d):
                    if seen[i] > seen[j]:
                        sign = -sign
            term = self._one(lvl - 1)
            for j in range(d):
                term = self._mul(term, cols[j][perm[j]], lvl - 1)
            total = self._add(total, term if sign > 0 else self._neg(term, lvl - 1), lvl - 1)
        return total

    # ------------------------------------------------------------------
    # public element-level API

    def elem(self, data, cap: Optional[Frac] = None) -> "LocalElem":
        return LocalElem(self, data, self.max_cap if cap is None else cap)

    def zero(self) -> "LocalElem":
        return self.elem(self._zero(len(self.stages)))

    def one(self) -> "LocalElem":
        return self.elem(self._one(len(self.stages)))

    def from_int(self, n: int) -> "LocalElem":
        return self.elem(self._from_int_raw(n, len(self.stages)))

    def uniformizer(self) -> "LocalElem":
        return self.elem(self._uniformizer_raw(len(self.stages)))

    def pi_K(self) -> "LocalElem":
        """The designated K-level uniformizer, injected to the top."""
        lvl = len(self.stages)
        x = self._uniformizer_raw(self.k_index)
        for j in range(self.k_index, lvl):
            x = self._inject(x, j + 1)
        return self.elem(x)

    def teichmuller(self, r: FqElem) -> "LocalElem":
        if r.field != self.res_field:
            raise ValueError("residue field mismatch")
        return self.elem(self._teichmuller_raw(r, len(self.stages)))

    def frob(self, x: "LocalElem") -> "LocalElem":
        """Lift of the q_K-power Frobenius: fixes Eisenstein generators and the base."""
        return LocalElem(self, self._frob_raw(x.data, len(self.stages)), x.cap)

    def norm_down(self, x: "LocalElem") -> "LocalElem":
        sub = self.sub_tower()
        return LocalElem(sub, self._norm_down_raw(x.data), min(x.cap, sub.max_cap))

    def residue(self, x: "LocalElem") -> FqElem:
        return self._residue(x.data, len(self.stages))

    def gen(self) -> "LocalElem":
        return self.elem(self._gen_raw(len(self.stages)))

    def rand_elem(self, rng) -> "LocalElem":
        lvl = len(self.stages)

        def rand_data(l):
            if l == 0:
                if self.base_kind == "mixed":
                    return rng.randrange(self.p ** self.base_prec)
                return tuple(self.base_res.from_index(rng.randrange(self.base_res.order))
                             for _ in range(self.base_prec))
            return tuple(rand_data(l - 1) for _ in range(self.stages[l - 1].deg))

        return self.elem(rand_data(lvl))


class LocalElem:
    """Tower element with an absolute precision cap (error has v_abs >= cap)."""

    __slots__ = ("tower", "data", "cap")

    def __init__(self, tower: LocalTower, data, cap: Frac):
        self.tower = tower
        self.data = data
        self.cap = cap

    def _lvl(self) -> int:
        return len(self.tower.stages)

    def _check(self, other: "LocalElem") -> None:
        if self.tower is not other.tower and self.tower.spec != other.tower.spec:
            raise ValueError("tower mismatch")

    def __add__(self, other: "LocalElem") -> "LocalElem":
        self._check(other)
        return LocalElem(self.tower, self.tower._add(self.data, other.data, self._lvl()),
                         min(self.cap, other.cap))

    def __sub__(self, other: "LocalElem") -> "LocalElem":
        self._check(other)
        return LocalElem(self.tower, self.tower._sub(self.data, other.data, self._lvl()),
                         min(self.cap, other.cap))

    def __neg__(self) -> "LocalElem":
        return LocalElem(self.tower, self.tower._neg(self.data, self._lvl()), self.cap)

    def __mul__(self, other: "LocalElem") -> "LocalElem":
        self._check(other)
        t = self.tower
        va = t._val_raw(self.data, self._lvl())
        vb = t._val_raw(other.data, self._lvl())
        va = self.cap if va is None else min(va, self.cap)
        vb = other.cap if vb is None else min(vb, other.cap)
        cap = min(self.cap + vb, other.cap + va, t.max_cap)
        return LocalElem(t, t._mul(self.data, other.data, self._lvl()), cap)

    def __pow__(self, e: int) -> "LocalElem":
        if e < 0:
            return self.inverse() ** (-e)
        out = self.tower.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __truediv__(self, other: "LocalElem") -> "LocalElem":
        self._check(other)
        t = self.tower
        vb = t._val_raw(other.data, self._lvl())
        if vb is None:
            raise ZeroDivisionError("divisor is 0 at its precision cap")
        if vb >= other.cap:
            raise ZeroDivisionError("divisor valuation not exactly known below its cap")
        cap = min(self.cap, other.cap) - vb
        if cap <= 0:
            raise ValueError("division would exhaust the precision cap")
        return LocalElem(t, t._div_exact_raw(self.data, other.data, self._lvl()), cap)

    def inverse(self) -> "LocalElem":
        return LocalElem(self.tower, self.tower._one(self._lvl()), self.tower.max_cap) / self

    def valuation_abs(self) -> Union[Frac, AtLeast]:
        v = self.tower._val_raw(self.data, self._lvl())
        if v is None or v >= self.cap:
            return AtLeast(self.cap)
        return v

    def valuation(self) -> Union[Frac, AtLeast]:
        """Valuation normalized so the designated K-level uniformizer has v = 1."""
        v = self.valuation_abs()
        e = self.tower.e_K
        if isinstance(v, AtLeast):
            return AtLeast(v.bound * e)
        return v * e

    def residue(self) -> FqElem:
        return self.tower.residue(self)

    def is_zero_at_cap(self) -> bool:
        v = self.tower._val_raw(self.data, self._lvl())
        return v is None or v >= self.cap

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalElem):
            return NotImplemented
        return (self - other).is_zero_at_cap()

    def __hash__(self):
        raise TypeError("LocalElem is unhashable (precision-capped equality)")

    def __repr__(self) -> str:
        v = self.valuation_abs()
        return f"<LocalElem v_abs={v} cap={self.cap}>"
