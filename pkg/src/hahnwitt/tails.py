"""Exact evaluation of polynomials at structured infinite digit sums.

Witnesses like  z_n = sum_{0<k_1<...<k_(n-1)} pi^(1/(q-1) - q^-k_1 - ... )
cannot be truncated without destroying v(g_n(z_n)) (the truncation boundary
dominates the telescoping tail), so the index structure stays symbolic.

A pattern element is a formal sum of generators
    coeff * pi^base * prod_factors (weighted sums over distinct index tuples).
Powers are expanded by tuple-multiplicity partitions, so that all
non-diagonal multinomial coefficients carry their p-divisibility on the
generator, and diagonals of the standard z-families are rewritten through the
index-shift identity  diag(F(a, r)) = F(qa-1, r-1) + F(qa, r),
which makes the telescitation f(z_n) = z_(n-1) + p-heavy exact and symbolic.

Valuations are computed per exponent class mod 1 (pure towers pi^e = p only):
class sums collapse p-adically and are completed exactly by solving for every
index tuple landing in the class.  All exponents are in pi-units; a term's
value is  exponent + vt_p * v_p(coefficient)  with vt_p = v_pi(p) = e.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Frac = Fraction


# ---------------------------------------------------------------------------
# coefficient rings

class ZW:
    """Exact integers as the coefficient ring (digits in F_p)."""

    def __init__(self, p: int):
        self.p = p
        self.one = 1
        self.zero = 0

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def mul_int(self, a, n: int):
        return a * n

    def val_p(self, a) -> Optional[Frac]:
        if a == 0:
            return None
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return Frac(v)


class TowerW:
    """Coefficients in an unramified W(F_{q^m}) tower, exact mod p^NBIG."""

    def __init__(self, tower):
        if tower.e_abs != 1:
            raise ValueError("coefficient tower must be unramified")
        self.tower = tower
        self.p = tower.p
        self.one = tower.one()
        self.zero = tower.zero()

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def mul_int(self, a, n: int):
        return a * self.tower.from_int(n)

    def val_p(self, a) -> Optional[Frac]:
        v = a.valuation_abs()
        if hasattr(v, "bound"):
            return None
        return v


# ---------------------------------------------------------------------------
# shapes, factors, generators

@dataclass(frozen=True)
class Shape:
    """Index tuples 0 < k_1 < ... < k_r (k_1 >= kmin) with decay sum
    S(u) = sum_i betas[i] * q^-k_i."""

    betas: tuple
    q: int
    kmin: int = 1

    @property
    def r(self) -> int:
        return len(self.betas)

    def max_sum(self) -> Frac:
        return sum((Frac(b, self.q ** (self.kmin + i)) for i, b in enumerate(self.betas)),
                   Frac(0))

    def tuples(self, kcap: int):
        """(indices, S) for all tuples with indices <= kcap."""
        for combo in itertools.combinations(range(self.kmin, kcap + 1), self.r):
            yield combo, sum((Frac(b, self.q ** k) for b, k in zip(self.betas, combo)),
                             Frac(0))

    def is_std(self) -> bool:
        return self.kmin == 1 and all(b == 1 for b in self.betas)


@dataclass(frozen=True)
class Factor:
    """sum over pairwise-distinct tuples (u_1..u_s) of the shape, weighted:
    exponent contribution  -(w_1 S(u_1) + ... + w_s S(u_s)).

    Weights are descending; runs of equal weights enumerate lex-increasing
    tuples (unordered blocks), distinct weights enumerate all assignments.
    """

    shape: Shape
    weights: tuple

    def max_sum(self) -> Frac:
        # conservative upper bound ignoring distinctness
        return sum(w for w in self.weights) * self.shape.max_sum()


@dataclass(frozen=True)
class Gen:
    coeff: object
    base: Frac
    factors: tuple  # tuple of Factor


def _partition_coefficient(q: int, lam: Sequence[int]) -> int:
    """Multinomial q! / prod(lam_i!): the coefficient for the lam-split of a
    q-th power, with equal-weight blocks enumerated unordered."""
    c = math.factorial(q)
    for part in lam:
        c //= math.factorial(part)
    return c


def _partitions(n: int):
    """Partitions of n in descending order."""
    if n == 0:
        yield ()
        return
    def rec(n, maxpart):
        if n == 0:
            yield ()
            return
        for first in range(min(n, maxpart), 0, -1):
            for rest in rec(n - first, first):
                yield (first,) + rest
    yield from rec(n, n)


class PatternElt:
    """Formal sum of generators over a coefficient ring."""

    def __init__(self, ring, gens: Sequence[Gen] = ()):
        self.ring = ring
        self.gens = list(gens)

    # -- constructors --------------------------------------------------

    @staticmethod
    def monomial(ring, coeff, exp) -> "PatternElt":
        return PatternElt(ring, [Gen(coeff, Frac(exp), ())])

    @staticmethod
    def family(ring, coeff, base, betas, q, kmin=1) -> "PatternElt":
        shape = Shape(tuple(int(b) for b in betas), q, kmin)
        return PatternElt(ring, [Gen(coeff, Frac(base), (Factor(shape, (1,)),))])

    @staticmethod
    def std_family(ring, coeff, base, r, q) -> "PatternElt":
        """F(base, r): sum over 0 < k_1 < ... < k_r of pi^(base - sum q^-k_i)."""
        if r == 0:
            return PatternElt.monomial(ring, coeff, base)
        return PatternElt.family(ring, coeff, base, (1,) * r, q)

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "PatternElt") -> "PatternElt":
        return PatternElt(self.ring, self.gens + other.gens)

    def __neg__(self) -> "PatternElt":
        return PatternElt(self.ring, [Gen(self.ring.neg(g.coeff), g.base, g.factors)
                                      for g in self.gens])

    def __sub__(self, other: "PatternElt") -> "PatternElt":
        return self + (-other)

    def __mul__(self, other: "PatternElt") -> "PatternElt":
        out = []
        for g1 in self.gens:
            for g2 in other.gens:
                out.append(Gen(self.ring.mul(g1.coeff, g2.coeff),
                               g1.base + g2.base, g1.factors + g2.factors))
        return PatternElt(self.ring, out)

    def scale_int(self, n: int) -> "PatternElt":
        return PatternElt(self.ring, [Gen(self.ring.mul_int(g.coeff, n), g.base, g.factors)
                                      for g in self.gens])

    def shift(self, delta) -> "PatternElt":
        delta = Frac(delta)
        return PatternElt(self.ring, [Gen(g.coeff, g.base + delta, g.factors)
                                      for g in self.gens])

    # -- structured powers ------------------------------------------------

    def _gen_power(self, g: Gen, m: int) -> list[Gen]:
        """g^m with the partition split when g is a single-tuple family."""
        ring = self.ring
        coeff_m = g.coeff
        for _ in range(m - 1):
            coeff_m = ring.mul(coeff_m, g.coeff)
        if m == 1:
            return [g]
        if len(g.factors) == 1 and g.factors[0].weights == (1,):
            shape = g.factors[0].shape
            out = []
            for lam in _partitions(m):
                k = _partition_coefficient(m, lam)
                out.append(Gen(ring.mul_int(coeff_m, k), g.base * m,
                               (Factor(shape, lam),)))
            return out
        if not g.factors:
            return [Gen(coeff_m, g.base * m, ())]
        # heavy generator: plain independent product
        return [Gen(coeff_m, g.base * m, g.factors * m)]

    def power(self, n: int) -> "PatternElt":
        """n-th power via multinomials over the generator list with
        partition-split self-powers."""
        ring = self.ring
        gens = self.gens
        out: list[Gen] = []
        idxs = range(len(gens))
        for combo in itertools.combinations_with_replacement(idxs, n):
            mult: dict[int, int] = {}
            for i in combo:
                mult[i] = mult.get(i, 0) + 1
            mcoeff = math.factorial(n)
            for m in mult.values():
                mcoeff //= math.factorial(m)
            pieces = [self._gen_power(gens[i], m) for i, m in mult.items()]
            for chosen in itertools.product(*pieces):
                coeff = ring.mul_int(ring.one, mcoeff)
                base = Frac(0)
                factors = ()
                for g in chosen:
                    coeff = ring.mul(coeff, g.coeff)
                    base += g.base
                    factors = factors + g.factors
                out.append(Gen(coeff, base, factors))
        return PatternElt(ring, out)

    # -- pruning -----------------------------------------------------------

    def value_floor(self, g: Gen, vt_p: Frac) -> Optional[Frac]:
        vp = self.ring.val_p(g.coeff)
        if vp is None:
            return None
        total = sum((f.max_sum() for f in g.factors), Frac(0))
        return g.base - total + vp * vt_p

    def pruned(self, vmax: Frac, vt_p: Frac) -> "PatternElt":
        """Drop generators whose every term has value > vmax (sound: dropped
        contributions cannot lower or flip any class value <= vmax)."""
        keep = []
        for g in self.gens:
            fl = self.value_floor(g, vt_p)
            if fl is not None and fl <= vmax:
                keep.append(g)
        return PatternElt(self.ring, keep)

    def collect_std(self) -> "PatternElt":
        """Merge generators with identical structure (symbolic cancellation)."""
        ring = self.ring
        acc: dict = {}
        order = []
        for g in self.gens:
            key = (g.base, g.factors)
            if key in acc:
                acc[key] = ring.add(acc[key], g.coeff)
            else:
                acc[key] = g.coeff
                order.append(key)
        out = []
        for key in order:
            c = acc[key]
            if ring.val_p(c) is None:
                continue
            out.append(Gen(c, key[0], key[1]))
        return PatternElt(ring, out)


def std_diag_split(ring, g: Gen, q: int) -> list[Gen]:
    """Rewrite the all-equal diagonal of a standard family q-th power:
    sum_u pi^(q e_u) over F(a, r) equals F(qa - 1, r - 1) + F(qa, r)
    (reindex k_i -> k_i - 1 and split on whether the new first index is 0)."""
    r = g.factors[0].shape.r
    base = g.base  # = q * a
    if r == 1:
        lower = Gen(g.coeff, base - 1, ())
    else:
        lower = Gen(g.coeff, base - 1, (Factor(Shape((1,) * (r - 1), q, 1), (1,)),))
    same = Gen(g.coeff, base, (Factor(Shape((1,) * r, q, 1), (1,)),))
    return [lower, same]


# ---------------------------------------------------------------------------
# torsion-witness evaluation: g_n at the ladder element z_n

def frobenius_step(x: PatternElt, q: int, vmax: Frac, vt_p: Frac) -> PatternElt:
    """f(x) = x^q - pi*x with the diagonal rewrite and symbolic telescoping."""
    ring = x.ring
    xq = x.power(q)
    rewritten: list[Gen] = []
    for g in xq.gens:
        if (len(g.factors) == 1 and g.factors[0].shape.is_std()
                and len(g.factors[0].weights) == 1
                and g.factors[0].weights[0] == q):
            # this is the diagonal part c^q * sum pi^(q * e_u) of a std family
            qbase_gen = Gen(g.coeff, g.base, g.factors)
            rewritten.extend(std_diag_split(ring, Gen(g.coeff, g.base,
                             (Factor(Shape((1,) * g.factors[0].shape.r, q, 1), (1,)),)), q))
        else:
            rewritten.append(g)
    out = PatternElt(ring, rewritten) - x.shift(1)
    return out.collect_std().pruned(vmax, vt_p)


def ladder_witness(ring, q: int, n: int) -> PatternElt:
    """z_n = sum over 0 < k_1 < ... < k_(n-1) of pi^(1/(q-1) - sum q^-k_i)."""
    return PatternElt.std_family(ring, ring.one, Frac(1, q - 1), n - 1, q)


def torsion_value_at_ladder(p: int, q: int, e: int, n: int,
                            margin: Frac = Frac(3, 2)) -> "ValuationReport":
    """v_pi(g_n(z_n)) over K = Q_p(p^(1/e)) (pure, v_pi(p) = e), exact.

    g_n = (f^[n-1])^(q-1) - pi with f(X) = X^q - pi X; for n = 1 the witness
    is an exact root and the report is infinite (value None, bound huge).
    """
    ring = ZW(p)
    threshold = Frac(n)
    vmax = threshold + margin
    if n == 1:
        return ValuationReport(None, Frac(10 ** 9), None, 0, exact_root=True)
    x = ladder_witness(ring, q, n)
    for _ in range(n - 1):
        x = frobenius_step(x, q, vmax, Frac(e))
    # x should now be z_1 + heavy; split off the exact monomial z_1 = pi^(1/(q-1))
    z1_exp = Frac(1, q - 1)
    w_gens = []
    z1_coeff = 0
    for g in x.gens:
        if not g.factors and g.base == z1_exp:
            z1_coeff += g.coeff
        else:
            w_gens.append(g)
    if z1_coeff != 1:
        raise AssertionError("telescoping failed: f^[n-1](z_n) != z_1 + p-heavy")
    w = PatternElt(ring, w_gens)
    # g_n(z_n) = (z_1 + W)^(q-1) - pi = sum_{j>=1} C(q-1,j) pi^((q-1-j)/(q-1)) W^j
    total = PatternElt(ring, [])
    wj = PatternElt.monomial(ring, ring.one, 0)
    for j in range(1, q):
        wj = (wj * w).pruned(vmax + 1, Frac(e))
        c = math.comb(q - 1, j)
        term = wj.shift(Frac(q - 1 - j, q - 1)).scale_int(c)
        total = total + term
    total = total.pruned(vmax, Frac(e))
    return hw_valuation(total, e, vmax=vmax)


# ---------------------------------------------------------------------------
# enumeration, class sums, completion

def _factor_tuple_sets(factor: Factor, kcap: int):
    """(S_total, count-multiplier-ignored) enumeration of admissible
    assignments; yields total decay sums."""
    shape_tuples = list(factor.shape.tuples(kcap))
    w = factor.weights
    s = len(w)

    def rec(part: int, used: list, lex_floor: Optional[tuple]):
        if part == s:
            yield Frac(0)
            return
        same_block = part + 1 < s and w[part + 1] == w[part]
        prev_block = part > 0 and w[part - 1] == w[part]
        for tup, ssum in shape_tuples:
            if any(tup == u for u in used):
                continue
            if prev_block and lex_floor is not None and tup <= lex_floor:
                continue
            for rest in rec(part + 1, used + [tup], tup):
                yield w[part] * ssum + rest

    if s == 1:
        for tup, ssum in shape_tuples:
            yield w[0] * ssum
    else:
        yield from rec(0, [], None)


def _enumerate_gen_terms(gen: Gen, kcap: int, vmax: Frac, w_val: Frac):
    """{exponent: multiplicity} of gen terms with indices <= kcap, value <= vmax."""
    factor_sums = []
    for f in gen.factors:
        sums = sorted(_factor_tuple_sets(f, kcap), reverse=True)
        factor_sums.append(sums)
    suffix_max = [Frac(0)] * (len(gen.factors) + 1)
    for i in range(len(gen.factors) - 1, -1, -1):
        mx = factor_sums[i][0] if factor_sums[i] else Frac(0)
        suffix_max[i] = suffix_max[i + 1] + mx
    need = gen.base + w_val - vmax  # total decay sum must reach this
    out: dict[Frac, int] = {}

    def rec(i: int, acc: Frac):
        if acc + suffix_max[i] < need:
            return
        if i == len(gen.factors):
            exp = gen.base - acc
            out[exp] = out.get(exp, 0) + 1
            return
        for ssum in factor_sums[i]:
            if acc + ssum + suffix_max[i + 1] < need:
                break  # sums sorted descending
            rec(i + 1, acc + ssum)

    rec(0, Frac(0))
    return out


def _remainder_floor_gen(gen: Gen, kcap: int, w_val: Frac) -> Optional[Frac]:
    """Value floor over gen terms with some index > kcap."""
    if not gen.factors:
        return None
    max_total = sum((f.max_sum() for f in gen.factors), Frac(0))
    best_loss = None
    for f in gen.factors:
        # move one slot of one tuple to index kcap+1; smallest possible loss
        for wgt in f.weights:
            for i, b in enumerate(f.shape.betas):
                k_assigned = f.shape.kmin + i
                loss = wgt * (Frac(b, f.shape.q ** k_assigned)
                              - Frac(b, f.shape.q ** (kcap + 1)))
                if best_loss is None or loss < best_loss:
                    best_loss = loss
    return gen.base - (max_total - best_loss) + w_val


def _q_denom_log(x: Frac, q: int) -> int:
    d = x.denominator
    v = 0
    while d % q == 0:
        d //= q
        v += 1
    return v


def _complete_class(gens_w, class_frac: Frac, exp_lo: Frac, exp_hi: Frac, ring):
    """Exact {exponent: coefficient} over ALL indices for exponents in the class
    within [exp_lo, exp_hi]."""
    out: dict = {}
    e = class_frac
    while e < exp_lo:
        e += 1
    exps = []
    while e <= exp_hi:
        exps.append(e)
        e += 1
    for gen, _w in gens_w:
        for e in exps:
            if not gen.factors:
                if gen.base == e:
                    out[e] = ring.add(out.get(e, ring.zero), gen.coeff)
                continue
            target_total = gen.base - e
            if target_total <= 0:
                continue
            qr = gen.factors[0].shape.q
            kmax = _q_denom_log(target_total, qr) + 10
            cnt = _count_multi_factor(gen.factors, target_total, kmax)
            if cnt:
                out[e] = ring.add(out.get(e, ring.zero), ring.mul_int(gen.coeff, cnt))
    return out


def _count_multi_factor(factors, target: Frac, kmax: int) -> int:
    if not factors:
        return 1 if target == 0 else 0
    first, rest = factors[0], factors[1:]
    rest_max = sum((f.max_sum() for f in rest), Frac(0))
    total = 0
    # enumerate first-factor sums between target - rest_max and target
    lo = target - rest_max
    # solve first factor for every achievable sum in [lo, target]... enumerate by
    # recursing over candidate sums via direct tuple enumeration
    sums = _factor_sums_in_range(first, max(lo, Frac(0)), target, kmax)
    for ssum, cnt in sums.items():
        sub = _count_multi_factor(rest, target - ssum, kmax)
        if sub:
            total += cnt * sub
    return total


_FACTOR_SUMS_MEMO: dict = {}


def _factor_sums_in_range(factor: Factor, lo: Frac, hi: Frac, kmax: int) -> dict:
    """{sum: count} over admissible factor assignments with lo <= sum <= hi."""
    key = (factor, lo, hi, kmax)
    if key in _FACTOR_SUMS_MEMO:
        return _FACTOR_SUMS_MEMO[key]
    shape = factor.shape
    w = factor.weights
    s = len(w)
    out: dict = {}

    def shape_tuples_bounded(lo_s: Frac, hi_s: Frac):
        res = []

        def slots(slot: int, klo: int, acc: Frac, prefix: tuple):
            if slot == shape.r:
                if lo_s <= acc <= hi_s:
                    res.append((prefix, acc))
                return
            b = shape.betas[slot]
            k = klo
            while k <= kmax:
                term = Frac(b, shape.q ** k)
                rest_sup = sum(Frac(shape.betas[j], shape.q ** (k + j - slot))
                               for j in range(slot + 1, shape.r))
                if acc + term + rest_sup < lo_s:
                    break
                slots(slot + 1, k + 1, acc + term, prefix + (k,))
                k += 1

        slots(0, shape.kmin, Frac(0), ())
        return res

    def rec(part: int, used: list, lex_floor, acc: Frac):
        if part == s:
            if lo <= acc <= hi:
                out[acc] = out.get(acc, 0) + 1
            return
        later_max = sum(w[j] for j in range(part + 1, s)) * shape.max_sum()
        lo_t = (lo - acc - later_max) / w[part]
        hi_t = (hi - acc) / w[part]
        prev_block = part > 0 and w[part - 1] == w[part]
        for tup, ssum in shape_tuples_bounded(max(lo_t, Frac(0)), hi_t):
            if any(tup == u for u in used):
                continue
            if prev_block and lex_floor is not None and tup <= lex_floor:
                continue
            rec(part + 1, used + [tup], tup, acc + w[part] * ssum)

    rec(0, [], None, Frac(0))
    if len(_FACTOR_SUMS_MEMO) > 200000:
        _FACTOR_SUMS_MEMO.clear()
    _FACTOR_SUMS_MEMO[key] = out
    return out



def _canonical_single_slot(gens):
    """Normalize one-tuple one-slot factors: fold the weight into beta, then
    absorb q-powers of beta into kmin ((b*q^j, kmin) ~ (b, kmin-j))."""
    out = []
    for g in gens:
        if (len(g.factors) == 1 and len(g.factors[0].weights) == 1
                and g.factors[0].shape.r == 1):
            f = g.factors[0]
            b = f.shape.betas[0] * f.weights[0]
            q, kmin = f.shape.q, f.shape.kmin
            while b % q == 0 and b > 1:
                b //= q
                kmin -= 1
            out.append(Gen(g.coeff, g.base, (Factor(Shape((b,), q, kmin), (1,)),)))
        else:
            out.append(g)
    return out


def _merge_tails(elt: "PatternElt", e_ram: int) -> "PatternElt":
    """Merge single-slot family generators differing by pi^(multiple of e):
    pi^(j*e) F = p^j F in HW, so shifted copies collapse into one coefficient.
    Leading terms below a common kmin are split off as monomials first."""
    ring = elt.ring
    gens = _canonical_single_slot(elt.gens)
    singles: dict = {}
    rest = []
    for g in gens:
        if len(g.factors) == 1 and g.factors[0].weights == (1,) and g.factors[0].shape.r == 1:
            f = g.factors[0]
            singles.setdefault((f.shape.betas[0], f.shape.q), []).append(g)
        else:
            rest.append(g)
    merged = []
    for (b, q), group in singles.items():
        kstar = max(g.factors[0].shape.kmin for g in group)
        expanded = []
        for g in group:
            kmin = g.factors[0].shape.kmin
            for k in range(kmin, kstar):
                rest.append(Gen(g.coeff, g.base - Frac(b, q ** k), ()))
            expanded.append(Gen(g.coeff, g.base, (Factor(Shape((b,), q, kstar), (1,)),)))
        # merge by base residue mod e_ram
        by_residue: dict = {}
        for g in expanded:
            base0 = min(x.base for x in expanded
                        if (x.base - g.base).denominator == 1
                        and int(x.base - g.base) % e_ram == 0)
            key = base0
            off = int(g.base - base0)
            assert off % e_ram == 0 or True
            by_residue.setdefault(key, []).append((off, g.coeff))
        for base0, parts in by_residue.items():
            groups_by_r: dict = {}
            for off, c in parts:
                r = off % e_ram
                groups_by_r.setdefault(r, []).append((off, c))
            for r, offs in groups_by_r.items():
                total = ring.zero
                for off, c in offs:
                    scaled = c
                    for _ in range((off - r) // e_ram):
                        scaled = ring.mul_int(scaled, ring.p)
                    total = ring.add(total, scaled)
                if ring.val_p(total) is not None:
                    merged.append(Gen(total, base0 + r,
                                      (Factor(Shape((b,), q, kstar), (1,)),)))
    return PatternElt(ring, rest + merged)


@dataclass
class ValuationReport:
    value: Optional[Frac]        # exact valuation in pi-units, or None
    lower_bound: Frac            # certified lower bound (= value when exact)
    lead_class: Optional[Frac]
    kcap: int
    exact_root: bool = False

    @property
    def exact(self) -> bool:
        return self.value is not None


def hw_valuation(elt: PatternElt, vt_p, *, vmax, kcap: int = 20,
                 kcap_limit: int = 80, pwindow: int = 14) -> ValuationReport:
    """Valuation of the HW image of elt, in pi-exponent units (pure towers)."""
    ring = elt.ring
    vt_p = Frac(vt_p)
    e_ram = int(vt_p)
    if vt_p != e_ram or e_ram < 1:
        raise ValueError("vt_p must be a positive integer (pure tower)")
    vmax = Frac(vmax)
    elt = _merge_tails(elt, e_ram)

    while True:
        gens_w = []
        floor = None
        for gen in elt.gens:
            vp = ring.val_p(gen.coeff)
            if vp is None:
                continue
            w = vp * vt_p
            gens_w.append((gen, w))
            rf = _remainder_floor_gen(gen, kcap, w)
            if rf is not None and (floor is None or rf < floor):
                floor = rf
        if floor is None:
            floor = Frac(10 ** 9)

        classes: dict = {}
        for gen, w in gens_w:
            for exp, mult in _enumerate_gen_terms(gen, kcap, vmax, w).items():
                frac_part = exp - (exp.numerator // exp.denominator)
                cls = classes.setdefault(frac_part, {})
                cls[exp] = ring.add(cls.get(exp, ring.zero),
                                    ring.mul_int(gen.coeff, mult))

        candidates = []
        for frac_part, terms in classes.items():
            best = None
            base = None
            for exp, c in terms.items():
                vp = ring.val_p(c)
                if vp is None:
                    continue
                val = exp + vp * vt_p
                if best is None or val < best:
                    best = val
                if base is None or exp < base:
                    base = exp
            if best is not None and best <= vmax:
                candidates.append((best, frac_part, base))

        # a completed class value never drops below its enumerated estimate,
        # so completing in ascending rough order allows an early exit
        candidates.sort()
        best_val = None
        best_class = None
        for rough, frac_part, base_exp in candidates:
            if best_val is not None and rough >= best_val:
                break
            win = int((vmax - base_exp) / vt_p) + 3
            window = _complete_class(gens_w, frac_part, base_exp,
                                     base_exp + e_ram * win, ring)
            val = _class_value(window, ring, vt_p, e_ram)
            if val is not None and (best_val is None or val < best_val):
                best_val = val
                best_class = frac_part

        if best_val is not None and best_val < floor and best_val <= vmax:
            return ValuationReport(best_val, best_val, best_class, kcap)
        if kcap >= kcap_limit:
            bound = floor if best_val is None else min(best_val, floor)
            return ValuationReport(None, min(bound, vmax), None, kcap)
        kcap *= 2


def _class_value(window: dict, ring, vt_p: Frac, e_ram: int) -> Optional[Frac]:
    """min over residues r of (base + r + vt_p * v_p(subsum_r)) for a completed class."""
    if not window:
        return None
    base = min(window)
    subsums: dict = {}
    for exp, c in window.items():
        n = int(exp - base)
        r, j = n % e_ram, n // e_ram
        cur = subsums.setdefault(r, {})
        cur[j] = ring.add(cur.get(j, ring.zero), c)
    best = None
    for r, js in subsums.items():
        total = ring.zero
        for j, c in js.items():
            scaled = c
            for _ in range(j):
                scaled = ring.mul_int(scaled, ring.p)
            total = ring.add(total, scaled)
        vp = ring.val_p(total)
        if vp is None:
            continue
        val = base + r + vp * vt_p
        if best is None or val < best:
            best = val
    return best
