"""Reproduction suite and certificate generation.

The trust anchor is finite and machine-checkable: a witness y with digits in
F_q and v(g_n(y)) > n v(pi) certifies can_K(pi) = -pi mod pi^(n+1) through the
torsion-point criterion.  Ladder witnesses are evaluated exactly by the tail
engine; when the direct bound falls short, the certificate descends a chain of
ramified levels K_j = Q_p(p^(1/p^j)) through the wild-norm containment, whose
hypotheses are re-checked numerically at every step.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .fq import FqElem, FqField
from .hahn import FqRing, HahnSeries, frobenius_power
from .hw import HWContext, find_roots
from .lubintate import lt_log, lt_torsion_poly
from .tails import torsion_value_at_ladder
from .tower import AtLeast, LocalTower, TowerSpec

Frac = Fraction


class VerificationError(AssertionError):
    """A reproduction check failed (digit mismatch or bound violation)."""


class BudgetExhausted(RuntimeError):
    """Raised when precision/denominator budgets cannot certify the target."""


# ---------------------------------------------------------------------------
# main-theorem certificates

@dataclass
class ChainStep:
    level: int              # j: the witness/statement lives over K_j = Q_p(p^(1/p^j))
    n_level: int            # target exponent at this level
    lemma_k: Optional[int]  # norm-containment parameter for the descent into this level
    note: str = ""


@dataclass
class CanCertificate:
    p: int
    q: int
    n: int
    witness_level: int            # ladder witness evaluated over K_(witness_level)
    witness_n: int
    witness_kind: str             # "exact-root" | "ladder"
    v_gn: Optional[Frac]          # exact v_pi(g_wn(z_wn)) when computed, pi-units
    v_gn_bound: Frac              # certified lower bound (= v_gn when exact)
    v_gn_normalized: Optional[Frac]  # exact value in v(p) = 1 units
    threshold: Frac               # the bound that was exceeded (pi-units)
    chain: list = field(default_factory=list)
    witness_digits: list = field(default_factory=list)

    @property
    def conclusion(self) -> str:
        return f"can_Q{self.p}({self.p}) = -{self.p} mod {self.p}^{self.n + 1}"

    @property
    def u_p_statement(self) -> str:
        return f"u_{self.p} = -1 mod {self.p}^{self.n + 1}"

    def to_json(self) -> dict:
        return {
            "K": f"Q_{self.p}", "pi": str(self.p), "q": self.q, "n": self.n,
            "witness": {
                "kind": self.witness_kind,
                "level": self.witness_level,
                "n_level": self.witness_n,
                "pattern": {"base": f"1/{self.q - 1}", "indices": self.witness_n - 1,
                            "ratio": self.q},
                "digits": self.witness_digits,
            },
            "v_gn": None if self.v_gn is None else str(self.v_gn),
            "v_gn_bound": str(self.v_gn_bound),
            "v_gn_normalized": None if self.v_gn_normalized is None else str(self.v_gn_normalized),
            "threshold": str(self.threshold),
            "chain": [{"level": s.level, "n": s.n_level, "lemma_k": s.lemma_k,
                       "note": s.note} for s in self.chain],
            "conclusion": self.conclusion,
        }


@dataclass
class CanFailure:
    p: int
    n: int
    best_bounds: list  # (level, n_level, bound or value)
    message: str


def _ladder_digit_display(q: int, n: int, count: int = 6) -> list:
    """Leading exponents of the ladder witness z_n, for certificate display."""
    import itertools
    if n == 1:
        return [{"exp": f"1/{q - 1}", "coeff": "1"}]
    exps = []
    for combo in itertools.combinations(range(1, count + n), n - 1):
        e = Frac(1, q - 1) - sum(Frac(1, q ** k) for k in combo)
        exps.append(e)
    exps.sort()
    return [{"exp": str(e), "coeff": "1"} for e in exps[:count]]


def _descent_hypotheses_ok(p: int, level: int, n_here: int, n_up: int) -> bool:
    """Norm-containment hypotheses for descending K_(level+1) -> K_(level):
    n_here <= k = n_up and (n_here - k/p) v(pi_level) <= v(p) = 1."""
    if n_here > n_up:
        return False
    v_pi = Frac(1, p ** level)
    return (n_here - Frac(n_up, p)) * v_pi <= 1


def certify_can(p: int, n: int, q: Optional[int] = None, max_level: int = 5):
    """Certificate that can_{Q_p}(p) = -p mod p^(n+1), i.e. u_p = -1 mod p^(n+1).

    Tries the ladder witness z_(n_j) over K_j = Q_p(p^(1/p^j)) for
    j = 0, 1, ...; the first level whose witness valuation strictly exceeds
    n_j yields a certificate, descended back to Q_p step by step.
    Returns a CanCertificate or a CanFailure (which never disproves anything:
    it only records exhausted budgets).
    """
    q = q or p
    levels = []  # (j, n_j)
    n_j = n
    bounds = []
    for j in range(max_level + 1):
        levels.append((j, n_j))
        if n_j < 1:
            break
        rep = torsion_value_at_ladder(p, q, p ** j, n_j, margin=Frac(1, 2))
        threshold = Frac(n_j)
        if rep.exact_root or (rep.exact and rep.value > threshold) or \
                (not rep.exact and rep.lower_bound > threshold):
            v = None if rep.exact_root else (rep.value if rep.exact else None)
            bound = rep.lower_bound if not rep.exact_root else Frac(10 ** 9)
            chain = []
            n_here = n_j
            for back in range(j, 0, -1):
                # statement at level `back` descends to level `back - 1`
                lvl_lo = back - 1
                n_lo = next(nn for (jj, nn) in levels if jj == lvl_lo)
                if not _descent_hypotheses_ok(p, lvl_lo, n_lo, n_here):
                    raise AssertionError("descent hypotheses violated; chain invalid")
                chain.append(ChainStep(lvl_lo, n_lo, lemma_k=n_here,
                                       note="norm containment with k = "
                                            f"{n_here}, n = {n_lo}"))
                n_here = n_lo
            return CanCertificate(
                p=p, q=q, n=n,
                witness_level=j, witness_n=n_j,
                witness_kind="exact-root" if rep.exact_root else "ladder",
                v_gn=v,
                v_gn_bound=bound,
                v_gn_normalized=None if v is None else v / p ** j,
                threshold=threshold,
                chain=chain,
                witness_digits=_ladder_digit_display(q, n_j),
            )
        bounds.append((j, n_j, rep.value if rep.exact else rep.lower_bound))
        n_j = p * n_j - p ** (j + 1)
    return CanFailure(p, n, bounds,
                      "budget exhausted; raise max_level (this does not "
                      "disprove the congruence)")


def revalidate_certificate(doc: dict) -> bool:
    """Re-run the witness evaluation and descent checks from serialized form."""
    p = int(doc["pi"])
    q = doc["q"]
    w = doc["witness"]
    j, n_j = w["level"], w["n_level"]
    rep = torsion_value_at_ladder(p, q, p ** j, n_j, margin=Frac(1, 2))
    threshold = Frac(str(doc["threshold"]))
    if w["kind"] == "exact-root":
        if not rep.exact_root:
            return False
    elif doc["v_gn"] is not None:
        stated = Frac(str(doc["v_gn"]))
        if not (rep.exact and rep.value == stated and rep.value > threshold):
            return False
    else:
        if rep.exact_root or not rep.lower_bound > threshold:
            return False
    n_here = n_j
    for step in doc["chain"]:
        if not _descent_hypotheses_ok(p, step["level"], step["n"], n_here):
            return False
        n_here = step["n"]
    return n_here == doc["n"]


# ---------------------------------------------------------------------------
# section-3 style digit reproductions

def _wilson_quotient(p: int) -> int:
    return ((1 + math.factorial(p - 1)) // p) % p


def _choose_a(p: int) -> FqElem:
    """Lex-minimal a in F_{p^2} with a^(p-1) = -1 (p odd) or a^2 + a = 1 (p = 2)."""
    fld = FqField.make(p, 2)
    for a in fld.elements():
        if a.is_zero():
            continue
        if p == 2:
            if a * a + a == fld.one:
                return a
        elif a ** (p - 1) == -fld.one:
            return a
    raise AssertionError("no qualifying element a found")


def _factorial_digit(fld: FqField, a: FqElem, i: int, minus: bool) -> FqElem:
    """[(+-a)^i / i!] as an element of the residue field."""
    base = (-a) if minus else a
    num = base ** i
    den = fld.elem([math.factorial(i) % fld.p])
    return num / den


@dataclass
class DigitMatch:
    exp: Frac
    expected: str
    got: str
    ok: bool


@dataclass
class Section3Report:
    p: int
    a_choice: str
    checks: list
    matched_root_index: Optional[int] = None
    pattern_bounds: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "p": self.p, "a": self.a_choice, "ok": self.ok,
            "matched_root": self.matched_root_index,
            "pattern_bounds": {k: str(v) for k, v in self.pattern_bounds.items()},
            "checks": [{"exp": str(c.exp), "expected": c.expected,
                        "got": c.got, "ok": c.ok} for c in self.checks],
        }


def _match_digits(elem, targets, checks: list) -> None:
    for e, expected in targets:
        got = elem.digit_at(e)
        checks.append(DigitMatch(Frac(e), expected.render(), got.render(),
                                 got == expected))


def reproduce_root_of_unity(p: int, prec: int = 4) -> Section3Report:
    """The primitive p-th root of unity digit display, p odd.

    Computes zeta_p as a root of 1 + X + ... + X^(p-1) in the context
    (q = p, m = 2, d = p - 1) and matches digits through exponent p/(p-1):
    [a^i/i!] at i/(p-1) and [a (1+(p-1)!)/p] at p/(p-1); also checks
    zeta^p = 1 to precision 3.
    """
    if p == 2:
        raise ValueError("use reproduce_p2 for p = 2")
    ctx = HWContext(TowerSpec.mixed(p, 16), 2, p - 1, prec)
    fld = ctx.res_field
    a = _choose_a(p)
    coeffs = [ctx.one() for _ in range(p)]
    roots = [r for r in find_roots(coeffs) if r.certified]
    targets = [(Frac(i, p - 1), _factorial_digit(fld, a, i, minus=False))
               for i in range(p)]
    targets.append((Frac(p, p - 1), a * fld.elem([_wilson_quotient(p)])))
    report = Section3Report(p, a.render(), [])
    matched = None
    for idx, r in enumerate(roots):
        if r.elem.digit_at(Frac(1, p - 1)) == a:
            matched = idx
            break
    if matched is None:
        report.checks.append(DigitMatch(Frac(1, p - 1), a.render(), "<no root>", False))
        return report
    report.matched_root_index = matched
    root = roots[matched].elem
    _match_digits(root, targets, report.checks)
    power = root ** p
    diff = power - ctx.one()
    v = diff.valuation()
    ok = isinstance(v, AtLeast) and v.bound >= 3 or (not isinstance(v, AtLeast) and v >= 3)
    report.checks.append(DigitMatch(Frac(0), "zeta^p = 1 mod p^3",
                                    str(v), ok))
    return report


def reproduce_prime_square_root(p: int = 3, n_max: Optional[int] = None) -> Section3Report:
    """The p^2-nd root of unity display through exponent 1/(p-1), p = 3.

    Digit search at denominator d = 2 p^(n_max+... ) covers the tail terms
    [-a] p^(1/(p-1) - p^-n) for n = 2..n_max; the zero digit at 1/(p-1) is
    certified separately by the tail engine on the displayed pattern.
    """
    if p != 3:
        raise ValueError("configured for p = 3 at desk scale")
    n_max = n_max or 3
    d = 2 * p ** n_max  # covers 1/(p(p-1)) and the tail denominators
    ctx = HWContext(TowerSpec.mixed(p, 24), 2, d, Frac(3, 2))
    fld = ctx.res_field
    a = _choose_a(p)
    # Phi_9 = X^6 + X^3 + 1
    coeffs = [ctx.zero() for _ in range(7)]
    coeffs[0] = ctx.one()
    coeffs[3] = ctx.one()
    coeffs[6] = ctx.one()
    results = find_roots(coeffs)
    targets = [(Frac(i, p * (p - 1)), _factorial_digit(fld, a, i, minus=True))
               for i in range(p)]
    for nn in range(2, n_max + 1):
        targets.append((Frac(1, p - 1) - Frac(1, p ** nn), -a))
    report = Section3Report(p, a.render(), [])
    matched = None
    for idx, r in enumerate(results):
        if all(r.elem.digit_at(e) == c for e, c in targets):
            matched = idx
            break
    if matched is None:
        for e, c in targets:
            best = results[0].elem if results else None
            report.checks.append(DigitMatch(
                e, c.render(), best.digit_at(e).render() if best else "<none>", False))
        return report
    report.matched_root_index = matched
    _match_digits(results[matched].elem, targets, report.checks)
    report.pattern_bounds["v_phi9_at_display"] = _zeta9_pattern_bound(p)
    ok = report.pattern_bounds["v_phi9_at_display"] > 2
    report.checks.append(DigitMatch(Frac(1, 2), "0 (certified via tail pattern)",
                                    "0" if ok else "uncertified", ok))
    return report


def _zeta9_pattern_bound(p: int = 3) -> Frac:
    """v(Phi_9(y)) for the displayed pattern y; > 2 certifies digits through 1/2."""
    from .tails import Gen, PatternElt, TowerW
    tower = LocalTower(TowerSpec.mixed(p, 48, [("unramified", 2)], k_index=0))
    ring = TowerW(tower)
    fld = tower.res_field
    a = _choose_a(p)
    y = PatternElt(ring, [])
    for i in range(p):
        digit = _factorial_digit(fld, a, i, minus=True)
        y = y + PatternElt.monomial(ring, tower.teichmuller(digit), Frac(i, p * (p - 1)))
    minus_a_t = tower.teichmuller(-a)
    y = y + PatternElt.family(ring, minus_a_t, Frac(1, p - 1), (1,), p, kmin=2)
    phi = y.power(6) + y.power(3) + PatternElt.monomial(ring, ring.one, 0)
    from .tails import hw_valuation
    rep = hw_valuation(phi, 1, vmax=Frac(3))
    if not rep.exact:
        return rep.lower_bound
    return rep.value


def reproduce_p2(prec_d: int = 16) -> Section3Report:
    """p = 2 displays: the 4-torsion point of X^2+2X+2 (the sqrt(-1) display)
    and sqrt(1 + sqrt 2), including the exponent-1 digits via tail certificates."""
    from .tails import Gen, PatternElt, TowerW, ZW, hw_valuation, ladder_witness
    report = Section3Report(2, "g", [])
    f4 = FqField.make(2, 2)
    a = _choose_a(2)
    report.a_choice = a.render()

    # --- digits of the 4-torsion point (the sqrt(-1) display): DFS part
    ctx = HWContext(TowerSpec.mixed(2, 24), 2, prec_d, Frac(3, 2))
    g2_plus = [ctx.from_int(2), ctx.from_int(2), ctx.one()]
    res = find_roots(g2_plus)
    walls = [r for r in res if r.digits]
    target_exps = [Frac(2 ** k - 1, 2 ** k) for k in range(1, 5)]
    best = None
    for r in walls:
        if all(r.elem.digit_at(e) == ctx.res_field.one for e in target_exps):
            best = r
            break
    for e in target_exps:
        got = best.elem.digit_at(e).render() if best else "<none>"
        report.checks.append(DigitMatch(e, "1", got, best is not None))

    # --- the digit a at exponent 1, via the tail certificate
    tower = LocalTower(TowerSpec.mixed(2, 48, [("unramified", 2)], k_index=0))
    ring = TowerW(tower)
    at = tower.teichmuller(a)
    z2 = ladder_witness(ring, 2, 2)
    y = z2 + PatternElt.monomial(ring, at, 1)
    gval = (y.power(2) + y.scale_int(2)
            + PatternElt.monomial(ring, ring.one, 0).scale_int(2))
    rep = hw_valuation(gval, 1, vmax=Frac(4))
    report.pattern_bounds["v_g2plus_with_digit_a"] = rep.value if rep.exact else rep.lower_bound
    ok = rep.exact and rep.value == Frac(9, 4)
    report.checks.append(DigitMatch(
        Frac(1), f"[{a.render()}] (v(g(y)) = 9/4 > 2 certifies digits through 5/4)",
        str(rep.value) if rep.exact else "uncertified", ok))
    # the wrong-digit control: digit 1 at exponent 1 keeps v = 2
    y_bad = z2 + PatternElt.monomial(ring, ring.one, 1)
    gbad = (y_bad.power(2) + y_bad.scale_int(2)
            + PatternElt.monomial(ring, ring.one, 0).scale_int(2))
    rep_bad = hw_valuation(gbad, 1, vmax=Frac(4))
    report.checks.append(DigitMatch(
        Frac(1), "control: digit 1 gives v = 2 exactly",
        str(rep_bad.value) if rep_bad.exact else "?", rep_bad.value == Frac(2)))

    # --- sqrt(1 + sqrt 2): DFS digits below 1
    ctx2 = HWContext(TowerSpec.mixed(2, 24), 1, prec_d, Frac(3, 2))
    sqrt2 = ctx2.pi(Frac(1, 2))
    target = ctx2.one() + sqrt2
    res2 = find_roots([-target, ctx2.zero(), ctx2.one()])
    exps2 = [Frac(0), Frac(1, 4), Frac(5, 8), Frac(13, 16), Frac(15, 16)]
    best2 = None
    for r in res2:
        if r.digits and all(r.elem.digit_at(e) == ctx2.res_field.one for e in exps2):
            best2 = r
            break
    for e in exps2:
        got = best2.elem.digit_at(e).render() if best2 else "<none>"
        report.checks.append(DigitMatch(e, "1", got, best2 is not None))

    # --- the zero digit at exponent 1, via the tail certificate
    zring = ZW(2)
    one = PatternElt.monomial(zring, 1, 0)
    a_fam = PatternElt.family(zring, 1, 1, (3,), 2, kmin=2)
    b_fam = PatternElt.family(zring, 1, 1, (1,), 2, kmin=4)
    ydisp = one + a_fam + b_fam
    h = ydisp.power(2) - one - PatternElt.monomial(zring, 1, Frac(1, 2))
    rep2 = hw_valuation(h, 1, vmax=Frac(3))
    report.pattern_bounds["v_sqrt_1_plus_sqrt2"] = rep2.value if rep2.exact else rep2.lower_bound
    ok2 = rep2.exact and rep2.value == Frac(33, 16)
    report.checks.append(DigitMatch(
        Frac(1), "0 (v(h(y)) = 33/16 > 2 certifies digits through 17/16)",
        str(rep2.value) if rep2.exact else "uncertified", ok2))
    return report


def nested_radical_membership(depth: int) -> dict:
    """Membership of the depth-k radical sqrt(2 + sqrt(2 + ...)) in HW(F_2).

    The depth-k radical is the trace of a primitive 2^(k+2)-nd root of unity,
    fixed by the canonical automorphism iff u_2 = -1 mod 2^(k+2), which is the
    n = k + 1 certificate.
    """
    n = depth + 1
    cert = certify_can(2, n)
    ok = isinstance(cert, CanCertificate)
    return {"depth": depth, "requires": f"u_2 = -1 mod 2^{depth + 2}",
            "certified": ok,
            "certificate": cert.to_json() if ok else None}


# ---------------------------------------------------------------------------
# equal characteristic: explicit torsion roots

def char_p_ladder(field: FqField, q: int, n: int, kmax: int) -> HahnSeries:
    """y_n index-truncated at kmax: the exact finite sum over tuples
    0 < k_1 < ... < k_(n-1) <= kmax.  (Exponent truncation cannot work here:
    the support accumulates below every order, so the honest parameter is the
    index bound, and identities hold exactly below 1 + min-exponent.)"""
    import itertools
    ring = FqRing(field)
    if n == 1:
        return HahnSeries(ring, [(Frac(1, q - 1), field.one)])
    terms = {}
    for combo in itertools.combinations(range(1, kmax + 1), n - 1):
        e = Frac(1, q - 1) - sum(Frac(1, q ** k) for k in combo)
        terms[e] = field.one
    return HahnSeries(ring, terms.items())


@dataclass
class CharPReport:
    q: int
    n: int
    f_identity_ok: bool
    g_root_ok: bool
    leading_ok: bool
    window: Frac  # identities verified for exponents strictly below this

    @property
    def ok(self) -> bool:
        return self.f_identity_ok and self.g_root_ok and self.leading_ok


def char_p_roots(q: int, n: int, kmax: int = 8) -> CharPReport:
    """f(y_n) = y_(n-1), g_n(y_n) = 0 and the leading exponent over F_q((pi^Q)).

    With indices truncated at kmax, f(y_n^(K)) - y_(n-1)^(K-1) consists purely
    of boundary terms with exponent at least 1 + minexp + q^(1-n) - q^(-K), so
    both identities are exact below the window 1 + minexp(y_n); that window
    covers the entire support of y_(n-1)."""
    p = 2
    while q % p:
        p += 1
    deg = 0
    qq = q
    while qq > 1:
        qq //= p
        deg += 1
    field = FqField.make(p, deg)
    ring = FqRing(field)
    t = HahnSeries(ring, [(Frac(1), field.one)])

    def f_apply(x: HahnSeries) -> HahnSeries:
        return frobenius_power(x, q) - t * x

    y_n = char_p_ladder(field, q, n, kmax)
    lead = Frac(1, q ** n - q ** (n - 1))
    lead_ok = y_n.min_exp() == lead
    window = 1 + lead
    if n == 1:
        fy = f_apply(y_n)
        return CharPReport(q, n, fy.is_zero(), True, lead_ok, window)
    y_prev = char_p_ladder(field, q, n - 1, kmax - 1)
    fy = f_apply(y_n)
    diff = fy - y_prev
    ident_ok = all(e >= window for e, _ in diff.terms)
    # g_n(y_n) = (f^[n-1](y_n))^(q-1) - t: zero below the level-2 window.
    # Boundary terms of the iterate cannot reach below the window in the
    # (q-1)-st power unless every factor sits below window - (q-2) minexp,
    # so the iterate is truncated there first (the order propagation then
    # caps the product at exactly the window).
    x = y_n
    for _ in range(n - 1):
        x = f_apply(x)
    g_window = 1 + Frac(1, q * q - q)
    if q > 2:
        x = x.truncate(g_window - (q - 2) * Frac(1, q - 1))
    g_val = x ** (q - 1) - t
    g_ok = all(e >= g_window for e, _ in g_val.terms)
    return CharPReport(q, n, ident_ok, g_ok, lead_ok, window)


# ---------------------------------------------------------------------------
# ramified instances and norm checks

@dataclass
class Lemma72Report:
    p: int
    q: int
    m: int
    value_pi_units: Optional[Frac]
    value_normalized: Optional[Frac]
    threshold_normalized: Frac = Frac(1)

    @property
    def ok(self) -> bool:
        return self.value_normalized is not None and \
            self.value_normalized > self.threshold_normalized

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "m": self.m,
                "v_gm_zm": str(self.value_pi_units),
                "v_gm_zm_p_units": str(self.value_normalized),
                "bound": "> 1", "ok": self.ok}


def lemma72_check(p: int, m: int, q: Optional[int] = None) -> Lemma72Report:
    """v(g_m(z_m)) > m v(pi) = 1 (v(p) = 1 units) for K = Q_p(p^(1/m))."""
    q = q or p
    rep = torsion_value_at_ladder(p, q, m, m)
    if rep.exact_root:
        return Lemma72Report(p, q, m, None, Frac(10 ** 9))
    if not rep.exact:
        return Lemma72Report(p, q, m, None, None)
    return Lemma72Report(p, q, m, rep.value, rep.value / m)


@dataclass
class NormCheckReport:
    p: int
    e_K: int
    n: int
    k: int
    samples: int
    failures: int
    exact_minus_pi_ok: bool
    exact_unit_ok: bool

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.exact_minus_pi_ok and self.exact_unit_ok


def norm_checks(p: int, n: int, k: int, e_K: int = 1, samples: int = 100,
                seed: int = 0) -> NormCheckReport:
    """Wild norm containment Nm(1 + pi^(k/p) O_K') in 1 + pi^n O_K, sampled,
    plus the exact identities Nm(-pi^(1/p)) = -pi and
    Nm(1 - [a] pi^(m/p)) = 1 - [a^p] pi^m for p not dividing m."""
    if n > k or (n - Frac(k, p)) * Frac(1, e_K) > 1:
        raise ValueError("hypotheses n <= k and (n - k/p) v(pi) <= v(p) violated")
    kstages = [("eisenstein_pure", e_K)] if e_K > 1 else []
    spec = TowerSpec.mixed(p, 14 + k, list(kstages) + [("eisenstein_pure", p)],
                           k_index=len(kstages))
    t = LocalTower(spec)
    g = t.uniformizer()
    rng = random.Random(seed)
    failures = 0
    exp = Frac(k, p) * Frac(t.e_abs, e_K)
    assert exp.denominator == 1
    for _ in range(samples):
        u = t.rand_elem(rng)
        x = t.one() + g ** int(exp) * u
        nm = t.norm_down(x)
        diff = nm - nm.tower.one()
        v = diff.valuation_abs()
        bound = v.bound if isinstance(v, AtLeast) else v
        if bound < n * Frac(1, e_K):
            failures += 1
    nm_minus = t.norm_down(-t.gen())
    sub = nm_minus.tower
    exact1 = (nm_minus + sub.uniformizer()).is_zero_at_cap()
    # Nm(1 - [a] pi^(m/p)) = 1 - [a^p] pi^m for p coprime to m
    m_exp = next(m for m in range(1, 2 * p + 2) if m % p)
    a = t.res_field.gen if t.res_field.deg > 1 else t.res_field.elem([1])
    lhs = t.norm_down(t.one() - t.teichmuller(a) * t.gen() ** m_exp)
    rhs = sub.one() - sub.teichmuller(a ** p) * sub.uniformizer() ** m_exp
    exact2 = (lhs - rhs).is_zero_at_cap()
    return NormCheckReport(p, e_K, n, k, samples, failures, exact1, exact2)


# ---------------------------------------------------------------------------
# logarithm zeros

@dataclass
class LogZeroReport:
    q: int
    degree: int
    found: int
    smallest_valuation: Optional[Frac]
    digits_in_base_field: bool
    agreement_note: str = ""

    @property
    def ok(self) -> bool:
        return self.found > 0 and self.digits_in_base_field


def log_zero_check(q: int = 2, p: int = 2, degree: int = 4,
                   denom: int = 16) -> LogZeroReport:
    """Zeros of the truncated logarithm x - x^q/pi + x^(q^2)/pi^2 - ...:
    the smallest-positive-valuation zero has all digits in F_q at the
    computed precision."""
    coeffs_frac = lt_log(q, p, degree)
    scale = max(c.denominator for c in coeffs_frac if c)
    ints = [int(c * scale) for c in coeffs_frac]
    # drop the root at 0: divide by x
    assert ints[0] == 0
    ints = ints[1:]
    ctx = HWContext(TowerSpec.mixed(p, 24), 2, denom, Frac(2))
    coeffs = [ctx.from_int(c) for c in ints]
    res = find_roots(coeffs)
    res = [r for r in res if r.digits]
    if not res:
        return LogZeroReport(q, degree, 0, None, False)
    vals = sorted(set(r.elem.valuation() for r in res))
    smallest = vals[0]
    small_roots = [r for r in res if r.elem.valuation() == smallest]
    in_base = all(r.elem.in_subfield(1) for r in small_roots)
    note = ("digits certified up to the truncation-agreement bound; "
            f"{len(small_roots)} root(s) on the smallest-valuation branch")
    return LogZeroReport(q, degree, len(res), smallest, in_base, note)
