from fractions import Fraction as F

import pytest

from hahnwitt.tails import (
    Factor, Gen, PatternElt, Shape, TowerW, ZW, frobenius_step, hw_valuation,
    ladder_witness, torsion_value_at_ladder,
)
from hahnwitt.tower import LocalTower, TowerSpec


def test_partition_power_matches_brute_force():
    # (sum over 0<k of t^(1 - 2^-k))^2, truncated small, vs direct expansion
    ring = ZW(2)
    z = ladder_witness(ring, 2, 2)  # F(1, 1) for q = 2
    sq = z.power(2)
    # brute force over k <= 6
    terms = {}
    for k in range(1, 7):
        for l in range(1, 7):
            e = F(2) - F(1, 2 ** k) - F(1, 2 ** l)
            terms[e] = terms.get(e, 0) + 1
    got = {}
    from hahnwitt.tails import _enumerate_gen_terms
    for g in sq.gens:
        vp = ring.val_p(g.coeff)
        for exp, mult in _enumerate_gen_terms(g, 6, F(100), F(0)).items():
            got[exp] = got.get(exp, 0) + g.coeff * mult
    assert got == {e: c for e, c in terms.items()}


def test_telescope_step_q2():
    # f(z_2) = z_1 + 2 * (crosses): the pi-linear family cancels symbolically
    ring = ZW(2)
    z = ladder_witness(ring, 2, 2)
    x = frobenius_step(z, 2, F(10), F(1))
    mono = [g for g in x.gens if not g.factors]
    assert len(mono) == 1 and mono[0].base == F(1) and mono[0].coeff == 1
    for g in x.gens:
        if g.factors:
            assert ring.val_p(g.coeff) >= 1  # all remaining gens are p-heavy


@pytest.mark.parametrize("p,q,e,n,expected", [
    (2, 2, 1, 2, F(9, 4)),    # v(g_2(z_2)) over Q_2
    (3, 3, 1, 2, F(20, 9)),   # v(g_2(z_2)) over Q_3
    (2, 2, 2, 2, F(13, 4)),   # v(g_2(z_2)) over Q_2(sqrt 2), pi-units
    (2, 2, 1, 3, F(9, 4)),    # v(g_3(z_3)) over Q_2: fails the n = 3 bound
    (2, 2, 4, 4, F(21, 4)),   # v(g_4(z_4)) over Q_2(2^(1/4))
    (3, 3, 3, 3, F(38, 9)),   # v(g_3(z_3)) over Q_3(3^(1/3))
])
def test_ladder_values_frozen(p, q, e, n, expected):
    margin = F(1, 2) if (q, n) == (2, 3) else F(3, 2)
    rep = torsion_value_at_ladder(p, q, e, n, margin=margin)
    assert rep.exact, (p, q, e, n, rep)
    assert rep.value == expected


def test_ladder_n1_exact_root():
    rep = torsion_value_at_ladder(2, 2, 1, 1)
    assert rep.exact_root


def test_sqrt_minus_one_digit_certificate():
    # y = z_2 + [a] 2 with a^2 + a + 1 = 0 in F_4: v(y^2 + 2y + 2) = 9/4,
    # certifying the digit a at exponent 1 of the 4-torsion point zeta_4 - 1
    tower = LocalTower(TowerSpec.mixed(2, 40, [("unramified", 2)], k_index=0))
    ring = TowerW(tower)
    a = tower.teichmuller(tower.res_field.gen)
    z2 = ladder_witness(ring, 2, 2)
    z2 = PatternElt(ring, [Gen(ring.one, g.base, g.factors) for g in z2.gens])
    y = z2 + PatternElt.monomial(ring, a, 1)
    g_of_y = (y.power(2) + y.scale_int(2).shift(0) + PatternElt.monomial(ring, ring.one, 0).scale_int(2))
    # g(X) = X^2 + 2X + 2; represent 2 as coefficient 2 at exponent 0
    rep = hw_valuation(g_of_y, 1, vmax=F(4))
    assert rep.exact
    assert rep.value == F(9, 4)


def test_sqrt_minus_one_wrong_digit_fails():
    # with digit 1 (in F_2) at exponent 1 the valuation stays at 2
    tower = LocalTower(TowerSpec.mixed(2, 40, [("unramified", 2)], k_index=0))
    ring = TowerW(tower)
    z2 = ladder_witness(ring, 2, 2)
    z2 = PatternElt(ring, [Gen(ring.one, g.base, g.factors) for g in z2.gens])
    y = z2 + PatternElt.monomial(ring, ring.one, 1)
    g_of_y = (y.power(2) + y.scale_int(2) + PatternElt.monomial(ring, ring.one, 0).scale_int(2))
    rep = hw_valuation(g_of_y, 1, vmax=F(4))
    assert rep.exact and rep.value == F(2)


def test_sqrt_one_plus_sqrt2_certificate():
    # y = 1 + A + B with A at 1 - 3*2^-n (n >= 2), B at 1 - 2^-n (n >= 4):
    # v(y^2 - 1 - 2^(1/2)) = 33/16 > 2 certifies the display through exponent 1,
    # including the zero digit at exponent 1
    ring = ZW(2)
    one = PatternElt.monomial(ring, 1, 0)
    a_fam = PatternElt.family(ring, 1, 1, (3,), 2, kmin=2)
    b_fam = PatternElt.family(ring, 1, 1, (1,), 2, kmin=4)
    y = one + a_fam + b_fam
    h = y.power(2) - one - PatternElt.monomial(ring, 1, F(1, 2))
    rep = hw_valuation(h, 1, vmax=F(3))
    assert rep.exact
    assert rep.value == F(33, 16)
