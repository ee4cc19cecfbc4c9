import random
from fractions import Fraction as F

import pytest

from hahnwitt.fq import FqField
from hahnwitt.hahn import INF, FqRing, HahnSeries, ZModPN, divide_by_t_minus_r, eq_mod, is_null_series


def test_add_identity_and_mul_identity():
    ring = ZModPN(2, 10)
    f = HahnSeries(ring, [(F(1, 2), 1), (F(3, 4), 3)])
    zero = HahnSeries.zero(ring)
    one = HahnSeries.monomial(ring, 1, 0)
    assert f + zero == f
    assert f * one == f


def test_char2_square_kills_cross_terms():
    ring = FqRing(FqField.make(2, 1))
    one = ring.one
    f = HahnSeries(ring, [(F(1, 2), one), (F(3, 4), one)])
    sq = f * f
    assert sq.support() == (F(1), F(3, 2))


def test_telescoping_product():
    ring = ZModPN(5, 8)
    k = 6
    f = HahnSeries(ring, [(0, 1), (1, ring.neg(1))])
    g = HahnSeries(ring, [(i, 1) for i in range(k + 1)])
    prod = f * g
    assert prod.support() == (F(0), F(k + 1))
    assert prod.coeff_at(0) == 1 and prod.coeff_at(k + 1) == ring.neg(1)


def test_truncation_order_propagation():
    ring = ZModPN(2, 10)
    f = HahnSeries(ring, [(F(1, 2), 1)], order=F(3))
    g = HahnSeries(ring, [(F(1), 1)], order=F(2))
    assert (f + g).order == F(2)
    assert (f * g).order == min(F(3) + 1, F(2) + F(1, 2))


def test_ring_mismatch_raises():
    a = HahnSeries(ZModPN(2, 5), [(0, 1)])
    b = HahnSeries(ZModPN(3, 5), [(0, 1)])
    with pytest.raises(ValueError):
        a + b


def test_null_series_examples():
    ring = ZModPN(3, 8)
    p = 3
    f = HahnSeries(ring, [(0, p), (1, ring.neg(1))])
    assert is_null_series(f, p, 6)
    g = HahnSeries(ring, [(0, 1)])
    assert not is_null_series(g, p, 6)
    h = HahnSeries(ring, [(0, p * p), (2, ring.neg(1))])
    assert is_null_series(h, p, 6)


def test_divide_examples():
    ring = ZModPN(5, 8)
    p = 5
    f = HahnSeries(ring, [(0, p), (1, ring.neg(1))])
    q = divide_by_t_minus_r(f, p, 6)
    assert q.support() == (F(0),)
    assert q.coeff_at(0) == ring.neg(1)
    # (t - p) * (-1) = p - t
    t_minus_p = HahnSeries(ring, [(0, ring.neg(p)), (1, 1)])
    assert eq_mod(t_minus_p * q, f, 6)

    h = HahnSeries(ring, [(0, p * p), (2, ring.neg(1))])
    qh = divide_by_t_minus_r(h, p, 6)
    assert qh.coeff_at(1) == ring.neg(1) and qh.coeff_at(0) == ring.neg(p)
    assert eq_mod(t_minus_p * qh, h, 6)

    z = HahnSeries.zero(ring)
    assert divide_by_t_minus_r(z, p, 6).is_zero()


def test_divide_rejects_non_null():
    ring = ZModPN(2, 8)
    f = HahnSeries(ring, [(0, 1), (1, 1)])
    with pytest.raises(ValueError):
        divide_by_t_minus_r(f, 2, 6)


def rand_series(ring, rng, max_terms=5, denom=4):
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        e = F(rng.randrange(-4 * denom, 8 * denom), denom)
        terms[e] = rng.randrange(1, ring.modulus)
    return HahnSeries(ring, terms.items())


def test_divide_roundtrip_random():
    ring = ZModPN(3, 10)
    rng = random.Random(13)
    t_minus_r = HahnSeries(ring, [(0, ring.neg(3)), (1, 1)])
    for _ in range(100):
        g = rand_series(ring, rng)
        f = t_minus_r * g
        assert is_null_series(f, 3, 8)
        q = divide_by_t_minus_r(f, 3, 8)
        assert eq_mod(t_minus_r * q, f, 8)


def test_null_ideal_random():
    ring = ZModPN(2, 12)
    rng = random.Random(29)
    t_minus_r = HahnSeries(ring, [(0, ring.neg(2)), (1, 1)])
    for _ in range(100):
        f = t_minus_r * rand_series(ring, rng)
        g = rand_series(ring, rng)
        # null series times anything is null (at reduced precision: the product
        # of an 8-digit-null by a unit-scale series stays null to ~6 digits)
        assert is_null_series(f * g, 2, 6)


def test_mul_commutative_associative_random():
    ring = ZModPN(3, 8)
    rng = random.Random(31)
    for _ in range(200):
        a, b, c = (rand_series(ring, rng) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
