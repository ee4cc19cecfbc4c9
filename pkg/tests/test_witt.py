import random
from fractions import Fraction as F

import pytest

from hahnwitt.fq import FqField
from hahnwitt.witt import (
    MPoly, WittContext, WittVec, ghost, ghost_inverse, witt_apply_universal,
    witt_universal_polys,
)


def test_ghost_examples():
    assert ghost((3, 5), 2, 2) == (3, 19)
    assert ghost((1, 1, 1), 3, 3) == (1, 4, 13)


def test_ghost_teichmuller_shape():
    r = 7
    assert ghost((r, 0, 0), 2, 2) == (r, r ** 2, r ** 4)


def test_ghost_inverse_examples():
    assert ghost_inverse((3, 19), 2, 2) == (3, 5)
    r = 5
    assert ghost_inverse((r, r ** 2), 2, 2) == (r, 0)
    assert ghost_inverse((0, 2), 2, 2) == (0, 1)


def test_ghost_inverse_divisibility_failure():
    with pytest.raises(ValueError):
        ghost_inverse((0, 1), 2, 2)


def test_ghost_roundtrip_random():
    rng = random.Random(3)
    for q, pi in [(2, 2), (3, 3), (4, 2)]:
        for _ in range(50):
            coords = tuple(rng.randrange(-50, 50) for _ in range(3))
            assert ghost_inverse(ghost(coords, q, pi), q, pi) == coords


def test_universal_add_n2_q2():
    s = witt_universal_polys(2, "add", 2, 2)
    assert s[0].render() == "x0 + y0"
    # S_1 = x1 + y1 + (x0^2 + y0^2 - (x0+y0)^2)/pi = x1 + y1 - (p/pi)*x0*y0
    assert s[1].render() == "-x0*y0*(p/pi) + x1 + y1"


def test_universal_mul_n1():
    polys = witt_universal_polys(1, "mul", 3, 3)
    assert polys[0].render() == "x0*y0"


def test_universal_integral_n_le_3():
    # assert_integral runs inside witt_universal_polys; it raising would fail here
    for q, p in [(2, 2), (3, 3), (4, 2)]:
        for op in ("add", "mul"):
            polys = witt_universal_polys(3, op, q, p)
            assert len(polys) == 3


def test_universal_ghost_identity():
    # substituting the S_i into the ghost polynomials recovers the ghost sums
    n, q, p = 3, 2, 2
    s = witt_universal_polys(n, "add", q, p)
    pi = MPoly.var(n, p, "pi")
    for m in range(n):
        w_of_s = MPoly.const(n, p, 0)
        wx = MPoly.const(n, p, 0)
        wy = MPoly.const(n, p, 0)
        for i in range(m + 1):
            w_of_s = w_of_s + pi ** i * s[i] ** (q ** (m - i))
            wx = wx + pi ** i * MPoly.var(n, p, "x", i) ** (q ** (m - i))
            wy = wy + pi ** i * MPoly.var(n, p, "y", i) ** (q ** (m - i))
        assert not (w_of_s - wx - wy).terms


def test_waffle_guard():
    with pytest.raises(ValueError):
        witt_universal_polys(5, "add", 2, 2)
    with pytest.raises(ValueError):
        witt_universal_polys(2, "xor", 2, 2)


def frozen_add_oracle(ctx, a_coords, b_coords, n):
    """Ghost oracle over Z: lift digits to integer Teichmuller representatives."""
    # only valid for prime fields F_2, F_3 where Teichmuller lifts are 0, +-1
    p = ctx.p
    lifts = {0: 0, 1: 1}
    if p == 3:
        lifts[2] = -1
    fld = ctx.field()
    av = [lifts[x.coeffs[0]] for x in a_coords]
    bv = [lifts[x.coeffs[0]] for x in b_coords]
    g = tuple(x + y for x, y in zip(ghost(av, ctx.q, p), ghost(bv, ctx.q, p)))
    coords = ghost_inverse(g, ctx.q, p)
    return tuple(fld.elem([c % p]) for c in coords)


def test_witt_add_frozen_q2():
    ctx = WittContext(2, 1, 1)
    fld = ctx.field()
    one, zero = fld.one, fld.zero
    a = WittVec(ctx, [one, zero])
    s = a + a
    assert s.coords == (zero, one)  # (1,0) + (1,0) = (0,1)
    assert s.coords == frozen_add_oracle(ctx, a.coords, a.coords, 2)


def test_witt_add_frozen_q3():
    ctx = WittContext(3, 1, 1)
    fld = ctx.field()
    a = WittVec(ctx, [fld.elem([1]), fld.zero])
    b = WittVec(ctx, [fld.elem([2]), fld.zero])
    s = a + b
    # [1] + [2] = 1 + (-1) = 0 in Z_3, so every coordinate vanishes
    assert s.coords == (fld.zero, fld.zero)
    assert s.coords == frozen_add_oracle(ctx, a.coords, b.coords, 2)


def test_witt_identities():
    ctx = WittContext(2, 1, 2)
    fld = ctx.field()
    rng = random.Random(9)
    elems = list(fld.elements())
    zero = WittVec.zero(ctx, 3)
    one = WittVec(ctx, [fld.one, fld.zero, fld.zero])
    for _ in range(20):
        a = WittVec(ctx, [rng.choice(elems) for _ in range(3)])
        assert a + zero == a
        assert a * one == a


@pytest.mark.parametrize("p,f,m", [(2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 1, 2)])
def test_cross_oracle_tower_vs_universal(p, f, m):
    ctx = WittContext(p, f, m)
    fld = ctx.field()
    elems = list(fld.elements())
    rng = random.Random(100 + p * 10 + f + m)
    tower = ctx.build_tower()
    for _ in range(60):
        n = rng.choice([1, 2, 3])
        a = WittVec(ctx, [rng.choice(elems) for _ in range(n)], tower)
        b = WittVec(ctx, [rng.choice(elems) for _ in range(n)], tower)
        for op in ("add", "mul"):
            via_tower = a + b if op == "add" else a * b
            via_polys = witt_apply_universal(ctx, op, a, b)
            assert via_tower.coords == via_polys.coords, (op, a, b)


def test_ring_axioms_small():
    for p, f in [(2, 1), (3, 1), (2, 2)]:
        ctx = WittContext(p, f, 1)
        fld = ctx.field()
        elems = list(fld.elements())
        rng = random.Random(77)
        tower = ctx.build_tower()
        for _ in range(40):
            a = WittVec(ctx, [rng.choice(elems) for _ in range(2)], tower)
            b = WittVec(ctx, [rng.choice(elems) for _ in range(2)], tower)
            c = WittVec(ctx, [rng.choice(elems) for _ in range(2)], tower)
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a


def test_ghost_is_ring_hom_via_teichmuller_lifts():
    # lift digits to tower Teichmuller representatives, then ghost componentwise
    ctx = WittContext(2, 1, 2)
    fld = ctx.field()
    elems = list(fld.elements())
    rng = random.Random(55)
    tower = ctx.build_tower()
    q, p = ctx.q, ctx.p
    pi = tower.from_int(p)
    for _ in range(50):
        a = WittVec(ctx, [rng.choice(elems) for _ in range(2)], tower)
        b = WittVec(ctx, [rng.choice(elems) for _ in range(2)], tower)
        s = a + b

        def ghost_of(w):
            lifts = [tower.teichmuller(x) if not x.is_zero() else tower.zero()
                     for x in w.coords]
            out = []
            for n in range(len(lifts)):
                tot = tower.zero()
                for i in range(n + 1):
                    tot = tot + pi ** i * lifts[i] ** (q ** (n - i))
                out.append(tot)
            return out

        ga, gb, gs = ghost_of(a), ghost_of(b), ghost_of(s)
        for idx, (x, y, z) in enumerate(zip(ga, gb, gs)):
            diff = x + y - z
            v = diff.valuation_abs()
            bound = v.bound if hasattr(v, "bound") else v
            # the n-th ghost of the sum is pinned mod p^(n+1) by the digits
            assert bound >= idx + 1
