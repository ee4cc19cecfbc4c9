import random
from fractions import Fraction

import pytest

from hahnwitt.fq import FqField
from hahnwitt.tower import AtLeast, LocalTower, TowerSpec


def test_build_base_z2():
    t = LocalTower(TowerSpec.mixed(2, 16))
    assert t.e_abs == 1 and t.res_field.order == 2
    assert t.uniformizer().valuation() == 1


def test_build_eisenstein_sqrt2():
    t = LocalTower(TowerSpec.mixed(2, 16, [("eisenstein_pure", 2)]))
    assert t.e_abs == 2
    assert t.res_field.order == 2
    g = t.gen()
    assert (g * g - t.from_int(2)).is_zero_at_cap()
    # K-level is the full tower: v(sqrt 2) = 1 there
    assert g.valuation() == 1
    assert g.valuation_abs() == Fraction(1, 2)


def test_build_unram_then_eisenstein():
    spec = TowerSpec.mixed(3, 12, [("unramified", 2), ("eisenstein_pure", 2)])
    t = LocalTower(spec)
    assert t.e_abs == 2
    assert t.res_field.order == 9


def test_eisenstein_rejects_non_eisenstein():
    with pytest.raises(ValueError):
        LocalTower(TowerSpec.mixed(2, 8, [("eisenstein", ((-3, 0), (1, 2)))]))


def test_spec_json_roundtrip():
    spec = TowerSpec.mixed(2, 64, [("unramified", 2), ("eisenstein", ((-2, 0), (1, 2)))])
    again = TowerSpec.from_json(spec.to_json())
    assert again.base == spec.base
    assert again.stages == spec.stages


def test_teichmuller_idempotents_and_minus_one():
    t = LocalTower(TowerSpec.mixed(3, 10))
    f3 = t.res_field
    assert t.teichmuller(f3.zero).is_zero_at_cap()
    assert (t.teichmuller(f3.one) - t.one()).is_zero_at_cap()
    # [2] = -1 in Z_3: the unique cube-stable lift of 2
    assert (t.teichmuller(f3.elem([2])) + t.one()).is_zero_at_cap()


def test_teichmuller_f4_against_hensel():
    # t^2+t+1 = 0 for the Teichmuller lift of a generator of F_4
    t = LocalTower(TowerSpec.mixed(2, 14, [("unramified", 2)]))
    a = t.res_field.gen
    ta = t.teichmuller(a)
    val = (ta * ta + ta + t.one()).valuation_abs()
    assert isinstance(val, AtLeast) and val.bound >= 14


def test_teichmuller_multiplicative_exhaustive():
    for spec in [
        TowerSpec.mixed(2, 10, [("unramified", 2)]),
        TowerSpec.mixed(3, 8, [("unramified", 2)]),
        TowerSpec.mixed(2, 8, [("unramified", 4)]),
    ]:
        t = LocalTower(spec)
        if t.res_field.order > 16:
            continue
        elems = list(t.res_field.elements())
        for r in elems:
            for s in elems:
                lhs = t.teichmuller(r * s)
                rhs = t.teichmuller(r) * t.teichmuller(s)
                assert (lhs - rhs).is_zero_at_cap()


def test_frob_on_teichmuller():
    t = LocalTower(TowerSpec.mixed(2, 10, [("unramified", 2)], k_index=0))
    a = t.res_field.gen
    lhs = t.frob(t.teichmuller(a))
    rhs = t.teichmuller(a ** 2)
    assert (lhs - rhs).is_zero_at_cap()


def test_frob_fixes_eisenstein_generator():
    t = LocalTower(TowerSpec.mixed(2, 10, [("eisenstein_pure", 2)]))
    g = t.gen()
    assert (t.frob(g) - g).is_zero_at_cap()


def test_frob_is_involution_on_unramified_quadratic():
    t = LocalTower(TowerSpec.mixed(3, 8, [("unramified", 2)], k_index=0))
    rng = random.Random(11)
    for _ in range(20):
        x = t.rand_elem(rng)
        assert (t.frob(t.frob(x)) - x).is_zero_at_cap()


def test_frob_ring_hom():
    t = LocalTower(TowerSpec.mixed(3, 8, [("unramified", 2), ("eisenstein_pure", 2)], k_index=0))
    rng = random.Random(5)
    for _ in range(200):
        x, y = t.rand_elem(rng), t.rand_elem(rng)
        assert (t.frob(x * y) - t.frob(x) * t.frob(y)).is_zero_at_cap()
        assert (t.frob(x + y) - t.frob(x) - t.frob(y)).is_zero_at_cap()


def test_valuation_examples():
    # v(sqrt 2) = 1/2 when K = Q_2
    t = LocalTower(TowerSpec.mixed(2, 16, [("eisenstein_pure", 2)], k_index=0))
    assert t.gen().valuation() == Fraction(1, 2)
    # 1 + sqrt(3) via the Eisenstein shift Y^2+2Y-2 (Y = sqrt(3)-1): v = 1/2
    t2 = LocalTower(TowerSpec.mixed(2, 16, [("eisenstein", ((-2, 0), (2, 1), (1, 2)))], k_index=0))
    y = t2.gen()
    x = y + t2.from_int(2)  # = 1 + sqrt(3)
    assert x.valuation() == Fraction(1, 2)
    assert ((y + t2.one()) ** 2 - t2.from_int(3)).is_zero_at_cap()


def test_valuation_additivity_random():
    t = LocalTower(TowerSpec.mixed(3, 8, [("unramified", 2), ("eisenstein_pure", 2)]))
    rng = random.Random(17)
    checked = 0
    for _ in range(500):
        x, y = t.rand_elem(rng), t.rand_elem(rng)
        vx, vy = x.valuation_abs(), y.valuation_abs()
        if isinstance(vx, AtLeast) or isinstance(vy, AtLeast):
            continue
        vxy = (x * y).valuation_abs()
        if isinstance(vxy, AtLeast):
            assert vx + vy >= vxy.bound
        else:
            assert vxy == vx + vy
        vs = (x + y).valuation_abs()
        lhs = vs.bound if isinstance(vs, AtLeast) else vs
        assert lhs >= min(vx, vy)
        checked += 1
    assert checked > 400


def test_norm_down_sqrt2():
    t = LocalTower(TowerSpec.mixed(2, 16, [("eisenstein_pure", 2)]))
    g = t.gen()
    n = t.norm_down(g)
    assert (n - n.tower.from_int(-2)).is_zero_at_cap()
    n2 = t.norm_down(g + t.one())
    assert (n2 - n2.tower.from_int(-1)).is_zero_at_cap()


def test_norm_down_multiplicative():
    t = LocalTower(TowerSpec.mixed(3, 8, [("eisenstein_pure", 3)]))
    rng = random.Random(23)
    for _ in range(200):
        x, y = t.rand_elem(rng), t.rand_elem(rng)
        lhs = t.norm_down(x * y)
        rhs = t.norm_down(x) * t.norm_down(y)
        assert (lhs - rhs).is_zero_at_cap()


def test_norm_down_of_subtower_element():
    t = LocalTower(TowerSpec.mixed(2, 12, [("eisenstein_pure", 2)]))
    c = t.from_int(3)
    n = t.norm_down(c)
    assert (n - n.tower.from_int(9)).is_zero_at_cap()


def test_norm_minus_pi_root_p():
    # Nm_{K'/K}(-pi^(1/p)) = -pi for K = Q_p, K' = K(pi^(1/p))
    for p in (2, 3):
        t = LocalTower(TowerSpec.mixed(p, 12, [("eisenstein_pure", p)], k_index=0))
        n = t.norm_down(-t.gen())
        assert (n - n.tower.from_int(-p)).is_zero_at_cap()


def test_division_and_inverse():
    t = LocalTower(TowerSpec.mixed(2, 16, [("eisenstein_pure", 2)]))
    g = t.gen()
    x = (g + t.one()) * g
    y = x / g
    assert (y - g - t.one()).is_zero_at_cap()
    u = t.from_int(3)
    assert (u * u.inverse() - t.one()).is_zero_at_cap()
    with pytest.raises(ZeroDivisionError):
        t.zero().inverse()


def test_division_cap_exhaustion():
    t = LocalTower(TowerSpec.mixed(2, 4))
    x = t.elem(t._from_int_raw(8, 0), cap=Fraction(3))
    with pytest.raises(ValueError):
        x / t.from_int(8)


def test_lemma_norm_containment_wildly_ramified():
    # With v(p) = 1: for K' = K(pi^(1/p)), n <= k, (n - k/p) v(pi) <= 1:
    # Nm(1 + pi^(k/p) O_K') lies in 1 + pi^n O_K.
    cases = [
        (2, 12, (), 2, 2),   # K = Q_2: v(pi) = 1, n = 2, k = 2: (2 - 1)*1 <= 1
        (3, 10, (), 1, 2),   # K = Q_3: n = 1, k = 2
        (2, 12, (("eisenstein_pure", 2),), 3, 4),  # K = Q_2(sqrt 2): v(pi) = 1/2
    ]
    rng = random.Random(41)
    for p, prec, kstages, n, k in cases:
        base_stage_count = len(kstages)
        spec = TowerSpec.mixed(p, prec, list(kstages) + [("eisenstein_pure", p)],
                               k_index=base_stage_count)
        t = LocalTower(spec)
        e_K = 1
        for st in kstages:
            e_K *= st[1]
        v_pi = Fraction(1, e_K)  # v(pi_K) in v(p)=1 units
        assert n <= k and (n - Fraction(k, p)) * v_pi <= 1
        g = t.uniformizer()
        exp = Fraction(k, p) * t.e_abs // e_K
        assert Fraction(k, p) * Fraction(t.e_abs, e_K) == exp
        for _ in range(100 // len(cases) + 1):
            u = t.rand_elem(rng)
            x = t.one() + g ** int(exp) * u
            nm = t.norm_down(x)
            sub = nm.tower
            diff = nm - sub.one()
            v = diff.valuation_abs()
            bound = v.bound if isinstance(v, AtLeast) else v
            assert bound >= n * v_pi, (p, n, k, bound)
