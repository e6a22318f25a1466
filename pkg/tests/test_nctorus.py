import itertools
from fractions import Fraction

import pytest

from ncsolenoid import covalg, intlat, nctorus
from ncsolenoid.covalg import MatTrigPoly, obj_matmul, phase


@pytest.mark.parametrize("theta", ["1/3", "2/5", "1/2", "3/7"])
def test_clock_shift_commutation(theta):
    U0, V0 = nctorus.clock_shift(theta)
    lhs = MatTrigPoly.constant(obj_matmul(U0, V0))
    rhs = MatTrigPoly.constant(nctorus.scale(obj_matmul(V0, U0), phase(Fraction(theta))))
    assert lhs == rhs


def test_literal_shift_has_conjugate_phase():
    th = Fraction(1, 3)
    U0, _ = nctorus.clock_shift(th)
    V = nctorus.shift_up(3)
    lhs = MatTrigPoly.constant(obj_matmul(U0, V))
    assert lhs == MatTrigPoly.constant(nctorus.scale(obj_matmul(V, U0), phase(-th)))


@pytest.mark.parametrize("theta", ["1/3", "2/5"])
def test_weyl_power_law(theta):
    for n in [(1, 1), (2, -1), (-1, 3), (0, 2)]:
        for k in range(-2, 4):
            ph, kn = nctorus.weyl_power(n, k, theta)
            lhs = nctorus.weyl_element(n, theta).power(k)
            assert lhs == nctorus.weyl_element(kn, theta) * phase(ph)


def test_weyl_product_law():
    th = "2/5"
    for m, n in itertools.product([(1, 0), (0, 1), (2, -1), (1, 2)], repeat=2):
        ph = nctorus.weyl_product_phase(m, n, th)
        lhs = nctorus.weyl_element(m, th) * nctorus.weyl_element(n, th)
        mn = (m[0] + n[0], m[1] + n[1])
        assert lhs == nctorus.weyl_element(mn, th) * phase(ph)


@pytest.mark.parametrize("B", [((2, 0), (0, 2)), ((2, 1), (0, 2))])
def test_fixed_point_identities_acceptance_pairs(B):
    rep = nctorus.fixed_point_identities(B, "1/3")
    assert rep.ok, rep.to_json()
    assert rep.commutation_phase == Fraction(1, 3)
    assert rep.scaling_phase == (intlat.det(B) * Fraction(1, 3)) % 1


def test_fixed_point_identities_on_a_sweep():
    count = 0
    for entries in itertools.product(range(-2, 3), repeat=4):
        B = (entries[:2], entries[2:])
        d = intlat.det(B)
        if abs(d) <= 1 or (d - 1) % 3:
            continue
        assert nctorus.fixed_point_identities(B, "1/3").ok, B
        count += 1
    assert count > 20


def test_not_self_covering():
    with pytest.raises(nctorus.NotSelfCoveringError):
        nctorus.fixed_point_identities(((3, 0), (0, 1)), "1/3")


def test_angle_validation():
    assert nctorus.RationalAngle.parse("2/6") == nctorus.RationalAngle(1, 3)
    with pytest.raises(ValueError):
        nctorus.RationalAngle(2, 4)


def test_trace_of_weyl_elements():
    th = "1/3"
    assert nctorus.trace(nctorus.weyl_element((0, 0), th)) == 1
    assert nctorus.trace(nctorus.weyl_element((3, 0), th)) == 0  # frequency (1, 0) is nonzero
    assert nctorus.trace(nctorus.weyl_element((1, 0), th) * nctorus.weyl_element((1, 0), th).adjoint()) == 1


def test_deck_action_fixes_exactly_the_fixed_lattice():
    th = "1/3"
    for m in itertools.product(range(-3, 4), repeat=2):
        W = nctorus.weyl_element(m, th)
        fixed = all(nctorus.nc_deck_action(W, g, th) == W for g in [(1, 0), (0, 1)])
        (xi,) = W.terms
        assert fixed == nctorus.in_fixed_lattice(xi, th)


def test_deck_action_is_a_group_action():
    th = "2/5"
    W = nctorus.weyl_element((2, 1), th) + nctorus.weyl_element((1, -1), th)
    for g, h in itertools.product([(1, 0), (0, 1), (1, 1)], repeat=2):
        gh = (g[0] + h[0], g[1] + h[1])
        lhs = nctorus.nc_deck_action(nctorus.nc_deck_action(W, h, th), g, th)
        assert lhs == nctorus.nc_deck_action(W, gh, th)


def test_scaled_weyl_is_multiplicative_for_two_i():
    th = "1/3"  # 4 = 1 mod 3, so 2I is a self-covering
    n = 1
    for m, k in itertools.product([(1, 0), (0, 1), (1, 1), (2, -1)], repeat=2):
        ph = nctorus.weyl_product_phase(m, k, th)
        lhs = nctorus.scaled_weyl(m, n, th) * nctorus.scaled_weyl(k, n, th)
        rhs = nctorus.scaled_weyl((m[0] + k[0], m[1] + k[1]), n, th) * phase(ph)
        assert lhs == rhs
