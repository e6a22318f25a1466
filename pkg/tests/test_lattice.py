import itertools
from fractions import Fraction

import numpy as np
import pytest

from ncsolenoid import intlat, lattice
from _corpus import CORPUS, TWO_I, ROT, JORDAN, random_matrices


@pytest.mark.parametrize("B", CORPUS)
def test_group_order_and_reps(B):
    G = lattice.enumerate_quotient(B)
    assert G.order == abs(intlat.det(B)) == np.prod(G.factors)
    assert len(set(G.dual_reps)) == G.order == len(set(G.group_reps))
    for k in G.dual_reps:
        assert all(0 <= x < 1 for x in k)
        # k lies in A Z^p
        assert intlat.is_integral([intlat.mat_vec(intlat.transpose(B), k)])
    Binv = intlat.inverse(B)
    for g in G.group_reps:
        assert all(0 <= x < 1 for x in intlat.mat_vec(Binv, g))


@pytest.mark.parametrize("B", CORPUS)
def test_schur_orthogonality(B):
    ok, bad = lattice.schur_orthogonality_check(lattice.enumerate_quotient(B))
    assert ok, bad


def test_dual_group_law():
    G = lattice.enumerate_quotient(((2, 4), (6, 8)))
    for j, k in itertools.product(G.dual_reps, repeat=2):
        s = G.dual_add(j, k)
        assert s in G.dual_reps
        assert G.dual_add(s, G.dual_neg(k)) == j


def test_trivial_and_singular_coverings():
    with pytest.raises(lattice.TrivialCoveringError):
        lattice.enumerate_quotient(((1, 0), (0, 1)))
    with pytest.raises(intlat.SingularMatrixError):
        lattice.enumerate_quotient(((1, 2), (2, 4)))


def test_characters_pair_into_roots_of_unity():
    G = lattice.enumerate_quotient(JORDAN)
    for k, g in itertools.product(G.dual_reps, G.group_reps):
        assert (G.character(k, g) * G.order).denominator == 1


@pytest.mark.parametrize("B", CORPUS)
@pytest.mark.parametrize("n", [1, 2])
def test_cocycle(B, n):
    w = lattice.cocycle_table(B, n)
    T = lattice.get_tower(B)
    zero = (Fraction(0),) * T.p
    for k in T.group.dual_reps:
        assert w(zero, k) == zero
    assert lattice.check_cocycle_identity(B, n)


@pytest.mark.parametrize("B", [TWO_I, ROT, JORDAN, ((3,),)])
def test_mode_bijection_roundtrip(B):
    T = lattice.get_tower(B)
    n = 2
    for m in itertools.product(range(-2, 3), repeat=T.p):
        xi = T.point(m, n)
        base, ks = lattice.mode_bijection_inv(B, n, xi)
        assert lattice.mode_bijection_fwd(B, n, base, ks) == xi
        assert all(k in T.group.dual_reps for k in ks)


def test_mode_bijection_peels_seven_quarters():
    assert lattice.mode_bijection_inv(((2,),), 2, (Fraction(7, 4),)) == ((1,), ((Fraction(1, 2),), (Fraction(1, 2),)))


def test_mode_bijection_rejects_foreign_points():
    with pytest.raises(lattice.LatticeMembershipError):
        lattice.mode_bijection_inv(((2,),), 1, (Fraction(1, 3),))


@pytest.mark.parametrize("R_sq, count", [(1, 5), (2, 9), (4, 13)])
def test_ball_counts_level_zero(R_sq, count):
    assert len(lattice.enumerate_ball(TWO_I, 0, R_sq)) == count


@pytest.mark.parametrize("B", [TWO_I, ROT, JORDAN, ((2, 1, 0), (0, 2, 1), (0, 0, 3)), ((3,),)])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_ball_matches_brute_force(B, n):
    T = lattice.get_tower(B)
    R_sq = Fraction(9, 4)
    got = set(lattice.enumerate_ball(B, n, R_sq))
    box = int(intlat.row_sum_norm(T.Bt_pow(n)) * 2) + 1
    An = np.array(T.A_pow(n), dtype=float)
    grid = np.array(list(itertools.product(range(-box, box + 1), repeat=T.p)))
    near = grid[np.sum((grid @ An.T) ** 2, axis=1) <= float(R_sq) + 1e-6]
    brute = set()
    for m in near:
        xi = T.point(tuple(int(x) for x in m), n)
        if lattice.norm_sq(xi) <= R_sq:
            brute.add(xi)
    assert got == brute


def test_ball_density_scales_with_det():
    a = len(lattice.ball_points(TWO_I, 0, 2500).coords)
    b = len(lattice.ball_points(TWO_I, 2, 2500).coords)
    assert abs(b / a - 16) < 0.05


def test_ball_order_is_lexicographic_in_m():
    pts = lattice.ball_points(JORDAN, 1, 4)
    rows = [tuple(r) for r in pts.coords]
    assert rows == sorted(rows)


def test_random_corpus_group_orders():
    for B in random_matrices(50, seed=0):
        G = lattice.enumerate_quotient(B)
        assert G.order == abs(intlat.det(B))
