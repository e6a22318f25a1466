import random
from fractions import Fraction

import numpy as np
import pytest

from ncsolenoid import covalg
from ncsolenoid.covalg import TrigPoly, matrix_embed, phase
from ncsolenoid.lattice import get_tower, pairing
from _corpus import CORPUS, TWO_I

SMALL = [((2,),), TWO_I, ((1, -1), (1, 1)), ((2, 1), (0, 2)), ((2, 0, 0), (0, 2, 0), (0, 0, 2))]


@pytest.mark.parametrize("B", SMALL)
def test_embedding_is_a_star_homomorphism(B):
    rng = random.Random(1)
    for _ in range(20):
        b, c = covalg.random_trigpoly(B, 1, rng), covalg.random_trigpoly(B, 1, rng)
        assert matrix_embed(b * c) == matrix_embed(b) @ matrix_embed(c)
        assert matrix_embed(b.adjoint()) == matrix_embed(b).adjoint()


@pytest.mark.parametrize("B", SMALL)
def test_lower_level_elements_embed_diagonally(B):
    rng = random.Random(2)
    a = covalg.random_trigpoly(B, 0, rng).at_level(1)
    M = matrix_embed(a)
    assert M.is_diagonal()
    assert matrix_embed(TrigPoly.constant(B, 1)) == covalg.embedded_identity(B, 0)


@pytest.mark.parametrize("B", SMALL)
def test_projection_equals_averaging(B):
    rng = random.Random(3)
    T = get_tower(B)
    for _ in range(5):
        b = covalg.random_trigpoly(B, 1, rng, terms=6)
        total = TrigPoly.zero(B, 1)
        for k in T.group.dual_reps:
            Ek = covalg.eigenspace_project(k, b)
            assert Ek == covalg.eigenspace_average(k, b)
            total = total + Ek
        assert total == b


@pytest.mark.parametrize("B", SMALL)
def test_eigenspace_transforms_by_character(B):
    rng = random.Random(4)
    T = get_tower(B)
    b = covalg.random_trigpoly(B, 1, rng, terms=6)
    for k, part in covalg.eigen_decomposition(b).items():
        for gh in T.group.group_reps:
            g = covalg.deck_translation(B, 1, gh)
            assert covalg.deck_action(g, part) == part * phase(pairing(k, gh))


@pytest.mark.parametrize("B", SMALL)
def test_sigma_lies_in_its_eigenspace_and_is_unitary(B):
    T = get_tower(B)
    for k in T.group.dual_reps:
        s = covalg.sigma_unitary(B, k, 1)
        assert covalg.eigenspace_project(k, s) == s
        assert s * s.adjoint() == TrigPoly.constant(B, 1)


@pytest.mark.parametrize("B", SMALL)
def test_l2_isometry(B):
    rng = random.Random(5)
    b = covalg.random_trigpoly(B, 1, rng, terms=6)
    parts = covalg.l2_isometry(b)
    total = sum((a.l2_norm_sq() for a in parts), covalg.Cyc.rational(0))
    assert total == b.l2_norm_sq()


@pytest.mark.parametrize("B", [((2,),), TWO_I])
def test_can_solve_round_trip(B):
    rng = random.Random(6)
    T = get_tower(B)
    for _ in range(5):
        targets = {g: covalg.random_trigpoly(B, 1, rng, terms=3) for g in T.group.group_reps}
        sol = covalg.can_solve(targets)
        assert sol.reproduces_targets


def test_support_leak_is_reported():
    b = TrigPoly.monomial(((2,),), 1, (Fraction(1, 2),))
    with pytest.raises(covalg.SupportLeakError):
        b.at_level(0)


def test_nounitaries_fixture():
    cov = covalg.nounitaries_fixture()
    assert covalg.check_action(cov)
    rep = {e.label: e for e in covalg.regularity_check(cov)}
    assert rep[(0,)].status == "unitary found" and rep[(0,)].dimension == 5
    assert rep[(1,)].status == "no invertible element" and rep[(1,)].dimension == 4


def test_regular_fixture_finds_eigenspace_unitaries():
    # Z_2 x Z_2 acting on M_2 by ad of Pauli matrices: every eigenspace is spanned by a unitary
    cov = covalg.FinDimCovering(2, (2, 2), (((0, 1), (1, 0)), ((1, 0), (0, -1))))
    assert covalg.check_action(cov)
    J = [np.array(m, dtype=complex) for m in cov.unitaries]
    for e in covalg.regularity_check(cov):
        assert e.status == "unitary found"
        U = e.unitary
        assert np.allclose(U @ U.conj().T, np.eye(2))
        for Ji, ki in zip(J, e.label):
            assert np.allclose(Ji @ U @ Ji.conj().T, (-1) ** ki * U)


def test_lattice_coverings_are_regular():
    assert all(e.status == "unitary found" for e in covalg.regularity_check(((2, 1), (0, 2))))
