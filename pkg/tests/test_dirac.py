import itertools
import math
import random
import warnings
from fractions import Fraction

import numpy as np
import pytest
import sympy

from ncsolenoid import dirac, intlat
from ncsolenoid.dirac import TWO_PI
from _corpus import CORPUS, EXPANDING, TWO_I, ROT, JORDAN


# ------------------------------------------------------------------ Clifford


def test_two_and_three_generators_are_pauli():
    sx, sy, sz = dirac._SX, dirac._SY, dirac._SZ
    g2 = dirac.clifford_generators(2)
    assert np.array_equal(g2[0], sx) and np.array_equal(g2[1], sy)
    g3 = dirac.clifford_generators(3)
    assert [np.array_equal(a, b) for a, b in zip(g3, (sx, sy, sz))] == [True] * 3


@pytest.mark.parametrize("count", range(1, 8))
def test_anticommutation_exact(count):
    gens = dirac.clifford_generators(count)
    assert gens.size == 2 ** (count // 2)
    assert dirac.anticommutation_holds(gens)
    E = dirac.clifford_exact(gens)
    for a, b in itertools.product(range(count), repeat=2):
        assert E[a] * E[b] + E[b] * E[a] == 2 * int(a == b) * sympy.eye(gens.size)


def test_clifford_eigenvalue_law():
    rng = random.Random(0)
    lam = sympy.Symbol("lam")
    for trial in range(200):
        count = 2 + trial % 3
        E = dirac.clifford_exact(dirac.clifford_generators(count))
        x = [sympy.Rational(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(count)]
        M = sum((xi * e for xi, e in zip(x, E)), sympy.zeros(E[0].shape[0]))
        nsq = sum(v * v for v in x)
        assert sympy.expand(M.charpoly(lam).as_expr() - (lam**2 - nsq) ** (M.shape[0] // 2)) == 0


# ------------------------------------------------------------------ torus spectra


def test_torus_spectrum_p2_small():
    spec = dirac.torus_spectrum(TWO_I, 0, 7)
    assert [(l.value, l.multiplicity) for l in spec] == [(0.0, 2), (TWO_PI, 8)]
    assert spec.lines[0].signed is False and spec.lines[1].signed is True


def test_three_four_five_mode():
    eps = dirac.clifford_generators(2)
    M = TWO_PI * (3 * eps[0] + 4 * eps[1])
    assert np.allclose(sorted(np.linalg.eigvalsh(M)), [-TWO_PI * 5, TWO_PI * 5])


def test_torus_spectrum_p1_half_lattice():
    spec = dirac.torus_spectrum(((2,),), 1, 4 * math.pi)
    assert [round(l.value / math.pi, 12) for l in spec] == [0, 1, 2, 3, 4]
    assert [l.multiplicity for l in spec] == [1, 2, 2, 2, 2]
    assert all(l.weight == Fraction(1, 2) for l in spec)


@pytest.mark.parametrize("B, n", [(TWO_I, 0), (JORDAN, 1), (((2, 0, 0), (0, 2, 0), (0, 0, 2)), 0)])
def test_torus_spectrum_dense_oracle(B, n):
    cutoff = 15.0
    spec = dirac.torus_spectrum(B, n, cutoff)
    T = dirac.get_tower(B)
    eps = dirac.clifford_generators(T.p)
    eigs = []
    box = 8
    for m in itertools.product(range(-box, box + 1), repeat=T.p):
        xi = [float(x) for x in T.point(m, n)]
        if TWO_PI * math.sqrt(sum(v * v for v in xi)) <= cutoff:
            M = TWO_PI * sum(v * e for v, e in zip(xi, eps))
            eigs.extend(np.abs(np.linalg.eigvalsh(M)))
    expanded = np.repeat(spec.values(), [l.multiplicity for l in spec])
    assert np.allclose(np.sort(eigs), np.sort(expanded))


@pytest.mark.parametrize("B", CORPUS)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_assembled_equals_torus(B, n):
    a = dirac.assembled_cover_spectrum(B, n, 40, check=False)
    b = dirac.torus_spectrum(B, n, 40)
    assert a.first_difference(b) is None
    assert a.total_weight() == b.total_weight()


def test_assembled_orientation_is_not_detected_by_spectra():
    for B in (ROT, JORDAN):
        a = dirac.assembled_cover_spectrum(B, 2, 20, orientation=-1, check=False)
        b = dirac.assembled_cover_spectrum(B, 2, 20, orientation=1, check=False)
        assert a.first_difference(b) is None


def test_assembled_mismatch_raises(monkeypatch):
    real = dirac.torus_spectrum

    def shifted(B, n, cutoff):
        spec = real(B, n, cutoff)
        first = spec.lines[1]
        bumped = dirac.SpectralLine(first.value, first.multiplicity + 1, first.weight, first.signed, first.key)
        return dirac.SpectrumMultiset((spec.lines[0], bumped) + spec.lines[2:], spec.model, cutoff)

    monkeypatch.setattr(dirac, "torus_spectrum", shifted)
    with pytest.raises(dirac.InvariantViolation, match="first|differs"):
        dirac.assembled_cover_spectrum(TWO_I, 1, 20)


def test_csv_output():
    text = dirac.torus_spectrum(((2,),), 1, 7).to_csv().splitlines()
    assert text[0].startswith("# {") and '"schema": 1' in text[0]
    assert text[1] == "value,multiplicity,weight_num,weight_den"
    assert text[2] == "0.0,1,1,2"


# ------------------------------------------------------------------ ||C_n||


def test_cn_norm_first_level():
    c = dirac.cn_norm(TWO_I, 1)
    assert c.max_sq == Fraction(1, 2)
    assert math.isclose(c.exact_norm, math.pi * math.sqrt(2))


def test_cn_norm_two_i_closed_form():
    for n in range(1, 15):
        c = dirac.cn_norm(TWO_I, n)
        assert c.max_sq == 2 * (1 - Fraction(1, 2**n)) ** 2


@pytest.mark.parametrize("B", CORPUS)
def test_cn_norm_bounds(B):
    prev = None
    for n in range(1, 11 if len(B) < 3 else 6):
        c = dirac.cn_norm(B, n)
        assert c.exact_norm <= c.paper_bound * (1 + 1e-12)
        if prev is not None and B in EXPANDING:
            assert c.exact_norm - prev <= dirac.cn_increment_bound(B, n - 1) * (1 + 1e-12)
        prev = c.exact_norm


def test_cn_norm_hull_pruning_matches_brute_force():
    for B in (JORDAN, ((3, 1), (1, 2)), ((2, 1, 0), (0, 2, 1), (0, 0, 3))):
        for n in (1, 2, 3):
            brute = max(sum(map(lambda v: v * v, c)) for _, c in dirac.section_sums(B, n))
            assert dirac.cn_norm(B, n).max_sq == brute


# ------------------------------------------------------------------ crossed products


def test_crossed_point_base():
    spec = dirac.crossed_spectrum(dirac.point_spectrum(), ((2,),), 0, 3)
    n = dirac.crossed_spinor_dim(1)
    assert [(l.value, l.multiplicity // n) for l in spec] == [(0.0, 1), (1.0, 2), (2.0, 2), (3.0, 2)]


def test_crossed_matrix_model():
    cutoff, K, G = 8.0, 2, 9
    e1, e2 = dirac.clifford_generators(2)
    ks, gs = range(-K, K + 1), range(-G, G + 1)
    Dk = np.diag([TWO_PI * k for k in ks])
    Mg = np.diag([float(g) for g in gs])
    D = np.kron(np.kron(Dk, e1), np.eye(len(gs))) + np.kron(np.eye(len(ks)), np.kron(e2, Mg))
    ev = np.linalg.eigvalsh(D)
    ev = np.sort(np.abs(ev[np.abs(ev) <= cutoff + 1e-9]))
    spec = dirac.crossed_spectrum(dirac.circle_spectrum(cutoff), ((2,),), 0, cutoff)
    expanded = np.repeat(spec.values(), [l.multiplicity for l in spec])
    assert np.allclose(ev, np.sort(expanded))


def test_crossed_weights():
    spec = dirac.crossed_spectrum(dirac.circle_spectrum(10), TWO_I, 2, 10)
    assert all(l.weight == Fraction(1, 16) for l in spec)


# ------------------------------------------------------------------ UHF


@pytest.mark.parametrize("n, K", [(n, K) for n in range(3) for K in range(3)])
def test_uhf_weights_match_tensor_oracle(n, K):
    oracle = dirac.uhf_tensor_oracle(2, 1, n, K)
    spec = dirac.uhf_spectrum(2, 1, n, K)
    assert [oracle[v] for v in oracle] == [(l.multiplicity, l.weighted) for l in spec]
    for l, v in zip(spec, oracle):
        assert math.isclose(l.value, v)


def test_uhf_weight_formula():
    spec = dirac.uhf_spectrum(2, 1, 0, 3)
    assert [(l.value, l.weighted) for l in spec] == [(0.0, 1), (1.0, 3), (2.0, 12), (4.0, 48), (8.0, 192)]
    lvl1 = dirac.uhf_spectrum(2, 1, 1, 0)
    assert (lvl1.lines[1].value, lvl1.lines[1].weighted) == (0.5, Fraction(3, 4))
    assert [l.value for l in dirac.uhf_spectrum(3, 2, 0, 0)] == [0.0, 1.0]


@pytest.mark.parametrize("n, K", [(1, 0), (1, 1), (2, 0)])
def test_uhf_recursion(n, K):
    assert np.allclose(dirac.uhf_tensor_dirac(2, 1, n, K), dirac.uhf_recursive_dirac(2, 1, n, K))


def test_uhf_tensor_weights_for_r3():
    oracle = dirac.uhf_tensor_oracle(3, 1.5, 1, 0)
    spec = dirac.uhf_spectrum(3, 1.5, 1, 0)
    assert [oracle[v][0] for v in oracle] == [l.multiplicity for l in spec]


@pytest.mark.parametrize("r, s, t0", [(2, 1, 2), (2, Fraction(3, 2), Fraction(4, 3)), (3, 2, 1)])
def test_uhf_abscissa_and_residue(r, s, t0):
    assert dirac.uhf_abscissa(r, s) == t0
    res = [dirac.uhf_residue(r, s, n) for n in range(4)]
    assert all(sympy.simplify(x - res[0]) == 0 for x in res)
    assert sympy.simplify(res[0] - sympy.Rational(r * r - 1) / (sympy.nsimplify(s) * sympy.log(r))) == 0


def test_uhf_zeta_value():
    assert dirac.uhf_zeta_value(2, 1, 0, 3) == 6


# ------------------------------------------------------------------ Lip seminorms


def test_torus_lipnorm():
    T = dirac.get_tower(TWO_I)
    for k in range(6):
        xi = T.point((2**0, 0), 0)
        xi = tuple(Fraction(x, 2**k) for x in xi)
        L = dirac.commutator_lipnorm("torus", dirac.TorusMonomial(xi))
        assert L.exact_sq == Fraction(1, 4**k)
        assert math.isclose(L.value, TWO_PI / 2**k)


def test_crossed_lipnorm_zero_and_levels():
    assert dirac.commutator_lipnorm("crossed", dirac.CrossedUnitary(TWO_I, 0, (0, 0))).value == 0
    for B in (TWO_I, JORDAN, ROT):
        T = dirac.get_tower(B)
        for m in range(3):
            for c in [(1, 0), (1, -1), (2, 1)]:
                g = T.point(c, m)
                a = dirac.commutator_lipnorm("crossed", dirac.CrossedUnitary(B, m, g))
                b = dirac.commutator_lipnorm("crossed", dirac.CrossedUnitary(B, m + 1, g))
                assert a.exact_sq == b.exact_sq == dirac.norm_sq(g)


def test_crossed_lipnorm_matrix_model():
    # explicit truncated commutator [M_l, U_g] on a window of the level lattice
    B, m = JORDAN, 1
    T = dirac.get_tower(B)
    g = T.point((1, 1), 1)
    for level in (m, m + 1):
        eps = dirac.clifford_generators(3)
        pts = [T.point(c, level) for c in itertools.product(range(-3, 4), repeat=2)]
        idx = {p: i for i, p in enumerate(pts)}
        N, d = len(pts), eps.size
        Ml = np.zeros((N * d, N * d), dtype=complex)
        Ug = np.zeros((N * d, N * d), dtype=complex)
        for p, i in idx.items():
            Ml[i * d:(i + 1) * d, i * d:(i + 1) * d] = float(p[0]) * eps[1] + float(p[1]) * eps[2]
            q = tuple(a + b for a, b in zip(p, g))
            if q in idx:
                j = idx[q]
                Ug[j * d:(j + 1) * d, i * d:(i + 1) * d] = np.eye(d)
        norm = np.linalg.norm(Ml @ Ug - Ug @ Ml, 2)
        assert math.isclose(norm, math.sqrt(dirac.norm_sq(g)), rel_tol=1e-12)


def test_crossed_lipnorm_rejects_foreign_g():
    with pytest.raises(ValueError):
        dirac.commutator_lipnorm("crossed", dirac.CrossedUnitary(TWO_I, 0, (Fraction(1, 2), 0)))


def test_uhf_commutator_e11():
    e11 = np.diag([1.0, 0.0])
    c = dirac.uhf_commutator(2, 1, 1, e11, K=1)
    assert c.ok
    assert math.isclose(c.exact, 0.25)
    assert math.isclose(c.lower, 0.5 * math.sqrt(1 / 8))
    assert math.isclose(c.upper, 2.0)


def test_uhf_commutator_sandwich_random():
    rng = np.random.default_rng(0)
    for trial in range(30):
        r = 2 if trial % 3 else 3
        n = int(rng.integers(0, 2 if r == 3 else 3))
        s = float(rng.choice([1.0, 1.5, 2.0]))
        b = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
        c = dirac.uhf_commutator(r, s, n, b, K=0)
        assert c.ok, (r, s, n, c)
        assert math.isclose(c.exact, r ** (-n * s) * dirac.uhf_first_factor_norm(r, b), rel_tol=1e-9)


# ------------------------------------------------------------------ radii


def test_torus_radii_table():
    rows = dirac.radii_divergence("torus", 10, B=TWO_I)
    for row in rows:
        assert row.seminorm_sq_over == Fraction(1, 4**row.k)
        assert math.isclose(row.quotient_norm, 2**row.k / TWO_PI)


def test_crossed_and_uhf_radii_increase():
    for rows in (dirac.radii_divergence("crossed", 10, B=JORDAN), dirac.radii_divergence("uhf", 10, r=2, s=1)):
        q = [r.quotient_norm for r in rows]
        assert all(a < b for a, b in zip(q, q[1:]))
        assert q[-1] > 100 * q[0]


def test_uhf_radii_growth_rate():
    rows = dirac.radii_divergence("uhf", 6, r=2, s=1)
    for a, b in zip(rows, rows[1:]):
        assert b.quotient_norm / a.quotient_norm >= 2 * (0.5 * math.sqrt(1 / 8)) / 4


def test_nctorus_radii():
    rows = dirac.radii_divergence("nctorus", 5, B=TWO_I, theta="1/3")
    assert [r.seminorm_sq_over for r in rows] == [Fraction(1, 4**k) for k in range(6)]


def test_radii_warn_when_not_expanding():
    with pytest.warns(UserWarning):
        rows = dirac.radii_divergence("torus", 3, B=((2, 0), (0, 1)))
    assert len(rows) == 4


@pytest.mark.parametrize("m, n, ratio", [((1, 0), 1, Fraction(1, 4)), ((2, 3), 3, Fraction(1, 64)), ((0, 0), 2, None)])
def test_lip_scaling(m, n, ratio):
    res = dirac.lip_scaling_check(m, n)
    assert res.ok and res.ratio_sq == ratio
