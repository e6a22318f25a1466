"""Clifford generators and Dirac spectra of the covering tower and crossed products.

Spectra are stored as :class:`SpectrumMultiset` records of |eigenvalue|,
multiplicity and a rational trace weight per eigenvector. Torus lines carry
the exact key ||ξ||^2 (the value is 2π·sqrt(key)), so spectra built by
different routes can be compared exactly.

Mode orientation. On level n the unitary V_n sends the Fourier mode ξ to the
slot (m, k_1, ..., k_n) with ξ = m - Σ_h s_h(k_h), where k_h labels the
eigenspace that contains the mode. The assembled spectrum is therefore
built from the vectors m - Σ_h s_h(k_h). Because the frequency lattice is
symmetric under ξ ↦ -ξ, the opposite orientation m + Σ_h s_h(k_h) yields the
same multiset; the spectrum test alone cannot tell the two apart.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import intlat
from .lattice import ball_points, ceil_sqrt, get_tower, integer_ball, norm_sq, vec_add

TWO_PI = 2 * math.pi


class InvariantViolation(AssertionError):
    pass


# ================================================================ Clifford


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class CliffordGens:
    count: int
    size: int
    gens: tuple

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __getitem__(self, i):
        return self.gens[i]


def _kron_all(mats):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def clifford_generators(count: int) -> CliffordGens:
    """Hermitian ε^1..ε^count of size 2^{floor(count/2)} with ε^a ε^b + ε^b ε^a = 2δ_ab.

    Jordan-Wigner tensor construction: for j = 1..k the pair
    σ_z^{⊗(j-1)} ⊗ {σ_x, σ_y} ⊗ I^{⊗(k-j)}, plus σ_z^{⊗k} when count is odd.
    """
    if count < 1:
        raise ValueError("need at least one generator")
    k = count // 2
    gens = []
    for j in range(k):
        for s in (_SX, _SY):
            gens.append(_kron_all([_SZ] * j + [s] + [_I2] * (k - j - 1)))
    if count % 2:
        gens.append(_kron_all([_SZ] * k))
    for g in gens:
        g.setflags(write=False)
    return CliffordGens(count, 2**k, tuple(gens))


def clifford_exact(gens: CliffordGens):
    """The generators as sympy matrices (entries 0, ±1, ±i)."""
    import sympy

    def conv(z):
        return sympy.Integer(int(z.real)) + sympy.I * sympy.Integer(int(z.imag))

    return [sympy.Matrix([[conv(z) for z in row] for row in g]) for g in gens]


def anticommutation_holds(gens: CliffordGens) -> bool:
    eye = np.eye(gens.size)
    for a, b in itertools.product(range(len(gens)), repeat=2):
        ac = gens[a] @ gens[b] + gens[b] @ gens[a]
        if not np.array_equal(ac, 2 * eye * (a == b)):
            return False
    return all(np.array_equal(g, g.conj().T) for g in gens)


def torus_spinor_dim(p: int) -> int:
    return 2 ** (p // 2)


def crossed_spinor_dim(p: int) -> int:
    return 2 ** ((p + 1) // 2)


# ============================================================ spectra


@dataclass(frozen=True)
class SpectralLine:
    value: float
    multiplicity: int
    weight: Fraction
    signed: bool
    key: object = None

    @property
    def weighted(self) -> Fraction:
        return self.multiplicity * self.weight


@dataclass(frozen=True)
class SpectrumMultiset:
    lines: tuple
    model: dict = field(default_factory=dict)
    cutoff: float | None = None

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def total_weight(self) -> Fraction:
        return sum((l.weighted for l in self.lines), Fraction(0))

    def total_multiplicity(self) -> int:
        return sum(l.multiplicity for l in self.lines)

    def values(self) -> np.ndarray:
        return np.array([l.value for l in self.lines], dtype=float)

    def weights(self) -> np.ndarray:
        return np.array([float(l.weighted) for l in self.lines], dtype=float)

    def exact_table(self) -> dict:
        return {l.key: (l.multiplicity, l.weight) for l in self.lines}

    def first_difference(self, other: "SpectrumMultiset"):
        a, b = self.exact_table(), other.exact_table()
        for key in sorted(set(a) | set(b), key=_sort_key):
            if a.get(key) != b.get(key):
                return key, a.get(key), b.get(key)
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        meta = {"schema": 1, "model": self.model, "cutoff": self.cutoff}
        buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "multiplicity", "weight_num", "weight_den"])
        for l in self.lines:
            w.writerow([repr(l.value), l.multiplicity, l.weight.numerator, l.weight.denominator])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "cutoff": self.cutoff,
            "lines": [
                {
                    "value": l.value,
                    "multiplicity": l.multiplicity,
                    "weight": intlat.format_rational(l.weight),
                    "signed": l.signed,
                }
                for l in self.lines
            ],
        }


def _sort_key(key):
    if isinstance(key, tuple):
        return tuple(float(x) for x in key)
    return float(key) if key is not None else -1.0


def cutoff_radius_sq(cutoff: float) -> Fraction:
    """(Λ/2π)^2 as a rational, rounding Λ/2π to the nearest fraction with denominator <= 10^9.

    The rounding makes Λ = 2π·50 mean radius exactly 50; every spectrum
    builder uses the same rational radius, so exact comparisons are consistent.
    """
    return Fraction(cutoff / TWO_PI).limit_denominator(10**9) ** 2


def _torus_lines(counts: dict, p: int, weight: Fraction) -> tuple:
    spin = torus_spinor_dim(p) if p >= 2 else 1
    lines = []
    for key in sorted(counts):
        lines.append(SpectralLine(TWO_PI * math.sqrt(key), counts[key] * spin, weight, key > 0, key))
    return tuple(lines)


def torus_spectrum(B, n: int, cutoff: float) -> SpectrumMultiset:
    """|D|-spectrum on the level-n torus: 2π||ξ|| for ξ in A^n Z^p with 2π||ξ|| <= Λ."""
    T = get_tower(B)
    pts = ball_points(T.B, n, cutoff_radius_sq(cutoff))
    nums, cnt = np.unique(pts.norm_num, return_counts=True)
    counts = {Fraction(int(a), pts.denom): int(c) for a, c in zip(nums, cnt)}
    weight = Fraction(1, T.r**n)
    model = {"family": "torus", "matrix": intlat.format_matrix(T.B), "level": n}
    return SpectrumMultiset(_torus_lines(counts, T.p, weight), model, cutoff)


def section_sums(B, n: int):
    """All pairs ((k_1..k_n), Σ_h s_h(k_h)) over tuples of dual classes."""
    T = get_tower(B)
    reps = T.group.dual_reps
    secs = [[T.section(h, k) for k in reps] for h in range(1, n + 1)]
    for idx in itertools.product(range(len(reps)), repeat=n):
        total = (Fraction(0),) * T.p
        for h, i in enumerate(idx):
            total = vec_add(total, secs[h][i])
        yield tuple(reps[i] for i in idx), total


def assembled_cover_spectrum(B, n: int, cutoff: float, orientation: int = -1, check: bool = True) -> SpectrumMultiset:
    """Spectrum of D̂_n = D_0 ⊗ I - 2π Σ ε^a ⊗ (Σ_h diag s_h(·)^a), slot by slot.

    For every tuple (k_1..k_n) the block over m ∈ Z^p has eigenvalues
    ±2π||m + orientation·Σ_h s_h(k_h)||; m is enumerated directly in Z^p.
    With ``check`` the result is compared exactly with :func:`torus_spectrum`.
    """
    T = get_tower(B)
    p = T.p
    R_sq = cutoff_radius_sq(cutoff)
    ident = [[int(i == j) for j in range(p)] for i in range(p)]
    counts: Counter = Counter()
    for _, c in section_sums(T.B, n):
        offset = tuple(orientation * x for x in c)
        bound = ceil_sqrt(R_sq) + math.ceil(max(abs(x) for x in offset)) + 1 if p else 0
        _, vals, den = integer_ball(ident, 1, bound, R_sq, offset=offset)
        nums, cnt = np.unique(vals, return_counts=True)
        for a, k in zip(nums, cnt):
            counts[Fraction(int(a), den)] += int(k)
    weight = Fraction(1, T.r**n)
    model = {"family": "assembled", "matrix": intlat.format_matrix(T.B), "level": n}
    spec = SpectrumMultiset(_torus_lines(counts, p, weight), model, cutoff)
    if check:
        ref = torus_spectrum(T.B, n, cutoff)
        diff = spec.first_difference(ref)
        if diff is not None:
            key = diff[0]
            raise InvariantViolation(
                f"assembled spectrum differs from the torus spectrum at value {TWO_PI * math.sqrt(key)!r}"
            )
    return spec


# ============================================================ ||C_n||


def _hull_2d(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for pt in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    for pt in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    return lower[:-1] + upper[:-1]


def _extreme_points(points, p):
    points = list(set(points))
    if p == 1:
        return [min(points), max(points)]
    if p == 2:
        return _hull_2d(points)
    if len(points) <= p + 1:
        return points
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(np.array([[float(x) for x in v] for v in points]))
    except QhullError:
        return points
    return [points[i] for i in hull.vertices]


@dataclass(frozen=True)
class CnNorm:
    level: int
    exact_norm: float
    paper_bound: float
    max_sq: Fraction


def cn_norm(B, n: int) -> CnNorm:
    """||C_n|| = 2π max_{k_1..k_n} ||Σ_h s_h(k_h)||, with the bound 2π√p Σ_{h<=n} ||A^{h-1}||_F.

    The maximum of a convex function over a Minkowski sum is attained at a
    vertex of the sum's hull, so partial sums are pruned to extreme points
    at every step.
    """
    if n < 1:
        raise ValueError("n >= 1")
    T = get_tower(B)
    reps = T.group.dual_reps
    cand = [(Fraction(0),) * T.p]
    for h in range(1, n + 1):
        secs = [T.section(h, k) for k in reps]
        cand = _extreme_points([vec_add(c, s) for c in cand for s in secs], T.p)
    max_sq = max(norm_sq(c) for c in cand)
    bound = TWO_PI * math.sqrt(T.p) * sum(math.sqrt(intlat.frobenius_sq(T.A_pow(h - 1))) for h in range(1, n + 1))
    exact = TWO_PI * math.sqrt(max_sq)
    return CnNorm(n, exact, bound, max_sq)


def cn_increment_bound(B, n: int) -> float:
    """2π√p ||A^n||_F, which bounds ||C_{n+1}|| - ||C_n||."""
    T = get_tower(B)
    return TWO_PI * math.sqrt(T.p) * math.sqrt(intlat.frobenius_sq(T.A_pow(n)))


# ============================================================ crossed products


def circle_spectrum(cutoff: float) -> SpectrumMultiset:
    """Spectrum of -i d/dt on the circle: 2πk, k ∈ Z, |2πk| <= Λ."""
    spec = torus_spectrum(((2,),), 0, cutoff)
    return SpectrumMultiset(spec.lines, {"family": "circle"}, cutoff)


def point_spectrum() -> SpectrumMultiset:
    """The trivial algebra C with D = 0."""
    return SpectrumMultiset((SpectralLine(0.0, 1, Fraction(1), False, Fraction(0)),), {"family": "point"}, None)


def crossed_spectrum(base: SpectrumMultiset, B, n: int, cutoff: float) -> SpectrumMultiset:
    """Spectrum of D ⊗ ε_1 + I ⊗ M_ℓ on H ⊗ C^N ⊗ ℓ^2(A^n Z^p), N = 2^{ceil(p/2)}.

    Each base eigenvalue λ and group element g give N eigenvalues
    ±sqrt(λ^2 + ||g||^2), half of each sign (all zero when λ = g = 0). The
    cutoff λ^2 + ||g||^2 <= Λ^2 is exact in ||g||^2; λ^2 is a float.
    """
    T = get_tower(B)
    N = crossed_spinor_dim(T.p)
    weight = Fraction(1, T.r**n)
    lam_sq_max = cutoff**2
    grouped: dict = {}
    for line in base.lines:
        rest = lam_sq_max - line.value**2
        if rest < 0:
            continue
        pts = ball_points(T.B, n, Fraction(rest).limit_denominator(10**12))
        nums, cnt = np.unique(pts.norm_num, return_counts=True)
        for a, c in zip(nums, cnt):
            g_sq = Fraction(int(a), pts.denom)
            key = (line.key, g_sq)
            value = math.sqrt(line.value**2 + float(g_sq))
            mult = line.multiplicity * int(c) * N
            grouped[key] = (value, mult, line.weight * weight, value > 0)
    lines = tuple(
        SpectralLine(v, m, w, s, key)
        for key, (v, m, w, s) in sorted(grouped.items(), key=lambda kv: (kv[1][0], _sort_key(kv[0])))
    )
    model = {"family": "crossed", "base": base.model, "matrix": intlat.format_matrix(T.B), "level": n}
    return SpectrumMultiset(lines, model, cutoff)


# ============================================================ UHF(r^∞)


def _uhf_weight(r: int, k: int) -> Fraction:
    """(1 - r^{-2}) r^{2(k+1)} = r^{2(k+1)} - r^{2k} as a rational (k may be negative)."""
    return Fraction(r) ** (2 * (k + 1)) - Fraction(r) ** (2 * k)


def uhf_spectrum(r: int, s, n: int, K: int) -> SpectrumMultiset:
    """Spectrum of D_n = Σ_{k=-n}^{K} r^{ks} Q_k truncated at level K.

    The line r^{ks} has multiplicity rank Q_k = r^{2(n+k+1)} - r^{2(n+k)} and
    per-vector weight r^{-2n}; the kernel line 0 has multiplicity 1.
    """
    if r < 2 or n < 0 or K < 0:
        raise ValueError("need r >= 2, n >= 0, K >= 0")
    s = Fraction(str(s)) if not isinstance(s, Fraction) else s
    w = Fraction(1, r ** (2 * n))
    lines = [SpectralLine(0.0, 1, w, False, (0, None))]
    for k in range(-n, K + 1):
        mult = r ** (2 * (n + k + 1)) - r ** (2 * (n + k))
        lines.append(SpectralLine(float(r) ** (k * float(s)), mult, w, False, (1, k)))
    model = {"family": "uhf", "r": r, "s": intlat.format_rational(s), "level": n, "K": K}
    return SpectrumMultiset(tuple(lines), model, None)


def _uhf_E(r: int) -> np.ndarray:
    """Projection onto C·1 in L^2(M_r, normalized trace), in matrix-unit coordinates."""
    v = np.eye(r).reshape(-1)
    return np.outer(v, v) / r


def _kron_list(mats):
    out = np.eye(1)
    for m in mats:
        out = np.kron(out, m)
    return out


def uhf_tensor_projections(r: int, factors: int) -> list:
    """P_j = I^{⊗j} ⊗ E^{⊗(factors-j)} for j = 0..factors on L^2(M_r)^{⊗factors}."""
    E, I = _uhf_E(r), np.eye(r * r)
    return [_kron_list([I] * j + [E] * (factors - j)) for j in range(factors + 1)]


def uhf_tensor_dirac(r: int, s, n: int, K: int) -> np.ndarray:
    """The matrix Σ_{k=-n}^{K} r^{ks}(P_{n+k+1} - P_{n+k}) on n+K+1 factors."""
    P = uhf_tensor_projections(r, n + K + 1)
    s = float(s)
    return sum(float(r) ** (k * s) * (P[n + k + 1] - P[n + k]) for k in range(-n, K + 1))


def uhf_recursive_dirac(r: int, s, n: int, K: int) -> np.ndarray:
    """I^{⊗n} ⊗ D_0 + Σ_{k=1}^{n} r^{-sk} I^{⊗(n-k)} ⊗ F ⊗ E^{⊗(k-1+K+1)}, F = I - E."""
    E, I = _uhf_E(r), np.eye(r * r)
    F = I - E
    D0 = uhf_tensor_dirac(r, s, 0, K)
    out = np.kron(_kron_list([I] * n), D0)
    for k in range(1, n + 1):
        out = out + float(r) ** (-k * float(s)) * _kron_list([I] * (n - k) + [F] + [E] * (k - 1 + K + 1))
    return out


def uhf_tensor_oracle(r: int, s, n: int, K: int) -> dict:
    """Eigenvalue -> (rank, weight r^{-2n}·rank) by diagonalizing the explicit tensor matrix."""
    D = uhf_tensor_dirac(r, s, n, K)
    ev = np.linalg.eigvalsh(D)
    out: dict = {}
    levels = [0.0] + [float(r) ** (k * float(s)) for k in range(-n, K + 1)]
    for lam in levels:
        rank = int(np.sum(np.abs(ev - lam) < 1e-8))
        out[lam] = (rank, Fraction(rank, r ** (2 * n)))
    if sum(v[0] for v in out.values()) != len(ev):
        raise InvariantViolation("tensor oracle found eigenvalues off the predicted lines")
    return out


def _sym(x):
    import sympy

    return sympy.Rational(str(x)) if not isinstance(x, Fraction) else sympy.Rational(x.numerator, x.denominator)


def uhf_zeta_closed_form(r: int, s, n: int):
    """Σ_{k>=-n} w_k r^{-kst} = (r^2 - 1) r^{n(st-2)} / (1 - r^{2-st}) as a sympy expression in t."""
    import sympy

    t = sympy.Symbol("t", positive=True)
    R, S = sympy.Integer(r), _sym(s)
    return (R**2 - 1) * R ** (n * (S * t - 2)) / (1 - R ** (2 - S * t)), t


def uhf_abscissa(r: int, s):
    """Largest real pole of the closed-form zeta function: r^{2-st} = 1, i.e. t = 2/s."""
    import sympy

    expr, t = uhf_zeta_closed_form(r, s, 0)
    den = sympy.denom(sympy.together(expr))
    roots = sympy.solveset(sympy.Eq(den, 0), t, domain=sympy.S.Reals)
    return max(roots)


def uhf_residue(r: int, s, n: int):
    """Exact residue of the closed-form zeta function at t = 2/s."""
    import sympy

    expr, t = uhf_zeta_closed_form(r, s, n)
    t0 = uhf_abscissa(r, s)
    return sympy.simplify(sympy.limit((t - t0) * expr, t, t0))


def uhf_zeta_value(r: int, s, n: int, t):
    """Exact closed-form zeta value at rational t > 2/s."""
    import sympy

    expr, sym_t = uhf_zeta_closed_form(r, s, n)
    return sympy.nsimplify(expr.subs(sym_t, _sym(t)))


@dataclass(frozen=True)
class UHFCommutator:
    exact: float
    lower: float
    upper: float

    @property
    def ok(self) -> bool:
        return self.lower <= self.exact * (1 + 1e-12) and self.exact <= self.upper * (1 + 1e-12)


def _ntr(x):
    return np.trace(x) / x.shape[0]


def _l2(x):
    return math.sqrt(max(_ntr(x.conj().T @ x).real, 0.0))


def uhf_commutator(r: int, s, n: int, b, K: int = 1) -> UHFCommutator:
    """||[D_n, x_n]|| for x_n = b placed in the first factor of the level-n truncation.

    The exact value comes from the explicit tensor matrices on n+K+1 factors.
    The lower bound r^{-ns}||Tr(bb*)1 - bTr(b*)||_2 is a vector-state bound
    (apply the commutator to the unit vector x_n*/||x_n*||_2), so it is divided
    by max(1, ||b||_2). The upper bound is 2||b|| r^{-ns}/(1 - r^{-s}).
    """
    b = np.asarray(b, dtype=complex)
    N = n + K + 1
    D = uhf_tensor_dirac(r, s, n, K)
    Lb = np.kron(b, np.eye(r))  # x ↦ b x on row-major vectorized M_r
    X = np.kron(Lb, np.eye((r * r) ** (N - 1)))
    exact = float(np.linalg.norm(D @ X - X @ D, 2))
    s = float(s)
    vec = _ntr(b @ b.conj().T) * np.eye(r) - b * _ntr(b.conj().T)
    lower = float(r) ** (-n * s) * _l2(vec) / max(1.0, _l2(b))
    upper = 2 * float(np.linalg.norm(b, 2)) * float(r) ** (-n * s) / (1 - float(r) ** (-s))
    return UHFCommutator(exact, lower, upper)


def uhf_first_factor_norm(r: int, b) -> float:
    """||[E, L_b]|| on L^2(M_r); ||[D_n, x_n]|| = r^{-ns} times this."""
    b = np.asarray(b, dtype=complex)
    E, Lb = _uhf_E(r), np.kron(b, np.eye(r))
    return float(np.linalg.norm(E @ Lb - Lb @ E, 2))


def scalar_distance(b) -> float:
    """dist(b, C·1) in operator norm."""
    from scipy.optimize import minimize

    b = np.asarray(b, dtype=complex)
    c0 = _ntr(b)
    f = lambda v: np.linalg.norm(b - (v[0] + 1j * v[1]) * np.eye(len(b)), 2)
    res = minimize(f, [c0.real, c0.imag], method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14})
    return float(min(res.fun, f([c0.real, c0.imag])))


# ============================================================ Lip seminorms


@dataclass(frozen=True)
class TorusMonomial:
    """e^{2πi<ξ,t>}; also the scalar part of a central nc-torus monomial."""

    xi: tuple


@dataclass(frozen=True)
class CrossedUnitary:
    B: tuple
    level: int
    g: tuple
    window: int = 2


@dataclass(frozen=True)
class UHFElement:
    r: int
    s: object
    n: int
    b: object
    K: int = 1


@dataclass(frozen=True)
class LipNorm:
    value: float
    exact_sq: Fraction | None = None
    lower: float | None = None
    upper: float | None = None


def crossed_commutator_sq(B, level: int, g, window: int = 2) -> Fraction:
    """max ||ℓ(h) - ℓ(h - g)||^2 over h in a box of the level lattice G_level = A^level Z^p.

    [M_ℓ, U_g] maps δ_{h-g} to (ℓ(h) - ℓ(h-g)) δ_h; with the Clifford identity
    the norm of each block is the Euclidean length of the difference.
    """
    T = get_tower(B)
    g = tuple(Fraction(x) for x in g)
    if not T.in_level(g, level):
        raise ValueError("g is not in the level lattice")
    best = Fraction(0)
    for m in itertools.product(range(-window, window + 1), repeat=T.p):
        h = T.point(m, level)
        diff = tuple(a - (a - b) for a, b in zip(h, g))
        best = max(best, norm_sq(diff))
    return best


def commutator_lipnorm(model: str, x) -> LipNorm:
    if model in ("torus", "nctorus"):
        sq = norm_sq(tuple(Fraction(v) for v in x.xi))
        return LipNorm(TWO_PI * math.sqrt(sq), sq * 1)
    if model == "crossed":
        sq = crossed_commutator_sq(x.B, x.level, x.g, x.window)
        return LipNorm(math.sqrt(sq), sq)
    if model == "uhf":
        c = uhf_commutator(x.r, x.s, x.n, x.b, x.K)
        if not c.ok:
            raise InvariantViolation(f"UHF commutator outside its bounds: {c}")
        return LipNorm(c.exact, None, c.lower, c.upper)
    raise ValueError(f"unknown model {model!r}")


@dataclass(frozen=True)
class RadiiRow:
    k: int
    seminorm: float
    quotient_norm: float
    seminorm_sq_over: Fraction | None = None


def radii_divergence(model: str, k_max: int, B=None, theta=None, r: int = 2, s=1, b=None) -> list:
    """Rows (k, L(x_k), quotient norm of x_k / L(x_k)).

    torus: x_k = e^{2πi<A^k e_1, t>}; crossed: x_k = U_{A^k e_1};
    nctorus: the central element with frequency p A^k e_1 for θ = p/q;
    uhf: x_k = b in tensor position -k. For single monomials the quotient norm
    of x_k is ||x_k|| = 1; for uhf it is dist(b, C1). ``seminorm_sq_over``
    holds L^2 divided by (2π)^2 (torus models) or L^2 (crossed), exactly.
    """
    import warnings

    rows = []
    if model in ("torus", "crossed", "nctorus"):
        T = get_tower(B)
        if not intlat.purely_expanding(T.B).purely_expanding:
            warnings.warn("matrix is not purely expanding; radii need not diverge", stacklevel=2)
        mult = 1
        if model == "nctorus":
            from .nctorus import _angle

            mult = _angle(theta).p
        for k in range(k_max + 1):
            e1 = tuple(Fraction(int(i == 0)) for i in range(T.p))
            xi = tuple(mult * v for v in intlat.mat_vec(T.A_pow(k), e1))
            sq = norm_sq(xi)
            L = (TWO_PI if model != "crossed" else 1.0) * math.sqrt(sq)
            rows.append(RadiiRow(k, L, 1.0 / L, sq))
        return rows
    if model == "uhf":
        b = np.diag([1.0] + [0.0] * (r - 1)) if b is None else np.asarray(b, dtype=complex)
        base = uhf_first_factor_norm(r, b)
        dist = scalar_distance(b)
        for k in range(k_max + 1):
            L = float(r) ** (-k * float(s)) * base
            rows.append(RadiiRow(k, L, dist / L))
        return rows
    raise ValueError(f"unknown model {model!r}")


@dataclass(frozen=True)
class LipScaling:
    ok: bool
    ratio_sq: Fraction | None
    base_sq: Fraction
    scaled_sq: Fraction


def lip_scaling_check(m, n: int, theta="1/3") -> LipScaling:
    """L(φ_n(W(m))) = 2^{-n} L(W(m)) for B = 2I, with L = 2π||scalar frequency||."""
    from .nctorus import _angle, scaled_weyl

    th = _angle(theta).value
    base = norm_sq(tuple(th * x for x in m))
    phi = scaled_weyl(m, n, theta)
    (freq,) = phi.terms
    scaled = norm_sq(freq)
    if base == 0:
        return LipScaling(scaled == 0, None, base, scaled)
    ratio = scaled / base
    return LipScaling(ratio == Fraction(1, 4**n), ratio, base, scaled)
