"""Dilated lattices, the deck group Z^p/BZ^p and its dual, sections and cocycles.

A level-n frequency is a point xi = A^n m of the lattice A^n Z^p, where
A = (B^T)^{-1}. Dual classes (elements of Aℤ^p/ℤ^p) are keyed by their
canonical representative s_1(k) in [0,1)^p, stored as a tuple of Fractions.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import intlat
from .intlat import IntMatrix

Vec = tuple[Fraction, ...]


class TrivialCoveringError(ValueError):
    pass


class LatticeMembershipError(ValueError):
    pass


def frac_part(x: Fraction) -> Fraction:
    return x - math.floor(x)


def frac_vec(v: Iterable) -> Vec:
    return tuple(frac_part(Fraction(x)) for x in v)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_neg(u):
    return tuple(-a for a in u)


def norm_sq(v) -> Fraction:
    return sum((Fraction(a) * a for a in v), Fraction(0))


def pairing(x: Sequence, y: Sequence) -> Fraction:
    """The phase of <x, y> = exp(2πi Σ x_a y_a), as an element of [0, 1)."""
    return frac_part(sum((Fraction(a) * b for a, b in zip(x, y)), Fraction(0)))


# ------------------------------------------------------------ quotient group


@dataclass(frozen=True)
class QuotientGroup:
    B: IntMatrix
    A: intlat.RatMatrix
    order: int
    factors: tuple[int, ...]
    dual_reps: tuple[Vec, ...]
    group_reps: tuple[tuple[int, ...], ...]

    @property
    def p(self) -> int:
        return len(self.B)

    @property
    def zero(self) -> Vec:
        return self.dual_reps[0]

    def dual_index(self, k: Vec) -> int:
        return self._dual_index[k]

    def dual_add(self, j: Vec, k: Vec) -> Vec:
        return frac_vec(vec_add(j, k))

    def dual_neg(self, k: Vec) -> Vec:
        return frac_vec(vec_neg(k))

    def character(self, k: Vec, g: Sequence[int]) -> Fraction:
        """Phase of the character k evaluated at the group element g."""
        return pairing(k, g)

    def to_json(self) -> dict:
        fmt = intlat.format_rational
        return {
            "order": self.order,
            "factors": list(self.factors),
            "dual_reps": [[fmt(x) for x in s] for s in self.dual_reps],
            "group_reps": [list(g) for g in self.group_reps],
        }

    def __post_init__(self):
        object.__setattr__(self, "_dual_index", {s: i for i, s in enumerate(self.dual_reps)})


@lru_cache(maxsize=256)
def _enumerate_quotient(B: IntMatrix) -> QuotientGroup:
    r = abs(intlat.det(B))
    if r == 0:
        raise intlat.SingularMatrixError("singular covering matrix")
    if r == 1:
        raise TrivialCoveringError("trivial covering")
    snf = intlat.smith_normal_form(B)
    A = intlat.inverse_transpose(B)
    d = snf.factors
    St = intlat.transpose(snf.S)
    S_inv = intlat.to_int_matrix(intlat.inverse(snf.S))
    B_inv = intlat.inverse(B)
    dual, group = set(), set()
    for j in itertools.product(*(range(di) for di in d)):
        dual.add(frac_vec(intlat.mat_vec(St, [Fraction(ji, di) for ji, di in zip(j, d)])))
        g = intlat.mat_vec(S_inv, j)
        shift = tuple(math.floor(c) for c in intlat.mat_vec(B_inv, g))
        group.add(tuple(int(a - b) for a, b in zip(g, intlat.mat_vec(B, shift))))
    assert len(dual) == r and len(group) == r
    return QuotientGroup(B, A, r, d, tuple(sorted(dual)), tuple(sorted(group)))


def enumerate_quotient(B) -> QuotientGroup:
    """Deck group Z^p/BZ^p and its dual AZ^p/Z^p with canonical representatives."""
    return _enumerate_quotient(intlat.as_matrix(B))


def schur_orthogonality_check(G: QuotientGroup) -> tuple[bool, tuple[int, ...] | None]:
    """Verify Σ_k <k, g> = |Γ|·δ_{g,0} exactly for every group element g.

    The phases k ↦ <k, g> form a homomorphism onto a cyclic subgroup of Q/Z
    of some order m, so the sum vanishes iff every m-th root of unity occurs
    equally often and m > 1. Returns ``(ok, offending g or None)``.
    """
    for g in G.group_reps:
        counts = Counter(G.character(k, g) for k in G.dual_reps)
        m = len(counts)
        expected = {Fraction(j, m) for j in range(m)}
        balanced = set(counts) == expected and len(set(counts.values())) == 1
        trivial = all(x == 0 for x in g)
        if not balanced or (m == 1) != trivial:
            return False, g
    return True, None


# ------------------------------------------------------------ tower


class Tower:
    """Cached powers of A and B^T and the deck-group data for one matrix B."""

    def __init__(self, B):
        self.B = intlat.as_matrix(B)
        self.p = len(self.B)
        self.r = abs(intlat.det(self.B))
        self.A = intlat.inverse_transpose(self.B)
        self.Bt = intlat.transpose(self.B)
        self._A_pows = [intlat.identity(self.p)]
        self._Bt_pows = [intlat.identity(self.p)]

    @cached_property
    def group(self) -> QuotientGroup:
        return enumerate_quotient(self.B)

    def A_pow(self, n: int):
        while len(self._A_pows) <= n:
            self._A_pows.append(intlat.mat_mul(self._A_pows[-1], self.A))
        return self._A_pows[n]

    def Bt_pow(self, n: int):
        while len(self._Bt_pows) <= n:
            self._Bt_pows.append(intlat.mat_mul(self._Bt_pows[-1], self.Bt))
        return self._Bt_pows[n]

    def point(self, m: Sequence[int], n: int) -> Vec:
        """The frequency xi = A^n m."""
        return tuple(Fraction(x) for x in intlat.mat_vec(self.A_pow(n), m))

    def coords(self, xi: Sequence, n: int) -> tuple[int, ...]:
        m = intlat.mat_vec(self.Bt_pow(n), xi)
        if any(Fraction(x).denominator != 1 for x in m):
            raise LatticeMembershipError("not a level-n frequency")
        return tuple(int(x) for x in m)

    def in_level(self, xi: Sequence, n: int) -> bool:
        return all(Fraction(x).denominator == 1 for x in intlat.mat_vec(self.Bt_pow(n), xi))

    def section(self, n: int, k: Vec) -> Vec:
        """s_n(k) = A^{n-1} s_1(k)."""
        if n < 1:
            raise ValueError("sections start at level 1")
        return tuple(Fraction(x) for x in intlat.mat_vec(self.A_pow(n - 1), k))

    def class_of(self, xi: Sequence, n: int) -> Vec:
        """Class of xi in A^n Z^p / A^{n-1} Z^p, as its s_1 representative."""
        if not self.in_level(xi, n):
            raise LatticeMembershipError("not a level-n frequency")
        return frac_vec(intlat.mat_vec(self.Bt_pow(n - 1), xi))


@lru_cache(maxsize=64)
def tower(B: IntMatrix) -> Tower:
    return Tower(B)


def get_tower(B) -> Tower:
    return tower(intlat.as_matrix(B))


def canonical_section(B, n: int) -> dict[Vec, Vec]:
    """Map each dual class k to s_n(k) = A^{n-1} s_1(k)."""
    T = get_tower(B)
    return {k: T.section(n, k) for k in T.group.dual_reps}


@dataclass(frozen=True)
class Cocycle:
    level: int
    table: dict

    def __call__(self, j: Vec, k: Vec) -> Vec:
        return self.table[(j, k)]


def cocycle_table(B, n: int) -> Cocycle:
    """ω_n(j, k) = s_n(j) + s_n(k) - s_n(j + k), checked to lie in A^{n-1}Z^p."""
    T = get_tower(B)
    G = T.group
    table = {}
    for j in G.dual_reps:
        for k in G.dual_reps:
            w = vec_sub(vec_add(T.section(n, j), T.section(n, k)), T.section(n, G.dual_add(j, k)))
            if not T.in_level(w, n - 1):
                raise AssertionError(f"cocycle value {w} outside the lower lattice")
            table[(j, k)] = w
    return Cocycle(n, table)


def check_cocycle_identity(B, n: int) -> bool:
    G = get_tower(B).group
    w = cocycle_table(B, n)
    for j, k, l in itertools.product(G.dual_reps, repeat=3):
        lhs = vec_add(w(j, k), w(G.dual_add(j, k), l))
        rhs = vec_add(w(k, l), w(j, G.dual_add(k, l)))
        if lhs != rhs:
            return False
    return True


# ----------------------------------------------------------- mode bijection


def mode_bijection_fwd(B, n: int, m: Sequence[int], ks: Sequence[Vec]) -> Vec:
    """xi = m + Σ_{h=1}^n s_h(k_h); ``ks[h-1]`` is k_h."""
    T = get_tower(B)
    if len(ks) != n:
        raise ValueError("need one dual class per level")
    xi = tuple(Fraction(x) for x in m)
    for h, k in enumerate(ks, start=1):
        xi = vec_add(xi, T.section(h, k))
    return xi


def mode_bijection_inv(B, n: int, xi: Sequence) -> tuple[tuple[int, ...], tuple[Vec, ...]]:
    """Peel k_n, ..., k_1 off a level-n frequency; returns (m, (k_1, ..., k_n))."""
    T = get_tower(B)
    xi = tuple(Fraction(x) for x in xi)
    if not T.in_level(xi, n):
        raise LatticeMembershipError("not a level-n frequency")
    ks = []
    for h in range(n, 0, -1):
        k = T.class_of(xi, h)
        ks.append(k)
        xi = vec_sub(xi, T.section(h, k))
    return tuple(int(x) for x in xi), tuple(reversed(ks))


# ----------------------------------------------------------- ball enumeration


def ceil_sqrt(q: Fraction) -> int:
    q = Fraction(q)
    r = math.isqrt(q.numerator // q.denominator)
    while Fraction(r * r) < q:
        r += 1
    return r


@dataclass(frozen=True)
class BallPoints:
    """Lattice points A^n m of a ball, with exact squared norms.

    ``norm_num[i] / denom`` is ||xi_i||^2; ``coords`` are the integer m.
    """

    coords: np.ndarray
    norm_num: np.ndarray
    denom: int
    level: int

    def __len__(self) -> int:
        return len(self.coords)


def _quadratic_form(M):
    G = intlat.mat_mul(intlat.transpose(M), M)
    den = 1
    for row in G:
        for x in row:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    Gi = [[int(Fraction(x) * den) for x in row] for row in G]
    return Gi, den


def integer_ball(Q, den: int, center_bound: int, R_sq: Fraction, offset=None):
    """Integer vectors m in the box |m|_inf <= bound with (m+offset)^T Q (m+offset)/den <= R_sq.

    ``Q`` is an integer Gram matrix. With an ``offset`` (a rational vector)
    everything is scaled to integers before comparing.
    """
    p = len(Q)
    ax = np.arange(-center_bound, center_bound + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([ax] * p), indexing="ij"), axis=-1).reshape(-1, p)
    if offset is None:
        scale = 1
        pts = grid
    else:
        scale = 1
        for x in offset:
            scale = scale * Fraction(x).denominator // math.gcd(scale, Fraction(x).denominator)
        off = np.array([int(Fraction(x) * scale) for x in offset], dtype=np.int64)
        pts = grid * scale + off
    Qa = np.array(Q, dtype=object if _too_big(Q, pts) else np.int64)
    P = pts.astype(Qa.dtype)
    vals = np.einsum("ij,jk,ik->i", P, Qa, P) if Qa.dtype != object else np.array(
        [int(sum(int(P[i, a]) * Q[a][b] * int(P[i, b]) for a in range(p) for b in range(p))) for i in range(len(P))],
        dtype=object,
    )
    limit = R_sq * den * scale * scale
    # vals are integers, so vals <= limit iff vals <= floor(limit)
    cap = limit.numerator // limit.denominator
    if vals.dtype != object:
        cap = min(cap, np.iinfo(np.int64).max)
    keep = vals <= cap
    return grid[keep], vals[keep], den * scale * scale


def _too_big(Q, pts) -> bool:
    if len(pts) == 0:
        return False
    qmax = max(abs(x) for row in Q for x in row)
    pmax = int(np.abs(pts).max())
    return qmax * pmax * pmax * len(Q) ** 2 * 4 > 2**62


def ball_points(B, n: int, R_sq) -> BallPoints:
    """Exact enumeration of A^n Z^p ∩ {||xi||^2 <= R_sq}.

    Box bound: m = (B^T)^n xi, so |m|_inf <= rowsum((B^T)^n)·R.
    """
    T = get_tower(B)
    R_sq = Fraction(R_sq)
    if R_sq < 0:
        raise ValueError("radius must be non-negative")
    bound = math.ceil(intlat.row_sum_norm(T.Bt_pow(n)) * ceil_sqrt(R_sq))
    Q, den = _quadratic_form(T.A_pow(n))
    coords, vals, den = integer_ball(Q, den, bound, R_sq)
    order = np.lexsort(coords.T[::-1]) if len(coords) else np.arange(0)
    return BallPoints(coords[order], vals[order], den, n)


def enumerate_ball(B, n: int, R_sq) -> list[Vec]:
    """Points xi of A^n Z^p with ||xi||^2 <= R_sq, in lexicographic order of m."""
    T = get_tower(B)
    pts = ball_points(B, n, R_sq)
    return [T.point(tuple(int(x) for x in m), n) for m in pts.coords]
