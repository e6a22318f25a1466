"""Covering-algebra engine: trigonometric polynomials on the covering tori.

A level-n element is f(t) = Σ c_ξ e^{2πi<ξ,t>} with ξ in A^n Z^p. Terms are
keyed by the integer coordinates m of ξ = A^n m, so products and shifts stay
in integer arithmetic. Coefficients are exact cyclotomic numbers
(:class:`~ncsolenoid.cyclotomic.Cyc`) or, as a fallback, complex doubles.

Sign conventions. The deck transformation with translation vector g acts by
γ_g(f)(t) = f(t - g), multiplying c_ξ by <ξ, -g>. Hence the eigenspace for
the character k holds the frequencies whose class is -k, and the unitary
σ(k) = conj<s(k), t> (frequency -s(k)) lies in eigenspace k.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import intlat
from .cyclotomic import Cyc
from .lattice import Tower, Vec, frac_vec, get_tower, pairing, vec_neg

COMPLEX_TOL = 1e-12


class SupportLeakError(AssertionError):
    """An entry of M(b) left the lower lattice: a section bug."""


def _coeff(x):
    if isinstance(x, (Cyc, complex, float)):
        return complex(x) if isinstance(x, float) else x
    return Cyc.coerce(x)


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, Cyc) else c == 0


def _conj(c):
    return c.conjugate()


def coeff_equal(a, b) -> bool:
    if isinstance(a, Cyc) and isinstance(b, Cyc):
        return a == b
    return abs(complex(a) - complex(b)) <= COMPLEX_TOL


def phase(x) -> Cyc:
    return Cyc.root(x)


# ================================================================ TrigPoly


class TrigPoly:
    """Finitely supported Fourier series on the level-n torus R^p / B^n Z^p."""

    __slots__ = ("tower", "level", "terms")

    def __init__(self, tower: Tower, level: int, terms: Mapping[tuple[int, ...], object] = ()):
        self.tower = tower
        self.level = level
        clean = {}
        for m, c in dict(terms).items():
            c = _coeff(c)
            if not _is_zero(c):
                clean[tuple(m)] = c
        self.terms = clean

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, B, level: int) -> "TrigPoly":
        return cls(get_tower(B) if not isinstance(B, Tower) else B, level, {})

    @classmethod
    def constant(cls, B, level: int, c=1) -> "TrigPoly":
        T = get_tower(B) if not isinstance(B, Tower) else B
        return cls(T, level, {(0,) * T.p: c})

    @classmethod
    def monomial(cls, B, level: int, xi: Sequence, c=1) -> "TrigPoly":
        T = get_tower(B) if not isinstance(B, Tower) else B
        return cls(T, level, {T.coords(xi, level): c})

    @classmethod
    def from_frequencies(cls, B, level: int, terms: Mapping[Sequence, object]) -> "TrigPoly":
        T = get_tower(B) if not isinstance(B, Tower) else B
        out = {}
        for xi, c in terms.items():
            m = T.coords(xi, level)
            out[m] = out.get(m, 0) + _coeff(c)
        return cls(T, level, out)

    # -- views -------------------------------------------------------------

    def frequencies(self) -> dict[Vec, object]:
        return {self.tower.point(m, self.level): c for m, c in self.terms.items()}

    def coefficient(self, xi: Sequence):
        return self.terms.get(self.tower.coords(xi, self.level), Cyc.rational(0))

    def at_level(self, n: int) -> "TrigPoly":
        """The same function viewed at level n (must contain all frequencies)."""
        if n == self.level:
            return self
        T = self.tower
        if n > self.level:
            M = T.Bt_pow(n - self.level)
            return TrigPoly(T, n, {tuple(int(x) for x in intlat.mat_vec(M, m)): c for m, c in self.terms.items()})
        M = T.A_pow(self.level - n)
        out = {}
        for m, c in self.terms.items():
            v = intlat.mat_vec(M, m)
            if any(Fraction(x).denominator != 1 for x in v):
                raise SupportLeakError(f"frequency with coordinates {m} is not at level {n}")
            out[tuple(int(x) for x in v)] = c
        return TrigPoly(T, n, out)

    def is_exact(self) -> bool:
        return all(isinstance(c, Cyc) for c in self.terms.values())

    def __len__(self):
        return len(self.terms)

    # -- algebra -----------------------------------------------------------

    def _align(self, other: "TrigPoly"):
        if self.tower is not other.tower:
            raise ValueError("elements of different towers")
        n = max(self.level, other.level)
        return self.at_level(n), other.at_level(n), n

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(self.tower, self.level, other)
        a, b, n = self._align(other)
        out = dict(a.terms)
        for m, c in b.terms.items():
            out[m] = out[m] + c if m in out else c
        return TrigPoly(self.tower, n, out)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(self.tower, self.level, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TrigPoly):
            c = _coeff(other)
            return TrigPoly(self.tower, self.level, {m: v * c for m, v in self.terms.items()})
        a, b, n = self._align(other)
        out: dict = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return TrigPoly(self.tower, n, out)

    def __rmul__(self, other):
        return self * other

    def adjoint(self) -> "TrigPoly":
        return TrigPoly(self.tower, self.level, {tuple(-x for x in m): _conj(c) for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(self.tower, self.level, other)
        a, b, _ = self._align(other)
        keys = set(a.terms) | set(b.terms)
        zero = Cyc.rational(0)
        return all(coeff_equal(a.terms.get(m, zero), b.terms.get(m, zero)) for m in keys)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def l2_norm_sq(self):
        """Σ |c_ξ|^2, the squared norm in L^2 for the normalized Haar measure."""
        total = Cyc.rational(0) if self.is_exact() else 0.0
        for c in self.terms.values():
            total = total + (c * _conj(c) if isinstance(c, Cyc) else abs(c) ** 2)
        return total

    def term_class(self, m) -> Vec:
        """Class of the frequency A^n m in A^n Z^p / A^{n-1} Z^p."""
        return frac_vec(intlat.mat_vec(self.tower.A, m))

    def __repr__(self):
        return f"TrigPoly(level={self.level}, terms={len(self.terms)})"


# ============================================================ deck action etc.


def deck_translation(B, n: int, ghat: Sequence[int]) -> Vec:
    """Translation vector B^{n-1} ĝ realizing the group element ĝ at level n."""
    T = get_tower(B) if not isinstance(B, Tower) else B
    Bn = intlat.mat_pow(T.B, n - 1)
    return tuple(Fraction(x) for x in intlat.mat_vec(Bn, ghat))


def deck_action(g: Sequence, f):
    """γ_g: c_ξ ↦ <ξ, -g> c_ξ, i.e. f ↦ f(· - g).

    For a :class:`MatTrigPoly` pass ``(g, W)`` to also conjugate by the
    unitary W.
    """
    if isinstance(f, MatTrigPoly):
        g, W = g
        return f.deck_action(g, W)
    out = {}
    for m, c in f.terms.items():
        xi = f.tower.point(m, f.level)
        out[m] = c * phase(-pairing(xi, g))
    return TrigPoly(f.tower, f.level, out)


def eigenspace_label(f: TrigPoly, m) -> Vec:
    """Character label of a single term: the negative of its frequency class."""
    return frac_vec(vec_neg(f.term_class(m)))


def eigenspace_project(k: Vec, b: TrigPoly) -> TrigPoly:
    """E_k(b): keep the terms whose frequency class is -k (see module notes)."""
    if b.level < 1:
        raise ValueError("eigenspaces live at level >= 1")
    k = frac_vec(k)
    return TrigPoly(b.tower, b.level, {m: c for m, c in b.terms.items() if eigenspace_label(b, m) == k})


def eigenspace_average(k: Vec, b: TrigPoly) -> TrigPoly:
    """E_k(b) computed as (1/|Γ|) Σ_g <-k, g> γ_g(b); slow oracle for tests."""
    T = b.tower
    G = T.group
    total = TrigPoly(T, b.level, {})
    for gh in G.group_reps:
        shifted = deck_action(deck_translation(T, b.level, gh), b)
        total = total + shifted * phase(-pairing(k, gh))
    return total * Fraction(1, G.order)


def eigen_decomposition(b: TrigPoly) -> dict[Vec, TrigPoly]:
    parts: dict[Vec, dict] = {}
    for m, c in b.terms.items():
        parts.setdefault(eigenspace_label(b, m), {})[m] = c
    return {k: TrigPoly(b.tower, b.level, t) for k, t in parts.items()}


def sigma_unitary(B, k: Vec, n: int) -> TrigPoly:
    """σ(k) = conj<s_n(k), t>: one term, frequency -s_n(k), coefficient 1."""
    T = get_tower(B) if not isinstance(B, Tower) else B
    return TrigPoly.monomial(T, n, vec_neg(T.section(n, k)), 1)


# ============================================================ matrix embedding


class EmbeddedMatrix:
    """Sparse r×r matrix of level-(n-1) trig polynomials, indexed by dual classes."""

    __slots__ = ("tower", "level", "entries")

    def __init__(self, tower: Tower, level: int, entries: Mapping[tuple[int, int], TrigPoly]):
        self.tower = tower
        self.level = level
        self.entries = {ij: e for ij, e in entries.items() if not e.is_zero()}

    @property
    def size(self) -> int:
        return self.tower.group.order

    def __getitem__(self, ij):
        e = self.entries.get(ij)
        return e if e is not None else TrigPoly(self.tower, self.level, {})

    def __matmul__(self, other: "EmbeddedMatrix") -> "EmbeddedMatrix":
        rows: dict[int, list] = {}
        for (i, j), e in other.entries.items():
            rows.setdefault(i, []).append((j, e))
        out: dict = {}
        for (i, l), a in self.entries.items():
            for j, b in rows.get(l, ()):
                prod = a * b
                out[(i, j)] = out[(i, j)] + prod if (i, j) in out else prod
        return EmbeddedMatrix(self.tower, self.level, out)

    def adjoint(self) -> "EmbeddedMatrix":
        return EmbeddedMatrix(self.tower, self.level, {(j, i): e.adjoint() for (i, j), e in self.entries.items()})

    def __eq__(self, other):
        keys = set(self.entries) | set(other.entries)
        return all(self[ij] == other[ij] for ij in keys)

    __hash__ = None

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self.entries)

    def dense(self) -> list[list[TrigPoly]]:
        r = self.size
        return [[self[(i, j)] for j in range(r)] for i in range(r)]


def _section_coords(T: Tower, n: int, k: Vec) -> tuple[int, ...]:
    return T.coords(T.section(n, k), n)


def matrix_embed(b: TrigPoly) -> EmbeddedMatrix:
    """M(b)_{hk} = σ(h)^{-1} b_{h-k} σ(k), entries at level n-1."""
    T, n = b.tower, b.level
    if n < 1:
        raise ValueError("matrix_embed needs a level >= 1 element")
    G = T.group
    reps = G.dual_reps
    sec = [_section_coords(T, n, k) for k in reps]
    parts = eigen_decomposition(b)
    out = {}
    for hi, h in enumerate(reps):
        for c, bc in parts.items():
            # b_{h-k} = b_c  means k = h - c
            k = G.dual_add(h, G.dual_neg(c))
            ki = G.dual_index(k)
            shift = tuple(x - y for x, y in zip(sec[hi], sec[ki]))
            shifted = TrigPoly(T, n, {tuple(a + s for a, s in zip(m, shift)): v for m, v in bc.terms.items()})
            out[(hi, ki)] = shifted.at_level(n - 1)
    return EmbeddedMatrix(T, n - 1, out)


def embedded_identity(B, level: int) -> EmbeddedMatrix:
    T = get_tower(B) if not isinstance(B, Tower) else B
    one = TrigPoly.constant(T, level, 1)
    return EmbeddedMatrix(T, level, {(i, i): one for i in range(T.group.order)})


def l2_isometry(b: TrigPoly) -> list[TrigPoly]:
    """a_j = σ(j)^{-1} E_j(b), lowered to level n-1, in dual-rep order."""
    T, n = b.tower, b.level
    parts = eigen_decomposition(b)
    out = []
    for j in T.group.dual_reps:
        bj = parts.get(j, TrigPoly(T, n, {}))
        out.append((sigma_unitary(T, j, n).adjoint() * bj).at_level(n - 1))
    return out


# ================================================================ can map


@dataclass
class CanSolution:
    coefficients: dict  # (j_index, k_index) -> level n-1 TrigPoly
    reproduces_targets: bool


def can_apply(T: Tower, n: int, a: Mapping[tuple[int, int], TrigPoly]) -> dict[tuple[int, ...], TrigPoly]:
    """can(Σ σ(j) a_{jk} ⊗ σ(k))(g) = Σ_{j,k} <k, -g> σ(j) a_{jk} σ(k)."""
    G = T.group
    reps = G.dual_reps
    sig = [sigma_unitary(T, k, n) for k in reps]
    terms = {(j, k): sig[j] * a_jk.at_level(n) * sig[k] for (j, k), a_jk in a.items()}
    out = {}
    for gh in G.group_reps:
        total = TrigPoly(T, n, {})
        for (j, k), t in terms.items():
            total = total + t * phase(-pairing(reps[k], gh))
        out[gh] = total
    return out


def can_solve(targets: Mapping[tuple[int, ...], TrigPoly]) -> CanSolution:
    """Recover a_{jk} from the family b(g) = can(z)(g).

    With Y_l = (1/|Γ|) Σ_g <l, g> b(g) σ(l)^{-1} = Σ_j σ(j) a_{jl}, each
    a_{jl} is σ(j)^{-1} E_j(Y_l).
    """
    first = next(iter(targets.values()))
    T, n = first.tower, first.level
    G = T.group
    reps = G.dual_reps
    if set(targets) != set(G.group_reps):
        raise ValueError("need one target per group element")
    targets = {g: b.at_level(n) for g, b in targets.items()}
    coeffs = {}
    for li, l in enumerate(reps):
        Y = TrigPoly(T, n, {})
        for gh, b in targets.items():
            Y = Y + b * phase(pairing(l, gh))
        Y = Y * sigma_unitary(T, l, n).adjoint() * Fraction(1, G.order)
        for ji, part in enumerate(l2_isometry(Y)):
            if not part.is_zero():
                coeffs[(ji, li)] = part
    back = can_apply(T, n, coeffs)
    ok = all(back[g] == targets[g] for g in G.group_reps)
    return CanSolution(coeffs, ok)


# ===================================================== random test elements


def random_trigpoly(B, level: int, rng: random.Random, terms: int = 4, box: int = 3, phase_den: int = 12) -> TrigPoly:
    """Random element with phase-rational coefficients q·e^{2πi j/phase_den}."""
    T = get_tower(B) if not isinstance(B, Tower) else B
    out = {}
    for _ in range(terms):
        m = tuple(rng.randint(-box, box) for _ in range(T.p))
        c = Cyc.root(Fraction(rng.randrange(phase_den), phase_den), Fraction(rng.randint(1, 5), rng.randint(1, 3)))
        out[m] = out[m] + c if m in out else c
    return TrigPoly(T, level, out)


# ============================================================ MatTrigPoly


def _obj_zeros(q):
    a = np.empty((q, q), dtype=object)
    for i in range(q):
        for j in range(q):
            a[i, j] = Cyc.rational(0)
    return a


def obj_identity(q):
    a = _obj_zeros(q)
    for i in range(q):
        a[i, i] = Cyc.rational(1)
    return a


def obj_matrix(rows) -> np.ndarray:
    rows = [list(r) for r in rows]
    q = len(rows)
    a = np.empty((q, q), dtype=object)
    for i in range(q):
        for j in range(q):
            a[i, j] = _coeff(rows[i][j])
    return a


def obj_adjoint(M: np.ndarray) -> np.ndarray:
    q = M.shape[0]
    out = np.empty_like(M)
    for i in range(q):
        for j in range(q):
            out[i, j] = M[j, i].conjugate()
    return out


def obj_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    q = X.shape[0]
    out = np.empty((q, q), dtype=object)
    for i in range(q):
        for j in range(q):
            acc = Cyc.rational(0)
            for l in range(q):
                x = X[i, l]
                if not _is_zero(x):
                    y = Y[l, j]
                    if not _is_zero(y):
                        acc = acc + x * y
            out[i, j] = acc
    return out


def obj_is_zero(M: np.ndarray) -> bool:
    return all(_is_zero(x) for x in M.flat)


def obj_equal(X: np.ndarray, Y: np.ndarray) -> bool:
    return all(coeff_equal(a, b) for a, b in zip(X.flat, Y.flat))


def obj_to_complex(M: np.ndarray) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in M], dtype=complex)


class MatTrigPoly:
    """M_q-valued trigonometric polynomial f(t) = Σ_ξ e^{2πi<ξ,t>} M_ξ.

    Frequencies are arbitrary rational vectors; membership in a particular
    dilated lattice is checked by the callers that need it.
    """

    __slots__ = ("q", "terms")

    def __init__(self, q: int, terms: Mapping[Vec, np.ndarray] = ()):
        self.q = q
        self.terms = {}
        for xi, M in dict(terms).items():
            xi = tuple(Fraction(x) for x in xi)
            if not obj_is_zero(M):
                self.terms[xi] = M

    @classmethod
    def constant(cls, M) -> "MatTrigPoly":
        M = M if isinstance(M, np.ndarray) else obj_matrix(M)
        return cls(M.shape[0], {(Fraction(0), Fraction(0)): M})

    @classmethod
    def identity(cls, q: int, p: int = 2) -> "MatTrigPoly":
        return cls(q, {(Fraction(0),) * p: obj_identity(q)})

    def __mul__(self, other):
        if not isinstance(other, MatTrigPoly):
            c = _coeff(other)
            return MatTrigPoly(self.q, {xi: np.vectorize(lambda x: x * c, otypes=[object])(M) for xi, M in self.terms.items()})
        out: dict = {}
        for x1, M1 in self.terms.items():
            for x2, M2 in other.terms.items():
                xi = tuple(a + b for a, b in zip(x1, x2))
                P = obj_matmul(M1, M2)
                out[xi] = out[xi] + P if xi in out else P
        return MatTrigPoly(self.q, out)

    def __rmul__(self, other):
        return self * other

    def __add__(self, other):
        out = dict(self.terms)
        for xi, M in other.terms.items():
            out[xi] = out[xi] + M if xi in out else M
        return MatTrigPoly(self.q, out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def adjoint(self) -> "MatTrigPoly":
        return MatTrigPoly(self.q, {tuple(-x for x in xi): obj_adjoint(M) for xi, M in self.terms.items()})

    def power(self, k: int) -> "MatTrigPoly":
        """Integer power; negative powers use the adjoint (unitary elements)."""
        base = self if k >= 0 else self.adjoint()
        result = MatTrigPoly.identity(self.q, len(next(iter(self.terms))))
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        keys = set(self.terms) | set(other.terms)
        z = _obj_zeros(self.q)
        return all(obj_equal(self.terms.get(x, z), other.terms.get(x, z)) for x in keys)

    __hash__ = None

    def first_difference(self, other):
        """The first frequency (sorted) at which two elements differ, or None."""
        z = _obj_zeros(self.q)
        for xi in sorted(set(self.terms) | set(other.terms)):
            if not obj_equal(self.terms.get(xi, z), other.terms.get(xi, z)):
                return xi, self.terms.get(xi, z), other.terms.get(xi, z)
        return None

    def trace(self):
        """τ(f) = (1/q)·tr of the zero-frequency coefficient."""
        zero = next((xi for xi in self.terms if not any(xi)), None)
        if zero is None:
            return Cyc.rational(0)
        M = self.terms[zero]
        return sum((M[i, i] for i in range(self.q)), Cyc.rational(0)) / self.q

    def deck_action(self, g: Sequence, W: np.ndarray) -> "MatTrigPoly":
        """f ↦ ad(W)[f(· - g)]: c_ξ ↦ <ξ, -g> W M_ξ W^{-1}, W unitary."""
        Wi = obj_adjoint(W)
        out = {}
        for xi, M in self.terms.items():
            ph = phase(-pairing(xi, g))
            out[xi] = np.vectorize(lambda x: x * ph, otypes=[object])(obj_matmul(obj_matmul(W, M), Wi))
        return MatTrigPoly(self.q, out)

    def __repr__(self):
        return f"MatTrigPoly(q={self.q}, terms={len(self.terms)})"


# ============================================================ regularity


@dataclass(frozen=True)
class FinDimCovering:
    """M_q(C) with an action of ⊕ Z_{n_i}; generator i acts by ad(J_i)."""

    q: int
    orders: tuple[int, ...]
    unitaries: tuple  # sympy matrices


@dataclass
class RegularityEntry:
    label: tuple
    dimension: int
    status: str  # "unitary found" | "no invertible element"
    unitary: np.ndarray | None = None
    sample: np.ndarray | None = None


def _sympy():
    import sympy

    return sympy


def check_action(cov: FinDimCovering) -> bool:
    """Group relations hold for the implementing unitaries up to a phase."""
    sp = _sympy()
    Js = [sp.Matrix(J) for J in cov.unitaries]
    eye = sp.eye(cov.q)

    def scalar(M):
        c = M[0, 0]
        return c != 0 and sp.simplify(M - c * eye) == sp.zeros(cov.q)

    ok = all(scalar(J**n) for J, n in zip(Js, cov.orders))
    for a, b in itertools.combinations(Js, 2):
        ok = ok and scalar(a * b * a.inv() * b.inv())
    return ok


def regularity_check(cov, seed: int = 0) -> list[RegularityEntry]:
    """For each dual class k, find a unitary in the eigenspace B_k or prove none exists.

    For a lattice covering (pass a :class:`Tower` or a matrix B) the unitary is
    σ(k). For a finite-dimensional fixture, B_k is computed exactly from the
    character table; whether its generic element has identically vanishing
    determinant is decided symbolically for q <= 4 and by Schwartz-Zippel
    with q^2 + 1 seeded rational points otherwise.
    """
    if not isinstance(cov, FinDimCovering):
        T = cov if isinstance(cov, Tower) else get_tower(cov)
        return [
            RegularityEntry(k, 1, "unitary found", unitary=sigma_unitary(T, k, 1))
            for k in T.group.dual_reps
        ]
    sp = _sympy()
    q = cov.q
    Js = [sp.Matrix(J) for J in cov.unitaries]
    elems = list(itertools.product(*(range(n) for n in cov.orders)))
    Jg = {}
    for g in elems:
        M = sp.eye(q)
        for J, e in zip(Js, g):
            M = M * J**e
        Jg[g] = (M, M.inv())
    rng = random.Random(seed)
    report = []
    for k in elems:
        vecs = []
        for a in range(q):
            for b in range(q):
                X = sp.zeros(q)
                X[a, b] = 1
                acc = sp.zeros(q)
                for g in elems:
                    chi = sp.exp(-2 * sp.pi * sp.I * sum(sp.Rational(ki * gi, n) for ki, gi, n in zip(k, g, cov.orders)))
                    M, Mi = Jg[g]
                    acc += chi * M * X * Mi
                vecs.append(sp.nsimplify(acc / len(elems)).reshape(q * q, 1))
        basis = sp.Matrix.hstack(*vecs).columnspace()
        dim = len(basis)
        if dim == 0:
            report.append(RegularityEntry(k, 0, "no invertible element"))
            continue
        xs = sp.symbols(f"x0:{dim}")
        generic = sum((x * v for x, v in zip(xs, basis)), sp.zeros(q * q, 1)).reshape(q, q)
        if q <= 4:
            identically_zero = sp.expand(generic.det()) == 0
        else:
            points = [[sp.Rational(rng.randint(-10**6, 10**6), rng.randint(1, 10**6)) for _ in xs] for _ in range(q * q + 1)]
            identically_zero = all(generic.subs(dict(zip(xs, pt))).det() == 0 for pt in points)
        if identically_zero:
            report.append(RegularityEntry(k, dim, "no invertible element"))
            continue
        while True:
            pt = [sp.Integer(rng.randint(-5, 5)) for _ in xs]
            sample = generic.subs(dict(zip(xs, pt)))
            if sample.det() != 0:
                break
        from scipy.linalg import polar

        S = np.array(sample.evalf(), dtype=complex)
        U, _ = polar(S)
        report.append(RegularityEntry(k, dim, "unitary found", unitary=U, sample=S))
    return report


def nounitaries_fixture() -> FinDimCovering:
    """M_3(C) with Z_2 acting by ad(diag(1, -1, -1))."""
    return FinDimCovering(3, (2,), (((1, 0, 0), (0, -1, 0), (0, 0, -1)),))
