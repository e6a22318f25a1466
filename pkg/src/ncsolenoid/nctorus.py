"""Rational rotation algebras A_θ, θ = p/q, as M_q-valued trig polynomials.

The generators are U(t) = e^{2πiθ t_1} U_0 and V(t) = e^{2πiθ t_2} V_0 with the
clock and shift matrices U_0, V_0. All phases are exact roots of unity.

Orientation of the shift. With (U_0)_{hk} = δ_{hk} e^{2πi(k-1)θ}, the shift
with ones at (h, h+1) gives U_0 V_0 = e^{-2πiθ} V_0 U_0. The phase laws used
throughout (Weyl products, covering generators, deck action) all need
U_0 V_0 = e^{+2πiθ} V_0 U_0, which holds for the shift with ones at (h+1, h).
That is the matrix returned by :func:`clock_shift`; the other orientation is
kept as :func:`shift_up` for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import intlat
from .covalg import MatTrigPoly, obj_adjoint, obj_identity, obj_matmul, obj_matrix, phase
from .cyclotomic import Cyc


class NotSelfCoveringError(ValueError):
    pass


@dataclass(frozen=True)
class RationalAngle:
    p: int
    q: int

    def __post_init__(self):
        if self.q < 1 or not 0 <= self.p < self.q and not (self.p == 0 and self.q == 1):
            raise ValueError("need 0 <= p < q")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError("θ must be in lowest terms")

    @classmethod
    def parse(cls, text) -> "RationalAngle":
        x = Fraction(text)
        return cls(x.numerator % x.denominator if x.denominator > 1 else 0, x.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def _angle(theta) -> RationalAngle:
    return theta if isinstance(theta, RationalAngle) else RationalAngle.parse(theta)


def clock_shift(theta) -> tuple[np.ndarray, np.ndarray]:
    """U_0 = diag(e^{2πi(k-1)θ}) and the cyclic shift V_0 with U_0V_0 = e^{2πiθ}V_0U_0."""
    th = _angle(theta)
    q = th.q
    U0 = obj_matrix([[phase(k * th.value) if h == k else 0 for k in range(q)] for h in range(q)])
    V0 = obj_matrix([[1 if h == (k + 1) % q else 0 for k in range(q)] for h in range(q)])
    return U0, V0


def shift_up(q: int) -> np.ndarray:
    """The shift with (V)_{hk} = δ_{h+1,k} + δ_{h,q}δ_{k,1}."""
    return obj_matrix([[1 if k == (h + 1) % q else 0 for k in range(q)] for h in range(q)])


def mat_power(M: np.ndarray, k: int) -> np.ndarray:
    base = M if k >= 0 else obj_adjoint(M)
    out = obj_identity(M.shape[0])
    for _ in range(abs(k)):
        out = obj_matmul(out, base)
    return out


def scale(M: np.ndarray, c) -> np.ndarray:
    return np.vectorize(lambda x: x * c, otypes=[object])(M)


def weyl_matrix(n: Sequence[int], theta) -> np.ndarray:
    """W_0(n) = U_0^{n_1} V_0^{n_2}."""
    U0, V0 = clock_shift(theta)
    return obj_matmul(mat_power(U0, n[0]), mat_power(V0, n[1]))


def weyl_power(n: Sequence[int], k: int, theta) -> tuple[Fraction, tuple[int, int]]:
    """W(n)^k = e^{2πi·phase} W(kn) with phase = -θ k(k-1) n_1 n_2 / 2 mod 1."""
    th = _angle(theta).value
    ph = (-th * k * (k - 1) * n[0] * n[1] / 2) % 1
    return ph, (k * n[0], k * n[1])


def weyl_product_phase(m: Sequence[int], n: Sequence[int], theta) -> Fraction:
    """W(m)W(n) = e^{2πi·phase} W(m+n) with phase = -θ m_2 n_1."""
    return (-_angle(theta).value * m[1] * n[0]) % 1


def generators(theta) -> tuple[MatTrigPoly, MatTrigPoly]:
    th = _angle(theta)
    U0, V0 = clock_shift(th)
    z = Fraction(0)
    return MatTrigPoly(th.q, {(th.value, z): U0}), MatTrigPoly(th.q, {(z, th.value): V0})


def weyl_element(m: Sequence[int], theta) -> MatTrigPoly:
    """W(m, t) = U(t)^{m_1} V(t)^{m_2}."""
    U, V = generators(theta)
    return U.power(m[0]) * V.power(m[1])


def _check_self_covering(B, th: RationalAngle):
    B = intlat.as_matrix(B)
    if len(B) != 2:
        raise ValueError("rotation-algebra coverings need a 2x2 matrix")
    d = intlat.det(B)
    if abs(d) <= 1:
        raise ValueError("covering matrix must have |det| > 1")
    if (d - 1) % th.q:
        raise NotSelfCoveringError("not a self-covering")
    return B, d


def covering_generators(B, theta) -> tuple[MatTrigPoly, MatTrigPoly]:
    """U_B = e^{πiθ bd(1-a+c)} e^{2πiθ<Ae_1,t>} W_0(C_B e_1), and V_B likewise.

    V_B uses the prefactor e^{πiθ ac(1+b-d)}, Ae_2 and C_B e_2. C_B is the
    cofactor matrix [[d, -c], [-b, a]].
    """
    th = _angle(theta)
    B, _ = _check_self_covering(B, th)
    (a, b), (c, d) = B
    A = intlat.inverse_transpose(B)
    C = intlat.cofactor_matrix(B)
    t = th.value
    out = []
    for col, pref in ((0, t * b * d * (1 - a + c) / 2), (1, t * a * c * (1 + b - d) / 2)):
        freq = (t * A[0][col], t * A[1][col])
        W = weyl_matrix((C[0][col], C[1][col]), th)
        out.append(MatTrigPoly(th.q, {freq: scale(W, phase(pref))}))
    return out[0], out[1]


def phase_ratio(X: MatTrigPoly, Y: MatTrigPoly) -> Fraction | None:
    """φ with X = e^{2πiφ} Y if such a rational φ exists (checked exactly)."""
    if set(X.terms) != set(Y.terms) or not X.terms:
        return None
    xi = next(iter(X.terms))
    Mx, My = X.terms[xi], Y.terms[xi]
    idx = next(((i, j) for i in range(X.q) for j in range(X.q) if not My[i, j].is_zero()), None)
    if idx is None:
        return None
    ratio = complex(Mx[idx]) / complex(My[idx])
    guess = Fraction(math.atan2(ratio.imag, ratio.real) / (2 * math.pi)).limit_denominator(10**4) % 1
    return guess if X == Y * phase(guess) else None


@dataclass
class IdentityReport:
    theta: Fraction
    B: tuple
    commutation_phase: Fraction | None
    clock_shift_ok: bool
    u_identity_ok: bool
    v_identity_ok: bool
    scaling_phase: Fraction | None
    scaling_expected: Fraction
    generator_phase: Fraction | None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.clock_shift_ok
            and self.u_identity_ok
            and self.v_identity_ok
            and self.scaling_phase == self.scaling_expected
            and not self.failures
        )

    def to_json(self) -> dict:
        fmt = lambda x: None if x is None else intlat.format_rational(x)
        return {
            "theta": fmt(self.theta),
            "matrix": intlat.format_matrix(self.B),
            "clock_shift_commutation": self.clock_shift_ok,
            "commutation_phase": fmt(self.commutation_phase),
            "u_identity": self.u_identity_ok,
            "v_identity": self.v_identity_ok,
            "scaling_phase": fmt(self.scaling_phase),
            "scaling_expected": fmt(self.scaling_expected),
            "generator_commutation_phase": fmt(self.generator_phase),
            "failures": self.failures,
            "ok": self.ok,
        }


def fixed_point_identities(B, theta) -> IdentityReport:
    """Check U = U_B^a V_B^b, V = U_B^c V_B^d and the det(B)·θ scaling law exactly."""
    th = _angle(theta)
    B, d_B = _check_self_covering(B, th)
    (a, b), (c, d) = B
    U, V = generators(th)
    UB, VB = covering_generators(B, th)
    failures = []

    U0, V0 = clock_shift(th)
    lhs = obj_matmul(U0, V0)
    rhs = scale(obj_matmul(V0, U0), phase(th.value))
    cs_ok = MatTrigPoly.constant(lhs) == MatTrigPoly.constant(rhs)
    comm = phase_ratio(U * V, V * U)

    checks = []
    for name, target, (x, y) in (("U", U, (a, b)), ("V", V, (c, d))):
        got = UB.power(x) * VB.power(y)
        same = got == target
        if not same:
            diff = got.first_difference(target)
            failures.append({
                "identity": name,
                "frequency": [intlat.format_rational(v) for v in diff[0]],
                "phase_offset": None if phase_ratio(got, target) is None else intlat.format_rational(phase_ratio(got, target)),
            })
        checks.append(same)

    X = U.power(a) * V.power(b)
    Y = U.power(c) * V.power(d)
    scaling = phase_ratio(X * Y, Y * X)
    gen_phase = phase_ratio(UB * VB, VB * UB)
    return IdentityReport(
        th.value, B, comm, cs_ok, checks[0], checks[1], scaling, (d_B * th.value) % 1, gen_phase, failures
    )


def trace(f: MatTrigPoly):
    """τ(f) = (1/q)·(zero-frequency coefficient of tr f)."""
    return f.trace()


J = ((0, 1), (-1, 0))


def nc_deck_action(f: MatTrigPoly, g: Sequence[int], theta) -> MatTrigPoly:
    """γ̃_g(f)(t) = ad(W_0(Jg))[f(t - g)] for g in Z^2."""
    Jg = intlat.mat_vec(J, g)
    return f.deck_action(tuple(Fraction(x) for x in g), weyl_matrix(Jg, theta))


def nc_fixed_point_average(f: MatTrigPoly, B, theta) -> MatTrigPoly:
    """E_0 for the level-1 deck group Z^2/BZ^2: average of γ̃_g over group representatives."""
    from .lattice import enumerate_quotient

    G = enumerate_quotient(B)
    total = None
    for g in G.group_reps:
        h = nc_deck_action(f, g, theta)
        total = h if total is None else total + h
    return total * Fraction(1, G.order)


def in_fixed_lattice(xi: Sequence, theta) -> bool:
    """Frequencies of fixed points of all γ̃_g, g in Z^2, lie in (1/q)Z^2."""
    q = _angle(theta).q
    return all((Fraction(x) * q).denominator == 1 for x in xi)


def scaled_weyl(m: Sequence[int], n: int, theta) -> MatTrigPoly:
    """φ_n(W(m)) = e^{2πiθ<2^{-n}m, t>} W_0(2^n m) for B = 2I."""
    th = _angle(theta)
    freq = tuple(th.value * Fraction(x, 2**n) for x in m)
    return MatTrigPoly(th.q, {freq: weyl_matrix((m[0] * 2**n, m[1] * 2**n), th)})
