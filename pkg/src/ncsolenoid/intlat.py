"""Exact integer and rational linear algebra for covering matrices.

Matrices are tuples of row tuples holding ``int`` or ``fractions.Fraction``
entries. Everything in this module is exact; floats never enter a decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]

N_MAX = 64
_SQRT_SCALE = 10**12


class SingularMatrixError(ValueError):
    pass


class MatrixParseError(ValueError):
    """Raised on malformed matrix text; ``position`` is a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------- basic ops


def as_matrix(rows: Sequence[Sequence]) -> tuple:
    out = tuple(tuple(r) for r in rows)
    p = len(out)
    if p == 0 or any(len(r) != p for r in out):
        raise ValueError("matrix must be square and non-empty")
    return out


def identity(p: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(p)) for i in range(p))


def transpose(M):
    return tuple(zip(*M))


def mat_mul(X, Y):
    cols = list(zip(*Y))
    return tuple(tuple(sum(a * b for a, b in zip(row, c)) for c in cols) for row in X)


def mat_vec(M, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def mat_pow(M, n: int):
    result = identity(len(M))
    base = M
    while n:
        if n & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        n >>= 1
    return result


def scalar_mul(c, M):
    return tuple(tuple(c * x for x in row) for row in M)


def frobenius_sq(M) -> Fraction:
    return sum((Fraction(x) * x for row in M for x in row), Fraction(0))


def row_sum_norm(M) -> Fraction:
    """Max absolute row sum (the operator norm induced by the sup norm)."""
    return max(sum(abs(Fraction(x)) for x in row) for row in M)


def det(M) -> Fraction | int:
    """Determinant by fraction-free Bareiss elimination.

    Integer input gives an ``int``; rational input a ``Fraction``.
    """
    a = [list(r) for r in M]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def minor(M, i: int, j: int):
    return tuple(tuple(x for c, x in enumerate(row) if c != j) for r, row in enumerate(M) if r != i)


def cofactor_matrix(B) -> IntMatrix:
    """Matrix of signed cofactors, C_ij = (-1)^(i+j) det(minor_ij).

    For B = [[a, b], [c, d]] this is [[d, -c], [-b, a]], so ``B @ C.T`` and
    ``C.T @ B`` both equal det(B)·I. The classical adjugate is C transposed;
    see :func:`adjugate`.
    """
    B = as_matrix(B)
    p = len(B)
    if p == 1:
        return ((1,),)
    return tuple(
        tuple((-1) ** (i + j) * det(minor(B, i, j)) for j in range(p)) for i in range(p)
    )


def adjugate(B) -> IntMatrix:
    """Classical adjugate: adj(B)·B = B·adj(B) = det(B)·I."""
    return transpose(cofactor_matrix(B))


def inverse(M) -> RatMatrix:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("singular covering matrix")
        a[col], a[piv] = a[piv], a[col]
        inv_p = 1 / a[col][col]
        a[col] = [x * inv_p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def inverse_transpose(B) -> RatMatrix:
    """A = (B^T)^{-1}, the dual dilation of the covering matrix B."""
    B = as_matrix(B)
    if det(B) == 0:
        raise SingularMatrixError("singular covering matrix")
    return inverse(transpose(B))


def is_integral(M) -> bool:
    return all(Fraction(x).denominator == 1 for row in M for x in row)


def to_int_matrix(M) -> IntMatrix:
    if not is_integral(M):
        raise ValueError("matrix has non-integer entries")
    return tuple(tuple(int(x) for x in row) for row in M)


# ------------------------------------------------------------ text format


def parse_matrix(text: str) -> IntMatrix:
    """Parse ``"2,0;0,2"`` into an integer matrix."""
    rows = []
    pos = 0
    for chunk in text.split(";"):
        row = []
        cpos = pos
        for entry in chunk.split(","):
            stripped = entry.strip()
            try:
                row.append(int(stripped))
            except ValueError:
                offset = cpos + (len(entry) - len(entry.lstrip()))
                raise MatrixParseError(f"invalid integer entry {stripped!r}", offset) from None
            cpos += len(entry) + 1
        rows.append(tuple(row))
        pos += len(chunk) + 1
    p = len(rows)
    for r, row in enumerate(rows):
        if len(row) != p:
            raise MatrixParseError(f"row {r} has {len(row)} entries, expected {p}", 0)
    return tuple(rows)


def format_matrix(M) -> str:
    return ";".join(",".join(format_rational(x) for x in row) for row in M)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------- Smith form


@dataclass(frozen=True)
class SmithForm:
    S: IntMatrix
    D: IntMatrix
    T: IntMatrix

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(len(self.D)))


def smith_normal_form(B) -> SmithForm:
    """Smith normal form S·B·T = D with d_1 | d_2 | ... | d_p.

    Classical reduction: the pivot is the smallest nonzero |entry| of the
    remaining block, first in row-major order. The post-condition is checked
    by exact multiplication before returning.
    """
    B = as_matrix(B)
    p = len(B)
    if det(B) == 0:
        raise SingularMatrixError("singular covering matrix")
    M = [list(r) for r in B]
    S = [list(r) for r in identity(p)]
    T = [list(r) for r in identity(p)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        S[i], S[j] = S[j], S[i]

    def swap_cols(i, j):
        for X in (M, T):
            for row in X:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        M[dst] = [a - q * b for a, b in zip(M[dst], M[src])]
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]

    def add_col(dst, src, q):
        for X in (M, T):
            for row in X:
                row[dst] -= q * row[src]

    for t in range(p):
        while True:
            best = None
            for i in range(t, p):
                for j in range(t, p):
                    if M[i][j] != 0 and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                        best = (i, j)
            i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            piv = M[t][t]
            dirty = False
            for i in range(t + 1, p):
                if M[i][t]:
                    add_row(i, t, M[i][t] // piv)
                    dirty = dirty or M[i][t] != 0
            for j in range(t + 1, p):
                if M[t][j]:
                    add_col(j, t, M[t][j] // piv)
                    dirty = dirty or M[t][j] != 0
            if dirty:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, p) for j in range(t + 1, p) if M[i][j] % piv),
                None,
            )
            if bad is None:
                break
            # fold the offending row into the pivot row and reduce again
            add_row(t, bad[0], -1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            S[t] = [-x for x in S[t]]

    form = SmithForm(tuple(map(tuple, S)), tuple(map(tuple, M)), tuple(map(tuple, T)))
    assert mat_mul(mat_mul(form.S, B), form.T) == form.D
    d = form.factors
    assert all(d[i + 1] % d[i] == 0 for i in range(p - 1))
    return form


# ------------------------------------------------------ expansion analysis


@dataclass(frozen=True)
class ExpansionReport:
    purely_expanding: bool
    certificate_kind: str
    certificate: object
    norm_sequence: list[Fraction] = field(default_factory=list)
    tail_bound: Fraction | None = None


def sqrt_upper(q: Fraction) -> Fraction:
    """A rational upper bound for sqrt(q), within about 1e-12 relative."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative")
    a, b = q.numerator, q.denominator
    root = math.isqrt(a * b * _SQRT_SCALE**2)
    if root * root != a * b * _SQRT_SCALE**2:
        root += 1
    return Fraction(root, b * _SQRT_SCALE)


def exact_sqrt(q: Fraction) -> Fraction | None:
    """sqrt(q) if it is rational, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def char_poly(M) -> list[Fraction]:
    """Characteristic polynomial det(zI - M), coefficients low to high.

    Faddeev-LeVerrier recursion; exact over the rationals.
    """
    p = len(M)
    M = tuple(tuple(Fraction(x) for x in row) for row in M)
    coeffs = [Fraction(0)] * (p + 1)
    coeffs[p] = Fraction(1)
    Mk = tuple(tuple(Fraction(0) for _ in range(p)) for _ in range(p))
    for k in range(1, p + 1):
        shifted = tuple(
            tuple(Mk[i][j] + (coeffs[p - k + 1] if i == j else 0) for j in range(p)) for i in range(p)
        )
        Mk = mat_mul(M, shifted)
        coeffs[p - k] = -sum(Mk[i][i] for i in range(p)) / k
    return coeffs


def schur_cohn_inside(coeffs: Sequence[Fraction]) -> bool:
    """True iff every root of the real polynomial lies in the open unit disk.

    Repeated Schur transform: at each step the leading coefficient must
    dominate the constant term strictly in absolute value.
    """
    f = [Fraction(c) for c in coeffs]
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    while len(f) > 1:
        lead, const = f[-1], f[0]
        if abs(lead) <= abs(const):
            return False
        rev = f[::-1]
        g = [lead * a - const * b for a, b in zip(f, rev)]
        assert g[0] == 0
        f = g[1:]
        while len(f) > 1 and f[-1] == 0:
            f.pop()
    return True


def has_unit_modulus_root(coeffs: Sequence[Fraction]) -> bool:
    """Exact test for a root on the unit circle.

    Roots on the circle are common roots of f and its reversal. On the
    common factor g, the Cayley map z = (1 + iy)/(1 - iy) sends the circle
    minus {-1} to the real line, so a real root of the transformed
    polynomial is a unit-modulus root of f.
    """
    import sympy

    z, y = sympy.symbols("z y")
    f = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], z, domain="QQ")
    g = sympy.gcd(f, sympy.Poly(list(reversed(f.all_coeffs())), z, domain="QQ"))
    if g.degree() < 1:
        return False
    if g.eval(-1) == 0 or g.eval(1) == 0:
        return True
    m = g.degree()
    h = sympy.expand(sum(
        c * (1 + sympy.I * y) ** (m - i) * (1 - sympy.I * y) ** i
        for i, c in enumerate(g.all_coeffs())
    ))
    hp = sympy.Poly(h, y)
    re_coeffs = [sympy.re(c) for c in hp.all_coeffs()]
    im_coeffs = [sympy.im(c) for c in hp.all_coeffs()]
    re_part = sympy.Poly(re_coeffs, y, domain="QQ")
    im_part = sympy.Poly(im_coeffs, y, domain="QQ")
    common = sympy.gcd(re_part, im_part)
    if common.is_zero:
        common = re_part
    return common.degree() >= 1 and common.count_roots() > 0


def purely_expanding(B, n_max: int = N_MAX) -> ExpansionReport:
    """Decide exactly whether spr((B^T)^{-1}) < 1.

    First looks for N <= n_max with ||A^N||_F^2 < 1. Failing that, runs the
    Schur-Cohn test on char(A); a failed test is refined into either an
    outside root or a unit-modulus root.
    """
    B = as_matrix(B)
    A = inverse_transpose(B)
    p = len(A)
    power = identity(p)
    uppers = [sqrt_upper(frobenius_sq(power))]
    found = None
    for n in range(1, n_max + 1):
        power = mat_mul(power, A)
        fsq = frobenius_sq(power)
        uppers.append(sqrt_upper(fsq))
        if fsq < 1 and uppers[-1] < 1:
            found = n
            break

    coeffs = None
    if found is None:
        coeffs = char_poly(A)
        if not schur_cohn_inside(coeffs):
            kind = "unit-modulus root" if has_unit_modulus_root(coeffs) else "root outside unit disk"
            return ExpansionReport(False, kind, tuple(coeffs), uppers, None)
        # Schur-Cohn certifies contraction; keep powering for a tail bound.
        n = n_max
        while found is None:
            n += 1
            power = mat_mul(power, A)
            fsq = frobenius_sq(power)
            uppers.append(sqrt_upper(fsq))
            if fsq < 1 and uppers[-1] < 1:
                found = n

    c = uppers[found]
    head = sum(uppers[:found], Fraction(0))
    tail = head / (1 - c)
    kind = "frobenius contraction" if coeffs is None else "schur-cohn"
    return ExpansionReport(True, kind, found, uppers, tail)
