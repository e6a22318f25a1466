"""Exact arithmetic in cyclotomic fields Q(ζ_N).

A number is stored as rational coefficients on 1, ζ, ..., ζ^{φ(N)-1} with
ζ = e^{2πi/N}, reduced modulo the N-th cyclotomic polynomial. For fixed N
that basis is canonical, so equality is exact. Numbers with different N are
compared and combined in Q(ζ_lcm).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Φ_n, low degree first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, cyclotomic_poly(d))
    return tuple(num)


def _poly_divexact(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact polynomial division"
    return out


def _reduce(coeffs, n):
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        lead = c[i]
        if lead:
            for j in range(deg + 1):
                c[i - deg + j] -= lead * phi[j]
    c = c[:deg] + [Fraction(0)] * max(0, deg - len(c))
    return tuple(Fraction(x) for x in c)


class Cyc:
    """An element of Q(ζ_N)."""

    __slots__ = ("n", "coeffs")
    __hash__ = None

    def __init__(self, n: int, coeffs):
        self.n = n
        self.coeffs = tuple(coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, x) -> "Cyc":
        return cls(1, (Fraction(x),))

    @classmethod
    def root(cls, phase, magnitude=1) -> "Cyc":
        """magnitude · e^{2πi·phase} for rational phase and magnitude."""
        phase = Fraction(phase) % 1
        n = phase.denominator
        c = [Fraction(0)] * n
        c[phase.numerator] = Fraction(magnitude)
        return cls(n, _reduce(c, n))

    @classmethod
    def coerce(cls, x) -> "Cyc":
        if isinstance(x, Cyc):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot make an exact cyclotomic number from {type(x).__name__}")

    # -- field embedding ---------------------------------------------------

    def lift(self, m: int) -> tuple[Fraction, ...]:
        """Coefficients in Q(ζ_m); requires self.n | m."""
        if m == self.n:
            return self.coeffs
        step = m // self.n
        c = [Fraction(0)] * m
        for i, x in enumerate(self.coeffs):
            c[i * step] = x
        return _reduce(c, m)

    @staticmethod
    def _common(a: "Cyc", b: "Cyc"):
        m = a.n * b.n // math.gcd(a.n, b.n)
        return m, a.lift(m), b.lift(m)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, complex) or isinstance(other, float):
            return complex(self) + other
        other = Cyc.coerce(other)
        m, a, b = Cyc._common(self, other)
        return Cyc(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.n, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) - other
        return self + (-Cyc.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) * other
        if isinstance(other, (int, Fraction)):
            return Cyc(self.n, tuple(x * other for x in self.coeffs))
        m, a, b = Cyc._common(self, other)
        prod = [Fraction(0)] * (2 * len(a))
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return Cyc(m, _reduce(prod, m))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.n, tuple(x / other for x in self.coeffs))
        if isinstance(other, Cyc):
            return self * other.inverse()
        return complex(self) / other

    def conjugate(self) -> "Cyc":
        m = self.n
        c = [Fraction(0)] * m
        for i, x in enumerate(self.coeffs):
            c[(-i) % m] += x
        return Cyc(m, _reduce(c, m))

    def inverse(self) -> "Cyc":
        """Multiplicative inverse via the norm over the Galois orbit."""
        if self.is_zero():
            raise ZeroDivisionError("zero cyclotomic number")
        m = self.n
        others = Cyc.rational(1)
        for u in range(2, m):
            if math.gcd(u, m) == 1:
                others = others * self.galois(u)
        norm = self * others
        assert all(x == 0 for x in norm.coeffs[1:])
        return others / norm.coeffs[0]

    def galois(self, u: int) -> "Cyc":
        """Image under ζ ↦ ζ^u."""
        m = self.n
        c = [Fraction(0)] * m
        for i, x in enumerate(self.coeffs):
            c[(i * u) % m] += x
        return Cyc(m, _reduce(c, m))

    def abs_sq(self) -> "Cyc":
        return self * self.conjugate()

    # -- comparison and conversion ----------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (complex, float)):
            return abs(complex(self) - other) < 1e-12
        try:
            other = Cyc.coerce(other)
        except TypeError:
            return NotImplemented
        m, a, b = Cyc._common(self, other)
        return a == b

    def __bool__(self):
        return not self.is_zero()

    def __complex__(self):
        return sum(
            (complex(x) * cmath.exp(2j * math.pi * i / self.n) for i, x in enumerate(self.coeffs) if x),
            0j,
        )

    def rational_value(self) -> Fraction | None:
        """The value as a rational, if it is one."""
        return self.coeffs[0] if all(x == 0 for x in self.coeffs[1:]) else None

    def __repr__(self):
        z = complex(self)
        return f"Cyc({z.real:.6g}{z.imag:+.6g}j)"
