"""Counting functions, truncated zeta functions and residue estimates on finite spectra.

Every function reads a :class:`~ncsolenoid.dirac.SpectrumMultiset` (or a plain
array of eigenvalues for the perturbation lemmas). Weighted counts are exact
rationals; floating sums are taken in ascending eigenvalue order with
``math.fsum`` so results are reproducible.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate

import numpy as np

from .dirac import SpectrumMultiset


class InsufficientSpectrumError(ValueError):
    pass


# ============================================================ counting


@dataclass(frozen=True)
class CountingFunction:
    """Step data of a weighted spectrum: distinct |eigenvalues| and their weights."""

    values: tuple
    weights: tuple
    cumulative: tuple
    total: Fraction

    def N(self, lam) -> Fraction:
        """Weighted count of eigenvalues with |value| <= lam."""
        i = bisect.bisect_right(self.values, lam)
        return self.cumulative[i - 1] if i else Fraction(0)

    def Lambda(self, s) -> Fraction:
        """Λ(s): weighted count of eigenvalues in (-s, s)."""
        i = bisect.bisect_left(self.values, s)
        return self.cumulative[i - 1] if i else Fraction(0)

    def lam(self, t) -> Fraction:
        """λ(t): weighted count of |value| >= t."""
        return self.total - self.Lambda(t)

    def lam_right(self, t) -> Fraction:
        """The right limit λ(t+): weighted count of |value| > t."""
        return self.total - self.N(t)

    def mu(self, t) -> float:
        """μ(t) = inf{s : λ(s) <= t}: the largest value v with λ(v) > t, or 0."""
        # tail weight of values >= v_j is total - cumulative[j-1]; it decreases in j
        best = 0.0
        lo, hi = 0, len(self.values)
        while lo < hi:
            mid = (lo + hi) // 2
            tail = self.total - (self.cumulative[mid - 1] if mid else 0)
            if tail > t:
                best = self.values[mid]
                lo = mid + 1
            else:
                hi = mid
        return best


def counting(spec) -> CountingFunction:
    merged: dict = {}
    for line in spec.lines:
        merged[line.value] = merged.get(line.value, Fraction(0)) + line.weighted
    values = tuple(sorted(merged))
    weights = tuple(merged[v] for v in values)
    cum = tuple(accumulate(weights)) if weights else ()
    return CountingFunction(values, weights, cum, cum[-1] if cum else Fraction(0))


def inverse_relations_hold(cf: CountingFunction) -> bool:
    """λ(μ(t)+) <= t and μ(λ(s)) <= s at every step of the data."""
    probes_t = {Fraction(0), cf.total} | set(cf.cumulative) | {cf.total - c for c in cf.cumulative}
    for t in probes_t:
        if cf.lam_right(cf.mu(t)) > t:
            return False
    for v in cf.values:
        for s in (v, np.nextafter(v, math.inf)):
            if cf.mu(cf.lam(s)) > s:
                return False
    return True


# ============================================================ zeta


def zeta_truncated(spec, s: float, form: str = "abs") -> float:
    """Σ mult·weight·f(value) with f = v^{-s} (form "abs", zero modes skipped) or (v^2+1)^{-s/2}."""
    if s <= 0:
        raise ValueError("s must be positive")
    terms = []
    for line in sorted(spec.lines, key=lambda l: l.value):
        w = float(line.weighted)
        if form == "abs":
            if line.value > 0:
                terms.append(w * line.value ** (-s))
        elif form == "resolvent":
            terms.append(w * (line.value**2 + 1) ** (-s / 2))
        else:
            raise ValueError(f"unknown form {form!r}")
    return math.fsum(terms)


def zeta_closed_form(spec, t):
    """Exact Σ_{k>=-n} w_k r^{-kst} for UHF spectra (the untruncated series), else None."""
    m = spec.model
    if m.get("family") != "uhf":
        return None
    from .dirac import uhf_zeta_value

    return uhf_zeta_value(m["r"], Fraction(m["s"]), m["level"], t)


# ============================================================ dimension


@dataclass(frozen=True)
class DimensionFit:
    d_hat: float
    c_hat: float
    residue: float
    residual: float
    window: tuple
    steps: int

    def to_json(self) -> dict:
        return {
            "d_hat": self.d_hat,
            "c_hat": self.c_hat,
            "residue_hat": self.residue,
            "residual": self.residual,
            "window": list(self.window),
            "steps": self.steps,
        }


MIN_STEPS = 50


def _window_steps(spec, cutoff=None):
    cf = counting(spec)
    lam_max = cutoff if cutoff is not None else (spec.cutoff or (cf.values[-1] if cf.values else 0.0))
    lo = lam_max / 4
    xs, ys = [], []
    vals = cf.values
    for i in range(len(vals) - 1):
        if vals[i] >= lo and vals[i + 1] <= lam_max:
            xs.append(0.5 * (vals[i] + vals[i + 1]))
            ys.append(float(cf.cumulative[i]))
    return cf, (lo, lam_max), np.array(xs), np.array(ys)


def dimension_and_residue(spec, cutoff=None) -> DimensionFit:
    """Least-squares slope of log N against log λ at step midpoints over [Λ/4, Λ]."""
    _, window, x, y = _window_steps(spec, cutoff)
    if len(x) < MIN_STEPS:
        raise InsufficientSpectrumError(f"insufficient spectrum: {len(x)} steps in window, need {MIN_STEPS}")
    lx, ly = np.log(x), np.log(y)
    M = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(M, ly, rcond=None)
    d = float(coef[0])
    resid = float(np.sqrt(np.mean((M @ coef - ly) ** 2)))
    c = float(np.mean(y / x**d))
    return DimensionFit(d, c, d * c, resid, window, len(x))


def volume_constant(spec, d: float, cutoff=None) -> float:
    """Mean of N(λ)/λ^d over the fit window, for a prescribed d."""
    _, _, x, y = _window_steps(spec, cutoff)
    if len(x) == 0:
        raise InsufficientSpectrumError("insufficient spectrum: empty window")
    return float(np.mean(y / x**d))


def _mu_items(spec, direct: bool):
    items = []
    for line in spec.lines:
        u = line.value if direct else (line.value**2 + 1) ** -0.5
        items.append((u, float(line.weighted)))
    items.sort(key=lambda it: -it[0])
    return items


def _mu_integral(items, d: float, lo: float, hi: float) -> float:
    """∫_lo^hi μ(s)^d ds for the decreasing step function listed in ``items``."""
    acc, pos = [], 0.0
    for u, w in items:
        a, b = max(pos, lo), min(pos + w, hi)
        if b > a:
            acc.append((b - a) * u**d)
        pos += w
    return math.fsum(acc)


def dixmier_average(spec, d: float, direct: bool = False) -> float:
    """(1/log W) ∫_1^W μ(s)^d ds at the total weight W.

    μ is the singular value function of (D^2+1)^{-1/2}, or of the listed
    values themselves with ``direct``. The integral starts at 1 so that a
    constant μ ≡ 1 gives (W - 1)/log W. Convergence is logarithmic: any O(1)
    mass near s = 0 (a heavy kernel, say) shifts the result by O(1/log W).
    """
    if d <= 0:
        raise ValueError("d must be positive")
    items = _mu_items(spec, direct)
    W = math.fsum(w for _, w in items)
    if W <= 1:
        raise InsufficientSpectrumError("total weight must exceed 1")
    return _mu_integral(items, d, 1.0, W) / math.log(W)


def dixmier_log_slope(spec, d: float, ratio: float = 4.0, direct: bool = False) -> float:
    """(∫_{W/ratio}^W μ(s)^d ds)/log(ratio): the same limit with the constant term cancelled."""
    if d <= 0 or ratio <= 1:
        raise ValueError("need d > 0 and ratio > 1")
    items = _mu_items(spec, direct)
    W = math.fsum(w for _, w in items)
    return _mu_integral(items, d, W / ratio, W) / math.log(ratio)


# ============================================================ appendix lemmas


def _eigs(x) -> np.ndarray:
    if isinstance(x, SpectrumMultiset):
        return np.repeat(x.values(), [l.multiplicity for l in x.lines])
    return np.asarray(x, dtype=float)


def symmetric_count(eigs, s: float) -> int:
    return int(np.sum(np.abs(eigs) < s))


@dataclass
class PerturbationReport:
    ok: bool
    counterexample: dict | None = None
    singular_ok: bool = True


def perturbation_check(T_spec, TC_spec, c: float, s_grid, tol: float = 1e-9) -> PerturbationReport:
    """Λ_{T+C}(s) <= Λ_T(s + c) on the grid, and |a_j(T+C) - a_j(T)| <= c for ascending |eigenvalues|.

    The second check is the singular-value form used for inverses: with
    μ_j(|T|^{-1}) = 1/a_j(T), it gives 1/μ_j(|T+C|^{-1}) <= 1/μ_j(|T|^{-1}) + c.
    """
    a, b = _eigs(T_spec), _eigs(TC_spec)
    for s in s_grid:
        lhs, rhs = symmetric_count(b, s), symmetric_count(a, s + c + tol)
        if lhs > rhs:
            return PerturbationReport(False, {"s": float(s), "lhs": lhs, "rhs": rhs})
    sa, sb = np.sort(np.abs(a)), np.sort(np.abs(b))
    sing = bool(len(sa) == len(sb) and np.all(np.abs(sa - sb) <= c + tol))
    return PerturbationReport(sing, None if sing else {"singular_values": True}, sing)


def random_hermitian(rng, n: int, scale: float = 1.0) -> np.ndarray:
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (X + X.conj().T) / 2


def perturbation_trials(trials: int = 100, seed: int = 0, max_dim: int = 60) -> list:
    """Random Hermitian T and C; each report compares the dense spectra of T and T + C."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        n = int(rng.integers(2, max_dim + 1))
        T = random_hermitian(rng, n, 3.0)
        C = random_hermitian(rng, n, float(rng.uniform(0.01, 1.0)))
        c = float(np.linalg.norm(C, 2))
        a, b = np.linalg.eigvalsh(T), np.linalg.eigvalsh(T + C)
        grid = np.linspace(0, float(np.max(np.abs(b))) + 1, 100)
        out.append(perturbation_check(a, b, c, grid))
    return out


@dataclass
class ResidueReport:
    base: float
    perturbed: float
    difference: float
    relative: float
    grid: list = field(default_factory=list)
    bound_ok: bool = True
    exact: object = None

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "perturbed": self.perturbed,
            "difference": self.difference,
            "relative": self.relative,
            "grid": self.grid,
            "bound_ok": self.bound_ok,
            "exact_difference": None if self.exact is None else str(self.exact),
        }


def _richardson(hs, fs):
    """Extrapolate f(h) -> h = 0 for halving steps, assuming an expansion in powers of h."""
    table = list(fs)
    for level in range(1, len(table)):
        table = [(2**level * table[i + 1] - table[i]) / (2**level - 1) for i in range(len(table) - 1)]
    return table[0]


def regularized_residue(spec, d: float, s_grid=None):
    """Richardson limit of h·(ζ_Λ(d + h) + tail) with tail c·d·Λ^{-h}/h from N(λ) ≈ cλ^d."""
    hs = list(s_grid) if s_grid is not None else [0.5, 0.25, 0.125, 0.0625]
    lam = spec.cutoff
    c = volume_constant(spec, d)
    fs = [h * zeta_truncated(spec, d + h) + c * d * lam ** (-h) for h in hs]
    return _richardson(hs, fs), list(zip(hs, fs))


def same_res_bound_holds(spec, s: float, t: float = 1.0) -> bool:
    """|Σ_{v>=t} w v^{-s} - Σ w (v^2+1)^{-s/2}| <= Σ_{v<t} w + (s/2) Σ_{v>=t} w v^{-s-2}."""
    lines = sorted(spec.lines, key=lambda l: l.value)
    cut = math.fsum(float(l.weighted) * l.value ** (-s) for l in lines if l.value >= t)
    res = math.fsum(float(l.weighted) * (l.value**2 + 1) ** (-s / 2) for l in lines)
    bound = math.fsum(float(l.weighted) for l in lines if l.value < t) + (s / 2) * math.fsum(
        float(l.weighted) * l.value ** (-s - 2) for l in lines if l.value >= t
    )
    return abs(cut - res) <= bound * (1 + 1e-12)


def residue_stability_check(base_spec, perturbed_spec, d: float, s_grid=None) -> ResidueReport:
    """Extrapolated residues of two spectra at s = d, with the exact UHF comparison when available."""
    fam = (base_spec.model.get("family"), perturbed_spec.model.get("family"))
    if fam == ("uhf", "uhf"):
        from .dirac import uhf_residue

        mb, mp = base_spec.model, perturbed_spec.model
        rb = uhf_residue(mb["r"], Fraction(mb["s"]), mb["level"])
        rp = uhf_residue(mp["r"], Fraction(mp["s"]), mp["level"])
        import sympy

        diff = sympy.simplify(rp - rb)
        rel = float(abs(diff) / abs(rb))
        return ResidueReport(float(rb), float(rp), float(diff), rel, [], True, diff)
    rb, gb = regularized_residue(base_spec, d, s_grid)
    rp, gp = regularized_residue(perturbed_spec, d, s_grid)
    bound_ok = all(same_res_bound_holds(sp, d + 0.5) for sp in (base_spec, perturbed_spec))
    return ResidueReport(rb, rp, rp - rb, abs(rp - rb) / abs(rb), [gb, gp], bound_ok)


def report(spec, d: float | None = None) -> dict:
    fit = dimension_and_residue(spec)
    dd = d if d is not None else fit.d_hat
    return {
        "model": spec.model,
        "cutoff": spec.cutoff,
        "d_hat": fit.d_hat,
        "residue_hat": fit.residue,
        "dixmier_avg": dixmier_average(spec, dd),
        "dixmier_log_slope": dixmier_log_slope(spec, dd),
        "window": list(fit.window),
        "residual": fit.residual,
    }
