"""Command-line driver: ``ncsolenoid <subcommand> ...``.

Every report is JSON with ``"schema": 1`` and sorted keys, so the same
arguments and seed give byte-identical output. Spectra can also be written
as CSV. Exit codes: 0 success, 2 invariant violation, 3 parse or
precondition error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import dirac, intlat, lattice, nctorus, spectral

SCHEMA = 1
EXIT_OK, EXIT_INVARIANT, EXIT_PRECONDITION = 0, 2, 3


class Failure(Exception):
    def __init__(self, code: int, kind: str, message: str, payload=None):
        super().__init__(message)
        self.code, self.kind, self.payload = code, kind, payload


def _default(x):
    if isinstance(x, Fraction):
        return intlat.format_rational(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, (tuple, set, frozenset)):
        return list(x)
    return str(x)


def dumps(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, default=_default, indent=2)


def _matrix(text):
    if text is None:
        raise Failure(EXIT_PRECONDITION, "precondition", "--matrix is required")
    return intlat.parse_matrix(text)


def _fmt_matrix(M):
    return [[intlat.format_rational(x) for x in row] for row in M]


# ------------------------------------------------------------------ commands


def cmd_analyze(args) -> dict:
    B = _matrix(args.matrix)
    d = intlat.det(B)
    out = {"matrix": intlat.format_matrix(B), "det": d}
    if d == 0:
        raise Failure(EXIT_PRECONDITION, "precondition", "singular matrix", out)
    snf = intlat.smith_normal_form(B)
    rep = intlat.purely_expanding(B)
    out.update(
        {
            "smith": {"S": _fmt_matrix(snf.S), "D": _fmt_matrix(snf.D), "T": _fmt_matrix(snf.T), "factors": list(snf.factors)},
            "cofactor": _fmt_matrix(intlat.cofactor_matrix(B)),
            "A": _fmt_matrix(intlat.inverse_transpose(B)),
            "expansion": {
                "purely_expanding": rep.purely_expanding,
                "certificate_kind": rep.certificate_kind,
                "certificate": rep.certificate,
                "tail_bound": rep.tail_bound,
            },
        }
    )
    return out


def cmd_group(args) -> dict:
    B = _matrix(args.matrix)
    G = lattice.enumerate_quotient(B)
    ok, bad = lattice.schur_orthogonality_check(G)
    out = {"matrix": intlat.format_matrix(B), "group": G.to_json(), "schur_orthogonality": ok}
    if args.level >= 1:
        out["cocycle_identity"] = lattice.check_cocycle_identity(B, args.level)
    if not ok:
        raise Failure(EXIT_INVARIANT, "invariant", f"Schur orthogonality fails at {bad}", out)
    return out


def _build_spectrum(args):
    model = args.model
    if model == "torus":
        return dirac.torus_spectrum(_matrix(args.matrix), args.level, args.cutoff)
    if model == "assembled":
        return dirac.assembled_cover_spectrum(_matrix(args.matrix), args.level, args.cutoff)
    if model == "circle":
        return dirac.circle_spectrum(args.cutoff)
    if model == "crossed":
        base = dirac.circle_spectrum(args.cutoff) if args.base == "circle" else dirac.point_spectrum()
        return dirac.crossed_spectrum(base, _matrix(args.matrix), args.level, args.cutoff)
    if model == "uhf":
        return dirac.uhf_spectrum(args.r, args.s, args.level, args.K)
    raise Failure(EXIT_PRECONDITION, "precondition", f"unknown model {model}")


def cmd_spectrum(args):
    if args.cutoff is not None and args.cutoff <= 0:
        raise Failure(EXIT_PRECONDITION, "precondition", "cutoff must be positive")
    spec = _build_spectrum(args)
    extra = {}
    if args.check_equivalence:
        if args.model != "torus":
            raise Failure(EXIT_PRECONDITION, "precondition", "--check-equivalence needs --model torus")
        dirac.assembled_cover_spectrum(_matrix(args.matrix), args.level, args.cutoff)
        extra["equivalence"] = True
    if args.format == "csv":
        return spec.to_csv()
    return {**spec.to_json(), **extra, "total_weight": spec.total_weight()}


def cmd_zeta(args) -> dict:
    spec = _build_spectrum(args)
    out = {"model": spec.model, "cutoff": spec.cutoff, "t": args.t, "form": args.form}
    out["zeta"] = spectral.zeta_truncated(spec, args.t, args.form)
    exact = spectral.zeta_closed_form(spec, Fraction(str(args.t)))
    if exact is not None:
        out["zeta_closed_form"] = str(exact)
    if args.fit:
        if args.model == "uhf":
            d = 2 / args.s
            out["fit"] = {
                "dixmier_avg": spectral.dixmier_average(spec, d),
                "dixmier_log_slope": spectral.dixmier_log_slope(spec, d),
            }
        else:
            out["fit"] = spectral.report(spec)
    return out


def cmd_radii(args) -> dict:
    kw = {}
    if args.model in ("torus", "crossed", "nctorus"):
        kw["B"] = _matrix(args.matrix)
    if args.model == "nctorus":
        kw["theta"] = args.theta
    if args.model == "uhf":
        kw.update(r=args.r, s=args.s)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rows = dirac.radii_divergence(args.model, args.kmax, **kw)
    qn = [row.quotient_norm for row in rows]
    return {
        "model": args.model,
        "rows": [{"k": r.k, "seminorm": r.seminorm, "quotient_norm": r.quotient_norm} for r in rows],
        "strictly_increasing": all(a < b for a, b in zip(qn, qn[1:])),
        "warnings": [str(w.message) for w in caught],
    }


def cmd_nctorus(args) -> dict:
    B = _matrix(args.matrix)
    rep = nctorus.fixed_point_identities(B, args.theta)
    out = rep.to_json()
    k = 3
    ph, _ = nctorus.weyl_power((1, 1), k, args.theta)
    W = nctorus.weyl_element((1, 1), args.theta)
    out["weyl_power_law"] = W.power(k) == nctorus.weyl_element((k, k), args.theta) * nctorus.phase(ph)
    if not (rep.ok and out["weyl_power_law"]):
        raise Failure(EXIT_INVARIANT, "invariant", "rotation-algebra identity failed", out)
    return out


def _uhf_levels(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise Failure(EXIT_PRECONDITION, "parse", f"bad --levels: {text}") from exc


def cmd_uhf(args) -> dict:
    levels = _uhf_levels(args.levels)
    s = Fraction(str(args.s))
    if args.r < 2 or s < 1:
        raise Failure(EXIT_PRECONDITION, "precondition", "need r >= 2 and s >= 1")
    t0 = dirac.uhf_abscissa(args.r, s)
    residues = {str(n): dirac.uhf_residue(args.r, s, n) for n in levels}
    vals = list(residues.values())
    import sympy

    equal = all(sympy.simplify(v - vals[0]) == 0 for v in vals)
    out = {
        "r": args.r,
        "s": intlat.format_rational(s),
        "abscissa": str(t0),
        "residues": {k: str(v) for k, v in residues.items()},
        "residues_float": {k: float(v) for k, v in residues.items()},
        "residues_equal": equal,
    }
    if args.zeta_grid:
        grid = [t0 + Fraction(1, 2**j) for j in range(4)]
        out["zeta_grid"] = {
            str(n): [{"t": str(t), "zeta": str(dirac.uhf_zeta_value(args.r, s, n, t))} for t in grid] for n in levels
        }
    if args.r ** (2 * (max(levels) + args.K + 1)) <= 4096:
        ok = True
        for n in levels:
            oracle = dirac.uhf_tensor_oracle(args.r, s, n, args.K)
            spec = dirac.uhf_spectrum(args.r, s, n, args.K)
            ok &= [oracle[v] for v in oracle] == [(l.multiplicity, l.weighted) for l in spec.lines]
        out["weights_match_tensor_oracle"] = ok
        if not ok:
            raise Failure(EXIT_INVARIANT, "invariant", "UHF weights disagree with the tensor oracle", out)
    if not equal:
        raise Failure(EXIT_INVARIANT, "invariant", "UHF residues differ between levels", out)
    return out


def cmd_appendix(args) -> dict:
    trials = spectral.perturbation_trials(args.trials, args.seed)
    passed = sum(t.ok for t in trials)
    B = _matrix(args.matrix)
    base = dirac.torus_spectrum(B, 0, args.cutoff)
    cover = dirac.torus_spectrum(B, args.level, args.cutoff)
    torus = spectral.residue_stability_check(base, cover, 2.0)
    uhf = spectral.residue_stability_check(dirac.uhf_spectrum(2, 1, 0, 4), dirac.uhf_spectrum(2, 1, 3, 4), 2.0)
    out = {
        "perturbation": {"trials": len(trials), "passed": passed},
        "residue_stability_torus": torus.to_json(),
        "residue_stability_uhf": uhf.to_json(),
    }
    if passed != len(trials):
        bad = next(t for t in trials if not t.ok)
        out["perturbation"]["counterexample"] = bad.counterexample
        raise Failure(EXIT_INVARIANT, "invariant", "perturbation inequality violated", out)
    return out


def cmd_report(args) -> dict:
    B = _matrix(args.matrix)
    ns = argparse.Namespace(matrix=args.matrix, level=1)
    spec = dirac.torus_spectrum(B, args.level, args.cutoff)
    dirac.assembled_cover_spectrum(B, args.level, args.cutoff)
    out = {
        "analyze": cmd_analyze(ns),
        "group": cmd_group(ns),
        "spectrum_equivalence": True,
        "cn_norm": [
            {"n": n, "exact": c.exact_norm, "bound": c.paper_bound}
            for n, c in ((n, dirac.cn_norm(B, n)) for n in range(1, args.kmax + 1))
        ],
    }
    try:
        out["spectral"] = spectral.report(spec, 2.0 if len(B) == 2 else None)
    except spectral.InsufficientSpectrumError as exc:
        out["spectral"] = {"error": str(exc)}
    return out


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncsolenoid", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, matrix=True):
        if matrix:
            sp.add_argument("--matrix")
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        sp.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
        sp.add_argument("--output", default=argparse.SUPPRESS)

    sp = sub.add_parser("analyze", help="determinant, Smith form, cofactor, expansion certificate")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("group", help="deck group, dual group and cocycle checks")
    common(sp)
    sp.add_argument("--level", type=int, default=1)
    sp.set_defaults(func=cmd_group)

    def spectrum_args(sp):
        common(sp)
        sp.add_argument("--model", choices=("torus", "assembled", "circle", "crossed", "uhf"), default="torus")
        sp.add_argument("--level", type=int, default=0)
        sp.add_argument("--cutoff", type=float, default=40.0)
        sp.add_argument("--base", choices=("circle", "point"), default="circle")
        sp.add_argument("--r", type=int, default=2)
        sp.add_argument("--s", type=float, default=1.0)
        sp.add_argument("--K", type=int, default=8)

    sp = sub.add_parser("spectrum", help="Dirac spectrum as JSON or CSV")
    spectrum_args(sp)
    sp.add_argument("--check-equivalence", action="store_true")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("zeta", help="truncated zeta values and dimension fit")
    spectrum_args(sp)
    sp.set_defaults(func=cmd_zeta)
    sp.add_argument("--form", choices=("abs", "resolvent"), default="abs")
    sp.add_argument("--fit", action="store_true")
    sp.add_argument("--t", type=float, default=3.0, help="zeta exponent")

    sp = sub.add_parser("radii", help="Lip seminorms and quotient norms of the probe sequence")
    common(sp)
    sp.add_argument("--model", choices=("torus", "crossed", "nctorus", "uhf"), required=True)
    sp.add_argument("--kmax", type=int, default=10)
    sp.add_argument("--theta", default="1/3")
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--s", type=float, default=1.0)
    sp.set_defaults(func=cmd_radii)

    sp = sub.add_parser("nctorus", help="rotation-algebra identity checks")
    nsub = sp.add_subparsers(dest="action", required=True)
    chk = nsub.add_parser("check")
    common(chk)
    chk.add_argument("--theta", required=True)
    chk.set_defaults(func=cmd_nctorus)

    sp = sub.add_parser("uhf", help="UHF abscissa, residues and weight validation")
    common(sp, matrix=False)
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--levels", default="0")
    sp.add_argument("--K", type=int, default=2)
    sp.add_argument("--zeta-grid", action="store_true")
    sp.set_defaults(func=cmd_uhf)

    sp = sub.add_parser("appendix", help="perturbation and residue-stability lemmas")
    common(sp)
    sp.set_defaults(matrix="2,0;0,2")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("--cutoff", type=float, default=2 * math.pi * 50)
    sp.set_defaults(func=cmd_appendix)

    sp = sub.add_parser("report", help="combined summary for one matrix")
    common(sp)
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--cutoff", type=float, default=2 * math.pi * 50)
    sp.add_argument("--kmax", type=int, default=6)
    sp.set_defaults(func=cmd_report)
    return p


def _emit(text: str, args) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PRECONDITION if exc.code else EXIT_OK
    np.random.seed(args.seed)
    try:
        result = args.func(args)
    except Failure as f:
        body = {"error": {"kind": f.kind, "message": str(f)}}
        if f.payload is not None:
            body["report"] = f.payload
        _emit(dumps(body), args)
        return f.code
    except dirac.InvariantViolation as exc:
        _emit(dumps({"error": {"kind": "invariant", "message": str(exc)}}), args)
        return EXIT_INVARIANT
    except intlat.MatrixParseError as exc:
        _emit(dumps({"error": {"kind": "parse", "message": str(exc), "position": exc.position}}), args)
        return EXIT_PRECONDITION
    except (ValueError, ArithmeticError) as exc:
        _emit(dumps({"error": {"kind": "precondition", "message": str(exc)}}), args)
        return EXIT_PRECONDITION
    _emit(result if isinstance(result, str) else dumps({"command": args.command, **result}), args)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
