"""Command-line front end: evaluation, verification suites, spectra and
continuum-limit scans, with deterministic CSV/JSON output.

Exit codes: 0 success, 1 tolerance violation in verify, 2 invalid
configuration, 3 singular parameters on the explicit route.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import bivariate, continuum, operators, spectra, univariate
from .bivariate import ModelParams
from .errors import SingularParameters

SCHEMA_TAG = "charlier-lattice/v1"

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_VALIDATION = 2
EXIT_SINGULAR = 3


def _fmt(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return "overflow"
        return repr(v)
    return v


def write_rows(rows: list[dict], columns: list[str], fmt: str, out: str | None) -> None:
    """Serialize rows to CSV (schema-tag record, header, data) or JSON."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([SCHEMA_TAG])
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])
        text = buf.getvalue()
    else:
        payload = {
            "schema": SCHEMA_TAG,
            "rows": [{c: _fmt(r[c]) for c in columns} for r in rows],
        }
        text = json.dumps(payload, indent=2, allow_nan=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def thread_cap() -> int | None:
    """Optional parallelism cap from the environment.  All computation
    is currently single-threaded, so any positive cap is honored
    trivially; the value is still validated."""
    raw = os.environ.get("CHARLIER_LATTICE_THREADS")
    if raw is None:
        return None
    cap = int(raw)
    if cap < 1:
        raise ValueError("CHARLIER_LATTICE_THREADS must be a positive integer")
    return cap


def _params(args) -> ModelParams:
    return ModelParams(args.alpha, args.beta, args.theta)


def cmd_eval(args) -> int:
    params = _params(args)
    if args.route == "explicit" and not bivariate.params_generic(params):
        print(
            "explicit route refused: parameters are singular "
            f"(omega={params.omega:.3e}, zeta={params.zeta:.3e}); "
            "use --route ladder",
            file=sys.stderr,
        )
        return EXIT_SINGULAR
    evaluate = (
        bivariate.charlier2_explicit
        if args.route == "explicit"
        else bivariate.charlier2_ladder
    )
    if args.grid:
        g1, g2 = (int(v) for v in args.grid.lower().split("x"))
        points = [(x1, x2) for x1 in range(g1) for x2 in range(g2)]
    else:
        points = [(args.x1, args.x2)]
    rows = [
        {
            "n1": args.n1,
            "n2": args.n2,
            "x1": x1,
            "x2": x2,
            "value": evaluate(args.n1, args.n2, x1, x2, params),
        }
        for x1, x2 in points
    ]
    write_rows(rows, ["n1", "n2", "x1", "x2", "value"], args.format, args.out)
    return EXIT_OK


def _verify_rows(params: ModelParams, nmax: int, seed: int) -> list[dict]:
    """Residuals of every identity suite; one row per identity."""
    rows: list[dict] = []

    def add(suite, identity, residual, tol, expected_mismatch=False):
        ok = (residual >= tol) if expected_mismatch else (residual < tol)
        rows.append(
            {
                "suite": suite,
                "identity": identity,
                "residual": float(residual),
                "tolerance": float(tol),
                "status": "pass" if ok else "FAIL",
            }
        )

    window = (8, 8)
    probes = [operators.random_probe(seed + k) for k in range(10)]
    C = lambda n1, n2: (
        lambda x1, x2: bivariate.charlier2_ladder(n1, n2, x1, x2, params)
    )

    # ladder: raising/lowering actions on the polynomials
    # absolute residuals grow with the polynomial magnitude, so the
    # 1e-10 budget is honest only on a moderate window
    rl = univariate.univariate_ladder_check(5, 10, params.alpha)
    add("ladder", "univariate raising/lowering", rl.max_residual, 1e-10)
    worst = 0.0
    for n1 in range(nmax + 1):
        for n2 in range(nmax + 1 - n1):
            for i, (dn1, dn2) in ((1, (1, 0)), (2, (0, 1))):
                up = operators.raising(i, params).apply(C(n1, n2))
                coef = math.sqrt((n1 + 1) if i == 1 else (n2 + 1))
                tgt = C(n1 + dn1, n2 + dn2)
                worst = max(
                    worst,
                    operators.max_abs_residual(
                        up, lambda a, b, c=coef, t=tgt: c * t(a, b), window
                    ),
                )
                down = operators.lowering(i, params).apply(C(n1, n2))
                k = n1 if i == 1 else n2
                if k == 0:
                    tgt2 = lambda a, b: 0.0
                else:
                    lo = C(n1 - dn1, n2 - dn2)
                    tgt2 = lambda a, b, c=math.sqrt(k), t=lo: c * t(a, b)
                worst = max(worst, operators.max_abs_residual(down, tgt2, window))
    add("ladder", "bivariate raising/lowering", worst, 1e-9)

    # eigen: Y_i actions and composition-vs-stencil
    worst = 0.0
    for n1 in range(nmax + 1):
        for n2 in range(nmax + 1 - n1):
            for i, ev in ((1, n1), (2, n2)):
                y = operators.eigen_op(i, params).apply(C(n1, n2))
                worst = max(
                    worst,
                    operators.max_abs_residual(
                        y, lambda a, b, e=ev, t=C(n1, n2): e * t(a, b), window
                    ),
                )
    add("eigen", "Y_i eigenvalue action", worst, 1e-9)
    worst = 0.0
    for i in (1, 2):
        comp = operators.eigen_op(i, params)
        expl = operators.eigen_op_explicit(i, params)
        for f in probes[:5]:
            worst = max(
                worst,
                operators.max_abs_residual(comp.apply(f), expl.apply(f), (12, 12)),
            )
    add("eigen", "Y_i composition vs stencil", worst, 1e-10)

    # su2: symmetry and commutation table
    h = operators.hamiltonian_explicit(params)
    jx, jy, jz = operators.su2_generators(params)
    worst = 0.0
    for f in probes[:5]:
        worst = max(
            worst,
            operators.max_abs_residual(
                operators.hamiltonian(params).apply(f), h.apply(f), (12, 12)
            ),
        )
    add("su2", "H stencil vs Y1+Y2", worst, 1e-10)
    for name, j in (("J_X", jx), ("J_Y", jy), ("J_Z", jz)):
        worst = max(
            operators.max_abs_residual(
                operators.commutator(h, j).apply(f), lambda a, b: 0.0, (10, 10)
            )
            for f in probes
        )
        add("su2", f"[H, {name}] = 0", worst, 1e-9)
    table = (
        ("[J_X, J_Y] = i J_Z", jx, jy, jz),
        ("[J_Y, J_Z] = i J_X", jy, jz, jx),
        ("[J_Z, J_X] = i J_Y", jz, jx, jy),
    )
    for name, a, b, c in table:
        com = operators.commutator(a, b)
        tgt = 1j * c
        worst = max(
            operators.max_abs_residual(com.apply(f), tgt.apply(f), (10, 10))
            for f in probes
        )
        add("su2", name, worst, 1e-9)

    # casimir
    cas = operators.casimir(params)
    hh = 0.5 * h @ (0.5 * h + operators.identity())
    worst = max(
        operators.max_abs_residual(cas.apply(f), hh.apply(f), (10, 10)) for f in probes
    )
    add("casimir", "J^2 = (H/2)(H/2+1)", worst, 1e-8)

    # ortho
    worst = max(
        univariate.orthonormality_residual(n, m, params.alpha)
        for n in range(nmax + 1)
        for m in range(nmax + 1)
    )
    add("ortho", "univariate orthonormality", worst, 1e-9)
    pairs = [
        (n1, n2)
        for n1 in range(nmax + 1)
        for n2 in range(nmax + 1 - n1)
    ]
    worst = max(
        bivariate.orthogonality_residual(params, n, m) for n in pairs for m in pairs
    )
    add("ortho", "bivariate orthogonality", worst, 1e-9)

    # gauge: conjugation vs closed forms; diagonal constants excluded
    c_, s_ = math.cos(params.theta), math.sin(params.theta)
    a_, b_ = params.alpha, params.beta
    closed = {
        "raise1": operators.stencil(
            {
                (-1, 0): lambda x1, x2: c_ * math.sqrt(x1),
                (0, -1): lambda x1, x2: -s_ * math.sqrt(x2),
                (0, 0): -params.omega,
            }
        ),
        "raise2": operators.stencil(
            {
                (-1, 0): lambda x1, x2: s_ * math.sqrt(x1),
                (0, -1): lambda x1, x2: c_ * math.sqrt(x2),
                (0, 0): -params.zeta,
            }
        ),
        "lower1": operators.stencil(
            {
                (1, 0): lambda x1, x2: c_ * math.sqrt(x1 + 1),
                (0, 1): lambda x1, x2: -s_ * math.sqrt(x2 + 1),
                (0, 0): -params.omega,
            }
        ),
        "lower2": operators.stencil(
            {
                (1, 0): lambda x1, x2: s_ * math.sqrt(x1 + 1),
                (0, 1): lambda x1, x2: c_ * math.sqrt(x2 + 1),
                (0, 0): -params.zeta,
            }
        ),
    }
    raw = {
        "raise1": operators.raising(1, params),
        "raise2": operators.raising(2, params),
        "lower1": operators.lowering(1, params),
        "lower2": operators.lowering(2, params),
    }
    for name, op in raw.items():
        gauged = operators.gauge_transform(op, params)
        worst = max(
            operators.max_abs_residual(gauged.apply(f), closed[name].apply(f), (10, 10))
            for f in probes[:3]
        )
        add("gauge", f"conjugated {name} vs closed form", worst, 1e-10)
    # the lower2 closed form with down shifts instead of up shifts does
    # NOT match the conjugation; its residual must be large
    bogus = operators.stencil(
        {
            (-1, 0): lambda x1, x2: s_ * math.sqrt(x1 + 1) if x1 > 0 else 0.0,
            (0, -1): lambda x1, x2: c_ * math.sqrt(x2 + 1) if x2 > 0 else 0.0,
            (0, 0): -params.zeta,
        }
    )
    gauged = operators.gauge_transform(raw["lower2"], params)
    mismatch = max(
        operators.max_abs_residual(gauged.apply(f), bogus.apply(f), (10, 10))
        for f in probes[:3]
    )
    add("gauge", "down-shift lower2 variant mismatch detected", mismatch, 1e-3,
        expected_mismatch=True)
    return rows


SUITES = ("ladder", "eigen", "su2", "casimir", "ortho", "gauge", "all")


def cmd_verify(args) -> int:
    params = _params(args)
    rows = _verify_rows(params, args.nmax, args.seed)
    if args.suite != "all":
        rows = [r for r in rows if r["suite"] == args.suite]
        if not rows:
            print(f"unknown suite {args.suite}", file=sys.stderr)
            return EXIT_VALIDATION
    if args.tol is not None:
        for r in rows:
            r["tolerance"] = args.tol
            r["status"] = "pass" if r["residual"] < args.tol else "FAIL"
    write_rows(
        rows, ["suite", "identity", "residual", "tolerance", "status"],
        args.format, args.out,
    )
    failed = [r for r in rows if r["status"] == "FAIL"]
    for r in failed:
        print(
            f"FAIL {r['suite']}: {r['identity']} residual {r['residual']:.3e} "
            f">= {r['tolerance']:.1e}",
            file=sys.stderr,
        )
    return EXIT_TOLERANCE if failed else EXIT_OK


def cmd_spectrum(args) -> int:
    params = _params(args)
    rows = []
    if args.k1 is not None or args.k2 is not None:
        k1 = args.k1 if args.k1 is not None else 1.0
        k2 = args.k2 if args.k2 is not None else 1.0
        ht = operators.anisotropic_hamiltonian(k1, k2, params)
        for n1 in range(args.Nmax + 1):
            for n2 in range(args.Nmax + 1 - n1):
                f = lambda a, b: bivariate.charlier2_ladder(n1, n2, a, b, params)
                ev = k1 * n1 + k2 * n2
                res = operators.max_abs_residual(
                    ht.apply(f), lambda a, b: ev * f(a, b), (8, 8)
                )
                rows.append(
                    {"N": n1 + n2, "n": n1, "eigenvalue": ev,
                     "multiplicity": 1, "residual": float(res)}
                )
        cols = ["N", "n", "eigenvalue", "multiplicity", "residual"]
    elif args.matrix:
        trunc = spectra.TruncationSpec(args.window, args.window)
        mat, _ = spectra.truncated_matrix(
            operators.hamiltonian_explicit(params), trunc, params, gauged=True
        )
        eigs = np.linalg.eigvalsh(mat)
        for k, ev in enumerate(eigs[: args.Nmax + 1]):
            rows.append({"N": k, "n": k, "eigenvalue": float(ev),
                         "multiplicity": 1, "residual": 0.0})
        cols = ["N", "n", "eigenvalue", "multiplicity", "residual"]
    else:
        for N in range(args.Nmax + 1):
            rep = spectra.degeneracy_report(N, params)
            rows.append(
                {"N": N, "n": -1, "eigenvalue": float(N),
                 "multiplicity": N + 1, "residual": float(rep.max_residual())}
            )
        cols = ["N", "n", "eigenvalue", "multiplicity", "residual"]
    write_rows(rows, cols, args.format, args.out)
    return EXIT_OK


def cmd_limit(args) -> int:
    scales = [float(s) for s in args.scales.split(",") if s]
    if not scales or any(s <= 0 for s in scales):
        raise ValueError("--scales must be a nonempty list of positive reals")
    rows = []
    for scale in scales:
        if args.what == "weight":
            err = continuum.weight_limit_error(scale, args.window)
        elif args.what == "wavefunction":
            err = continuum.wavefunction_limit_error(
                args.N, args.n, scale, args.theta, args.window
            )
        else:
            err = continuum.ladder_limit_error(
                args.which, args.N, args.n, scale, args.theta, args.window
            )
        rows.append(
            {"scale": scale, "quantity": args.what, "N": args.N, "n": args.n,
             "theta": args.theta, "sup_error": float(err)}
        )
    write_rows(
        rows, ["scale", "quantity", "N", "n", "theta", "sup_error"],
        args.format, args.out,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="charlier-lattice",
        description="Bivariate Charlier polynomials and the discrete 2D oscillator",
    )
    ap.add_argument("--alpha", type=float, default=1.3)
    ap.add_argument("--beta", type=float, default=0.8)
    ap.add_argument("--theta", type=float, default=0.7, help="angle in radians")
    ap.add_argument("--out", default=None, help="output file (default stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--seed", type=int, default=0, help="seed for probe functions")
    ap.add_argument("--tol", type=float, default=None,
                    help="override every per-identity tolerance")
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a bivariate polynomial")
    pe.add_argument("--n1", type=int, required=True)
    pe.add_argument("--n2", type=int, required=True)
    pe.add_argument("--x1", type=int, default=0)
    pe.add_argument("--x2", type=int, default=0)
    pe.add_argument("--grid", default=None, help="evaluate on a grid, e.g. 4x4")
    pe.add_argument("--route", choices=("ladder", "explicit"), default="ladder")
    pe.set_defaults(func=cmd_eval)

    pv = sub.add_parser("verify", help="run identity verification suites")
    pv.add_argument("--suite", choices=SUITES, default="all")
    pv.add_argument("--nmax", type=int, default=4)
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("spectrum", help="degeneracies and eigenvalues")
    ps.add_argument("--Nmax", type=int, default=3)
    ps.add_argument("--matrix", action="store_true",
                    help="diagonalize the gauged Hamiltonian on a window")
    ps.add_argument("--window", type=int, default=40)
    ps.add_argument("--k1", type=float, default=None)
    ps.add_argument("--k2", type=float, default=None)
    ps.set_defaults(func=cmd_spectrum)

    pl = sub.add_parser("limit", help="continuum-limit convergence scans")
    pl.add_argument("--what", choices=("weight", "wavefunction", "ladder"),
                    required=True)
    pl.add_argument("--which", choices=("raise1", "raise2", "lower1", "lower2"),
                    default="raise1", help="which ladder operator (ladder scans)")
    pl.add_argument("--N", type=int, default=0)
    pl.add_argument("--n", type=int, default=0)
    pl.add_argument("--scales", default="2,4,8,16")
    pl.add_argument("--window", type=float, default=2.0)
    pl.set_defaults(func=cmd_limit)
    return ap


def _validate(args) -> None:
    if args.alpha <= 0 or args.beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if getattr(args, "n1", 0) < 0 or getattr(args, "n2", 0) < 0:
        raise ValueError("degrees must be nonnegative")
    if getattr(args, "x1", 0) < 0 or getattr(args, "x2", 0) < 0:
        raise ValueError("lattice points must be nonnegative")
    if getattr(args, "N", 0) < 0 or not 0 <= getattr(args, "n", 0) <= getattr(args, "N", 0):
        raise ValueError("need 0 <= n <= N")
    if getattr(args, "nmax", 0) < 0 or getattr(args, "Nmax", 0) < 0:
        raise ValueError("Nmax/nmax must be nonnegative")
    k1, k2 = getattr(args, "k1", None), getattr(args, "k2", None)
    if (k1 is not None and k1 <= 0) or (k2 is not None and k2 <= 0):
        raise ValueError("k1, k2 must be positive")
    thread_cap()


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        _validate(args)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else 0
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except SingularParameters as exc:
        print(f"singular parameters: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
