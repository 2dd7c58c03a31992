"""Command line front end.

Subcommands:

  validate   residual report for a frame (fixture name or JSON file)
  poly       export a polynomial table as JSON, optionally cross-checked
  packet     evaluate a wave packet on a position grid, write CSV
  wigner     evaluate a Wigner transform on a phase-space grid, write CSV
  verify     run a property suite and print a JSON report

Exit codes: 0 success, 1 a verification or validation check failed,
2 usage error (bad flags, malformed input, unknown fixture).  All output
is deterministic: fixtures are closed-form, random sweeps are seeded, and
floats are written with repr precision.
"""

import argparse
import json
import sys

import numpy as np

from . import fixtures, phasespace as ps, polys, verification, wavepackets as wp
from .errors import HagedornError
from .frames import (
    TOL_FRAME,
    frame_residuals,
    matrix_from_json,
    matrix_to_json,
    omega,
    validate_frame,
)

ORACLE_TOL = 1e-10


class UsageError(Exception):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_matrices(source):
    """Frame source -> (Q, P) without validation."""
    if source in fixtures.FRAMES:
        f = fixtures.FRAMES[source]
        return f.Q, f.P
    obj = _read_json(source)
    if not isinstance(obj, dict) or "Q" not in obj or "P" not in obj:
        raise UsageError(f"{source}: frame JSON needs 'Q' and 'P' keys")
    return matrix_from_json(obj["Q"]), matrix_from_json(obj["P"])


def _load_frame(source):
    if source in fixtures.FRAMES:
        return fixtures.FRAMES[source]
    Q, P = _load_matrices(source)
    return validate_frame(Q, P)


def _load_matrix(source):
    if source in fixtures.MATRICES:
        return fixtures.MATRICES[source]
    obj = _read_json(source)
    if isinstance(obj, dict) and "M" in obj:
        obj = obj["M"]
    return matrix_from_json(obj)


def _index(values, dim, flag):
    k = tuple(int(v) for v in values)
    if len(k) != dim:
        raise UsageError(f"{flag} needs {dim} entries for this frame, got {len(k)}")
    if any(v < 0 for v in k):
        raise UsageError(f"{flag} entries must be nonnegative")
    return k


def _out_stream(path):
    return open(path, "w") if path else sys.stdout


def _emit(payload, path):
    text = json.dumps(payload, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- validate --------------------------------------------------------------------

def cmd_validate(args):
    Q, P = _load_matrices(args.fixture)
    res = frame_residuals(Q, P)
    report = {k: float(v) for k, v in res.items()}
    ok = res["isotropy"] <= args.tol and res["normalisation"] <= args.tol

    if ok:
        f = validate_frame(Q, P, tol=args.tol)
        from .frames import symplectic_metric

        G = symplectic_metric(f)
        O = omega(f.dim)
        report["metric_symmetry"] = float(np.abs(G - G.T).max())
        report["metric_symplectic"] = float(np.abs(G @ O @ G.T - O).max())
        report["metric_min_eigenvalue"] = float(np.linalg.eigvalsh(G).min())
        ok = (
            report["metric_symmetry"] <= args.tol
            and report["metric_symplectic"] <= args.tol
            and report["metric_min_eigenvalue"] > 0.0
        )
    report["pass"] = bool(ok)
    _emit(report, args.out)
    return 0 if ok else 1


# -- poly ------------------------------------------------------------------------

def _graded_lex(indices):
    return sorted(indices, key=lambda k: (sum(k), k))


def cmd_poly(args):
    M = _load_matrix(args.fixture)
    d = M.shape[0]
    kmax = _index(args.k, d, "--k")
    table = polys.ttrr_generate(M, kmax, total_degree=sum(kmax))

    if args.check:
        return _poly_check(M, table, args)

    payload = {
        "matrix": matrix_to_json(M),
        "kmax": list(kmax),
        "entries": [
            {"k": list(k), "terms": polys.poly_to_json(table[k])}
            for k in _graded_lex(table.indices())
        ],
    }
    _emit(payload, args.out)
    return 0


def _poly_check(M, table, args):
    d = M.shape[0]
    worst = {"genfunc": 0.0, "tensor": 0.0, "laguerre": 0.0, "counting": 0.0}
    for k in table.indices():
        q = table[k]
        scale = max(1.0, abs(q.coefficient(k).real))
        worst["genfunc"] = max(
            worst["genfunc"],
            polys.coefficient_distance(q, polys.genfunc_coefficient(M, k)) / scale,
        )
        worst["tensor"] = max(
            worst["tensor"],
            polys.coefficient_distance(q, polys.tensor_expand(M, k)) / scale,
        )
        pair = next(
            ((n, m) for n in range(d) for m in range(n + 1, d)
             if M[n, m] != 0 and k[n] > 0 and k[m] > 0),
            None,
        )
        if pair is not None:
            worst["laguerre"] = max(
                worst["laguerre"],
                polys.coefficient_distance(q, polys.laguerre_reduce(M, k, *pair)) / scale,
            )
        for j in range(d):
            lhs = polys.apply_counting_operator(M, q, j)
            worst["counting"] = max(
                worst["counting"],
                polys.coefficient_distance(lhs, (2.0 * k[j] + 1.0) * q) / scale,
            )
    report = {
        name: {"residual": val, "tolerance": args.tol, "pass": bool(val <= args.tol)}
        for name, val in worst.items()
    }
    ok = all(entry["pass"] for entry in report.values())
    _emit(report, args.out)
    return 0 if ok else 1


# -- packet ----------------------------------------------------------------------

def cmd_packet(args):
    zf = _load_frame(args.Z)
    yf = _load_frame(args.Y) if args.Y else None
    k = _index(args.k, zf.dim, "--k")
    spec = wp.wave_packet(zf, k, args.eps, yf=yf)
    lo, hi = args.box
    if not lo < hi:
        raise UsageError("--box needs LO < HI")
    d = zf.dim
    job = wp.GridJob([lo] * d, [hi] * d, [args.points] * d)
    job = wp.grid_eval(spec, job)
    stream = _out_stream(args.out)
    try:
        wp.write_grid_csv(job, stream)
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


# -- wigner ----------------------------------------------------------------------

def cmd_wigner(args):
    zf = _load_frame(args.Z)
    yf = _load_frame(args.Y) if args.Y else None
    k = _index(args.k, zf.dim, "--k")
    l = _index(args.l, zf.dim, "--l")
    spec = ps.wigner_spec(zf, k, l, args.eps, yf=yf)
    lo, hi = args.box
    if not lo < hi:
        raise UsageError("--box needs LO < HI")
    n = 2 * zf.dim
    points = args.points if args.points else (41 if zf.dim == 1 else 21)
    job = wp.GridJob([lo] * n, [hi] * n, [points] * n)
    job = ps.wigner_grid(spec, job)
    stream = _out_stream(args.out)
    try:
        wp.write_grid_csv(job, stream, var_names=ps.phase_space_names(zf.dim))
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


# -- verify ----------------------------------------------------------------------

def cmd_verify(args):
    results = verification.run_scope(args.scope, seed=args.seed)
    _emit(verification.report(results), args.out)
    return 0 if all(r.passed for r in results) else 1


# -- parser ----------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="hagedorn",
        description="Hagedorn wave packets, matrix Hermite polynomials, Wigner transforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="residual report for a frame")
    p.add_argument("--fixture", required=True,
                   help="frame fixture name (Z1, Z2, Z3) or JSON file with Q and P")
    p.add_argument("--tol", type=float, default=TOL_FRAME, help="residual tolerance")
    p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("poly", help="export or cross-check a polynomial table")
    p.add_argument("--fixture", required=True,
                   help="matrix fixture name (M1, M2, M3) or JSON file")
    p.add_argument("--k", nargs="+", type=int, required=True, help="maximal index per axis")
    p.add_argument("--check", action="store_true",
                   help="run all oracle routes on this matrix instead of exporting")
    p.add_argument("--tol", type=float, default=ORACLE_TOL,
                   help="oracle tolerance for --check")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("packet", help="wave packet values on a position grid (CSV)")
    p.add_argument("--Z", required=True, help="frame fixture name or JSON file")
    p.add_argument("--Y", default=None, help="second frame for generalised packets")
    p.add_argument("--k", nargs="+", type=int, required=True, help="excitation multi-index")
    p.add_argument("--eps", type=float, default=0.1, help="semiclassical parameter")
    p.add_argument("--box", nargs=2, type=float, default=[-2.0, 2.0],
                   metavar=("LO", "HI"), help="grid bounds, every axis")
    p.add_argument("--points", type=int, default=201, help="grid points per axis")
    p.add_argument("--out", default=None, help="output CSV file (default stdout)")
    p.set_defaults(func=cmd_packet)

    p = sub.add_parser("wigner", help="Wigner transform on a phase-space grid (CSV)")
    p.add_argument("--Z", required=True, help="frame fixture name or JSON file")
    p.add_argument("--Y", default=None, help="second frame for generalised packets")
    p.add_argument("--k", nargs="+", type=int, required=True, help="left excitation multi-index")
    p.add_argument("--l", nargs="+", type=int, required=True, help="right excitation multi-index")
    p.add_argument("--eps", type=float, default=0.1, help="semiclassical parameter")
    p.add_argument("--box", nargs=2, type=float, default=[-2.0, 2.0],
                   metavar=("LO", "HI"), help="grid bounds, every axis")
    p.add_argument("--points", type=int, default=0,
                   help="grid points per axis (default 41 for d=1, 21 for d=2)")
    p.add_argument("--out", default=None, help="output CSV file (default stdout)")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("verify", help="run a property suite, print a JSON report")
    p.add_argument("scope", choices=["frames", "polys", "packets", "wigner", "all"])
    p.add_argument("--seed", type=int, default=verification.DEFAULT_SEED,
                   help="seed for the random sweeps")
    p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hagedorn: {exc}", file=sys.stderr)
        return 2
    except HagedornError as exc:
        print(f"hagedorn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
