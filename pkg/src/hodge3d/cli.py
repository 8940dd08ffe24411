"""Command-line front end.

Exit codes: 0 success, 1 I/O or precondition error, 2 contract violation
(``--strict`` decay/diagnostic failures and failed verifications).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import analytic, ops
from .bounded import ConvergenceError, boundary_trace, solve_dirichlet
from .decompose import decompose
from .fieldio import FieldFormatError, export_vtk, read_field, write_field
from .grid import DecayError, GridError, VectorField, make_centered_grid, same_grid, sample
from .poisson import PoissonBackend, set_workers
from .reconstruct import reconstruct_alternative, reconstruct_from_curl_div

log = logging.getLogger("hodge3d")

EXIT_OK, EXIT_ERROR, EXIT_CONTRACT = 0, 1, 2


class ContractViolation(Exception):
    pass


def _backend(value):
    try:
        return PoissonBackend.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sidecar(args, default_stem):
    return args.json_diagnostics or f"{default_stem}.json"


def _read(path, kind):
    fld = read_field(path)
    if fld.kind != kind:
        raise GridError(f"{path}: expected a {kind} field, got {fld.kind}")
    return fld


def _data_residuals(A, a, f):
    return {
        "curl_residual_inf": ops.interior_sup((ops.curl(A) - a).values, A.grid),
        "div_residual_inf": ops.interior_sup((ops.div(A) - f).values, A.grid),
    }


def cmd_gen(args):
    fld = analytic.by_name(args.field)
    fn, decay = fld.part(args.part)
    grid = make_centered_grid(args.n, args.L)
    kind = "scalar" if args.part == "div" else "vector"
    out = sample(grid, fn, kind=kind, decay=None if args.no_decay_tag else decay)
    write_field(out, args.output)
    print(f"wrote {args.field} {args.part} (n={args.n}, L={args.L}) to {args.output}")
    return EXIT_OK


def cmd_reconstruct(args):
    a = _read(args.curl, "vector")
    f = _read(args.div, "scalar")
    same_grid(a.grid, f.grid)
    route = reconstruct_alternative if args.alternative else reconstruct_from_curl_div
    A = route(a, f, args.backend, allow_slow_decay=args.allow_slow_decay)
    write_field(A, args.output)
    diag = {"backend": args.backend.value,
            "formula": "curl-of-potential" if args.alternative else "potential-of-derivatives",
            **_data_residuals(A, a, f)}
    _write_json(_sidecar(args, args.output), diag)
    print(json.dumps(diag, sort_keys=True))
    return EXIT_OK


def cmd_decompose(args):
    A = _read(args.input, "vector")
    paths = args.output.split(",")
    if len(paths) != 2:
        raise ValueError("-o expects two comma-separated paths: u.fld,B.fld")
    res = decompose(A, args.backend, strict=args.strict, allow_slow_decay=args.allow_slow_decay)
    write_field(res.u, paths[0])
    write_field(res.B, paths[1])
    diag = res.diagnostics.as_dict()
    _write_json(_sidecar(args, paths[0]), diag)
    print(json.dumps(diag, sort_keys=True))
    bad = res.diagnostics.violations()
    if args.strict and bad:
        raise ContractViolation(f"diagnostics over strict limits: {bad}")
    return EXIT_OK


def cmd_bounded(args):
    a = _read(args.curl, "vector")
    f = _read(args.div, "scalar")
    phi = boundary_trace(_read(args.trace, "vector"))
    grid = same_grid(a.grid, f.grid, phi.grid)
    rhs = (ops.curl(a) - ops.grad(f)).values
    values, stats = solve_dirichlet(rhs, phi, args.tol)
    A = VectorField(grid, values)
    write_field(A, args.output)
    diag = {"tol": args.tol,
            "relative_residual": [s[0] for s in stats],
            "iterations": [s[1] for s in stats],
            **_data_residuals(A, a, f)}
    _write_json(_sidecar(args, args.output), diag)
    print(json.dumps(diag, sort_keys=True))
    return EXIT_OK


def cmd_verify_decay(args):
    integral = analytic.i1_integral(args.gamma, args.rho)
    bound = analytic.i1_bound(args.gamma, args.rho)
    ok = integral <= bound
    print(f"I1 integral = {integral:.10g}")
    print(f"I1 bound    = {bound:.10g}")
    print("PASS" if ok else "FAIL")
    if args.json_diagnostics:
        _write_json(args.json_diagnostics, {"gamma": args.gamma, "rho": args.rho,
                                            "integral": integral, "bound": bound, "pass": ok})
    return EXIT_OK if ok else EXIT_CONTRACT


def identity_errors(n, count, seed, L=2.0):
    """Worst scaled interior residuals of curl(grad u) and div(curl A)."""
    rng = np.random.default_rng(seed)
    grid = make_centered_grid(n, L)
    worst_cg = worst_dc = 0.0
    for _ in range(count):
        u = sample(grid, analytic.random_smooth_scalar(rng), kind="scalar")
        A = sample(grid, analytic.random_smooth_vector(rng), kind="vector")
        cg = ops.interior_sup(ops.curl(ops.grad(u)).values, grid) / (u.norm_inf() / grid.h**2)
        dc = ops.interior_sup(ops.div(ops.curl(A)).values, grid) / (A.norm_inf() / grid.h**2)
        worst_cg, worst_dc = max(worst_cg, cg), max(worst_dc, dc)
    return worst_cg, worst_dc


def cmd_verify_identities(args):
    cg, dc = identity_errors(args.n, args.count, args.seed)
    ok = cg <= 1e-12 and dc <= 1e-12
    print(f"curl(grad u) scaled interior max = {cg:.3e}")
    print(f"div(curl A)  scaled interior max = {dc:.3e}")
    print("PASS" if ok else "FAIL")
    if args.json_diagnostics:
        _write_json(args.json_diagnostics, {"curl_grad": cg, "div_curl": dc, "pass": ok})
    return EXIT_OK if ok else EXIT_CONTRACT


def roundtrip_errors(field, n, L, backend="fft-conv", allow_slow_decay=False):
    grid = make_centered_grid(n, L)
    A = sample(grid, field.field, kind="vector", decay=field.decay)
    a = sample(grid, field.curl, kind="vector", decay=field.curl_decay)
    f = sample(grid, field.div, kind="scalar", decay=field.div_decay)
    ref = ops.norm_l2(A)
    direct = reconstruct_from_curl_div(a, f, backend, allow_slow_decay)
    alt = reconstruct_alternative(a, f, backend, allow_slow_decay)
    return {
        "rel_l2_error": ops.norm_l2(direct - A) / ref,
        "rel_l2_error_alternative": ops.norm_l2(alt - A) / ref,
        "rel_l2_formula_gap": ops.norm_l2(direct - alt) / ref,
    }


def cmd_verify_roundtrip(args):
    field = analytic.by_name(args.field)
    errs = roundtrip_errors(field, args.n, args.L, args.backend, args.allow_slow_decay)
    for k, v in errs.items():
        print(f"{k} = {v:.6g}")
    if args.json_diagnostics:
        _write_json(args.json_diagnostics, {"field": args.field, "n": args.n, "L": args.L, **errs})
    if args.max_error is not None and not errs["rel_l2_error"] <= args.max_error:
        print("FAIL")
        return EXIT_CONTRACT
    return EXIT_OK


def cmd_export_vtk(args):
    export_vtk(read_field(args.input), args.output)
    print(f"wrote {args.output}")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", type=_backend, default=PoissonBackend.FFT_CONV,
                        help="Newtonian potential backend: direct | fft-conv (default)")
    common.add_argument("--strict", action="store_true",
                        help="require gamma > 3 and enforce diagnostic limits (exit 2 on violation)")
    common.add_argument("--allow-slow-decay", action="store_true",
                        help="waive the decay hypothesis checks")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None, help="cap FFT worker threads")
    common.add_argument("--json-diagnostics", metavar="PATH", default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hodge3d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="sample a corpus field to a file")
    p.add_argument("field", choices=[f.name for f in analytic.corpus()])
    p.add_argument("--part", choices=["field", "curl", "div"], default="field")
    p.add_argument("--n", type=int, default=33)
    p.add_argument("--L", type=float, default=6.0)
    p.add_argument("--no-decay-tag", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reconstruct", parents=[common], help="recover A from curl and divergence")
    p.add_argument("--curl", required=True)
    p.add_argument("--div", required=True)
    p.add_argument("--alternative", action="store_true",
                   help="differentiate the potentials instead of the data")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("decompose", parents=[common], help="split A = grad u + B")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="u.fld,B.fld")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bounded", parents=[common], help="box Dirichlet reconstruction")
    p.add_argument("--curl", required=True)
    p.add_argument("--div", required=True)
    p.add_argument("--trace", required=True, help="vector field whose boundary shell is the trace")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_bounded)

    p = sub.add_parser("verify", help="numerical checks")
    vsub = p.add_subparsers(dest="check", required=True)
    q = vsub.add_parser("decay", parents=[common], help="I1 integral against its closed-form bound")
    q.add_argument("--gamma", type=float, required=True)
    q.add_argument("--rho", type=float, required=True)
    q.set_defaults(func=cmd_verify_decay)
    q = vsub.add_parser("identities", parents=[common], help="curl grad = 0 and div curl = 0")
    q.add_argument("--n", type=int, default=33)
    q.add_argument("--count", type=int, default=20)
    q.set_defaults(func=cmd_verify_identities)
    q = vsub.add_parser("roundtrip", parents=[common], help="reconstruct a corpus field")
    q.add_argument("--field", choices=[f.name for f in analytic.corpus()], default="mixed")
    q.add_argument("--n", type=int, default=33)
    q.add_argument("--L", type=float, default=6.0)
    q.add_argument("--max-error", type=float, default=None)
    q.set_defaults(func=cmd_verify_roundtrip)

    p = sub.add_parser("export-vtk", parents=[common], help="write a legacy VTK file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_export_vtk)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse usage errors (unknown backend etc.) are precondition errors
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    set_workers(getattr(args, "threads", None))
    try:
        return args.func(args)
    except DecayError as exc:
        print(f"error: decay violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT if getattr(args, "strict", False) else EXIT_ERROR
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (FieldFormatError, GridError, ConvergenceError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
