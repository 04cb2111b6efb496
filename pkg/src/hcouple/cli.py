"""Command-line front end.

Reads couple and measure files (UTF-8 JSON), runs the library
computations, and writes certificates, CSV curves, and reports.  All
randomness is seeded (default 0) and outputs are byte-identical for
identical inputs and seeds.

Exit codes: 0 success, 1 malformed input, 2 precondition failure
(domination or construction), 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .calderon import (
    ConstructionError,
    ContractionCertificate,
    DominationError,
    check_domination,
    construct_calderon_map,
    loewner_maps,
    verify_certificate,
)
from .couple import J_functional, K_functional, WeightVector
from .methods import (
    ComplexMethodConfig,
    complex_method_norm,
    h_from_j_measure,
    k_method_norm,
    kj_bijection_check,
    reiterate,
)
from .pick import (
    ExtendedMeasure,
    PickFunctionRep,
    exact_interp_randomized_test,
    fit_pick_measure,
    matrix_concavity_test,
    matrix_monotone_test,
)

FLOAT_FMT = ".17g"


def _format_value(obj) -> str:
    """Serialize to JSON with floats at 17 significant digits."""
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), FLOAT_FMT)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_format_value(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, np.ndarray):
        return _format_value(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dump_json(obj, path=None) -> str:
    text = _format_value(obj) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


class InputError(ValueError):
    pass


def load_couple(path):
    """Couple file: {"weights": [...], "vectors": {name: [...]}}.

    Vector entries are real numbers or [re, im] pairs.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read couple file {path}: {exc}") from exc
    try:
        weights = np.asarray(data["weights"], dtype=float)
        vectors = {}
        for name, arr in data.get("vectors", {}).items():
            out = np.empty(len(arr), dtype=complex)
            for i, entry in enumerate(arr):
                if isinstance(entry, (list, tuple)):
                    out[i] = complex(entry[0], entry[1])
                else:
                    out[i] = complex(entry)
            if out.size != weights.size:
                raise InputError(f"vector {name!r} length does not match weights")
            vectors[name] = out
        WeightVector(weights)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed couple file {path}: {exc}") from exc
    return weights, vectors


def load_measure(path) -> ExtendedMeasure:
    """Measure file: mass_at_zero/mass_at_inf, atoms, optional density."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read measure file {path}: {exc}") from exc
    try:
        atoms = [[a["t"], a["mass"]] for a in data.get("atoms", [])]
        density = None
        if data.get("density") is not None:
            d = data["density"]
            density = (d["type"], float(d["theta"]))
        return ExtendedMeasure(
            mass_at_zero=float(data.get("mass_at_zero", 0.0)),
            mass_at_inf=float(data.get("mass_at_inf", 0.0)),
            atoms=np.asarray(atoms, dtype=float).reshape(-1, 2),
            density=density,
            quad_nodes=int(data.get("quad_nodes", 256)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed measure file {path}: {exc}") from exc


def _get_vector(vectors, name):
    if name not in vectors:
        raise InputError(f"couple file has no vector named {name!r}")
    return vectors[name]


def _parse_ts(text: str) -> np.ndarray:
    try:
        ts = np.asarray([float(v) for v in text.split(",")], dtype=float)
    except ValueError as exc:
        raise InputError(f"bad t list {text!r}") from exc
    if np.any(ts <= 0):
        raise InputError("t values must be positive")
    return ts


def cmd_kfun(args):
    weights, vectors = load_couple(args.couple)
    x = _get_vector(vectors, args.x)
    ts = _parse_ts(args.t)
    vals = [K_functional(t, x, weights) for t in ts]
    for t, v in zip(ts, vals):
        print(format(v, FLOAT_FMT))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("t,K\n")
            for t, v in zip(ts, vals):
                fh.write(f"{t:.17e},{format(v, FLOAT_FMT)}\n")
    return 0


def cmd_jfun(args):
    weights, vectors = load_couple(args.couple)
    x = _get_vector(vectors, args.x)
    ts = _parse_ts(args.t)
    vals = [J_functional(t, x, weights) for t in ts]
    for t, v in zip(ts, vals):
        print(format(v, FLOAT_FMT))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("t,J\n")
            for t, v in zip(ts, vals):
                fh.write(f"{t:.17e},{format(v, FLOAT_FMT)}\n")
    return 0


def cmd_construct(args):
    weights, vectors = load_couple(args.couple)
    x = _get_vector(vectors, args.x)
    y = _get_vector(vectors, args.y)
    cert = construct_calderon_map(x, y, weights, rho=args.rho, seed=args.seed)
    if cert.map_residual > args.tol_residual:
        print(f"construction residual {cert.map_residual:.3e} exceeds "
              f"{args.tol_residual:.1e}", file=sys.stderr)
        return 3
    dump_json(cert.to_dict(), args.out)
    print(f"certificate written to {args.out}: n={cert.n} m={cert.m} "
          f"rho={format(cert.rho, FLOAT_FMT)} norm0={format(cert.norm0, FLOAT_FMT)} "
          f"norm1={format(cert.norm1, FLOAT_FMT)} "
          f"residual={format(cert.map_residual, FLOAT_FMT)} "
          f"margin={format(cert.domination_margin, FLOAT_FMT)}")
    return 0


def cmd_verify(args):
    try:
        with open(args.cert, encoding="utf-8") as fh:
            cert = ContractionCertificate.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read certificate {args.cert}: {exc}") from exc
    weights, vectors = load_couple(args.couple)
    x = _get_vector(vectors, args.x)
    y = _get_vector(vectors, args.y)
    report = verify_certificate(cert, x, y, weights, trials=args.trials, seed=args.seed,
                                tol_residual=args.tol_residual, tol_norm=args.tol_norm,
                                tol_domination=args.tol_domination)
    out = {
        "passed": report["passed"],
        "map_residual": report["map_residual"],
        "norm0": report["norm0"],
        "norm1": report["norm1"],
        "rho": report["rho"],
        "domination_margin": report["domination_margin"],
    }
    if "sharpness" in report:
        out["sharpness"] = report["sharpness"]
    if not report["passed"]:
        witnesses = []
        for name, value, bound in report["violations"]:
            witnesses.append({"check": name, "value": value, "bound": bound})
        wit = report.get("witness")
        if wit is not None:
            t_w, x_w = wit
            out["witness"] = {
                "t": t_w,
                "x": [[float(z.real), float(z.imag)] for z in x_w],
            }
        out["violations"] = witnesses
        print(dump_json(out), end="")
        return 3
    print(dump_json(out), end="")
    return 0


def cmd_loewner(args):
    weights, _ = load_couple(args.couple)
    q = [float(v) for v in args.q.split(",")]
    x0, y0, T = loewner_maps(args.case, q, weights)
    out = {
        "case": args.case,
        "x0": x0.tolist(),
        "y0": y0.tolist(),
        "T": T.tolist(),
        "domination_worst_ratio": check_domination(x0 + 0j, y0 + 0j, weights),
    }
    text = dump_json(out, args.out)
    if args.out is None:
        print(text, end="")
    return 0


def cmd_pickfit(args):
    try:
        with open(args.points, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read points file {args.points}: {exc}") from exc
    pts = data["points"] if isinstance(data, dict) else data
    result = fit_pick_measure(pts, rtol=args.tol_fit)
    if not result.feasible:
        print(f"infeasible residual={format(result.residual, FLOAT_FMT)}")
        return 3
    mu = result.rep.measure
    out = {
        "mass_at_zero": mu.mass_at_zero,
        "mass_at_inf": mu.mass_at_inf,
        "atoms": [{"t": t, "mass": m} for t, m in mu.atoms],
        "residual": result.residual,
    }
    print(dump_json(out), end="")
    return 0


def cmd_picktest(args):
    if args.points:
        try:
            with open(args.points, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read points file {args.points}: {exc}") from exc
        pts = data["points"] if isinstance(data, dict) else data
        fit = fit_pick_measure(pts)
        if not fit.feasible:
            print(f"fit infeasible residual={format(fit.residual, FLOAT_FMT)}")
            return 3
        h = fit.rep
        label = f"fit of {args.points}"
    else:
        theta = args.power
        if theta is None:
            raise InputError("picktest needs --points or --power")
        if not 0 < theta <= 1:
            raise InputError("--power must lie in (0, 1]")

        def h(lam, _t=theta):
            return np.asarray(lam, dtype=float) ** _t

        label = f"power {theta}"
    lam = np.geomspace(0.5, 8.0, args.n)
    ok_i, _ = exact_interp_randomized_test(h, lam, trials=args.trials, seed=args.seed)
    ok_m, _ = matrix_monotone_test(h, n=args.n, trials=args.trials, seed=args.seed)
    ok_c, _ = matrix_concavity_test(h, n=args.n, trials=args.trials, seed=args.seed)
    print(f"{label}: exact-interpolation {'pass' if ok_i else 'FAIL'}, "
          f"monotonicity {'pass' if ok_m else 'FAIL'}, "
          f"concavity {'pass' if ok_c else 'FAIL'} "
          f"({args.trials} trials, n={args.n}, seed={args.seed})")
    return 0 if (ok_i and ok_m and ok_c) else 3


def cmd_norm(args):
    weights, vectors = load_couple(args.couple)
    x = _get_vector(vectors, args.x)
    measure = load_measure(args.measure)
    print(format(k_method_norm(measure, weights, x), FLOAT_FMT))
    return 0


def cmd_reiterate(args):
    weights, vectors = load_couple(args.couple)
    x = _get_vector(vectors, args.x)
    h = PickFunctionRep(load_measure(args.h))
    h0 = PickFunctionRep(load_measure(args.h0))
    h1 = PickFunctionRep(load_measure(args.h1))
    phi, check = reiterate(h, h0, h1)
    direct, derived, gap = check(weights, x)
    print(dump_json({"direct": direct, "derived": derived, "gap": gap}), end="")
    return 0 if gap <= args.tol_reiterate else 3


def cmd_kjcheck(args):
    rho = load_measure(args.rho)
    nu = load_measure(args.nu)
    gap = kj_bijection_check(rho, nu)
    print(format(gap, FLOAT_FMT))
    return 0 if gap <= args.tol_bijection else 3


def cmd_complex(args):
    cfg = ComplexMethodConfig(args.theta, args.degree)
    h = complex_method_norm(args.lam, cfg)
    print(f"h_N={format(h, FLOAT_FMT)} power={format(args.lam ** args.theta, FLOAT_FMT)}")
    return 0


def cmd_report(args):
    try:
        with open(args.cert, encoding="utf-8") as fh:
            cert = ContractionCertificate.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read certificate {args.cert}: {exc}") from exc
    print(f"certificate: {cert.n}-dimensional map, splitting m={cert.m} "
          f"({len(cert.complex_pairs)} complex pairs)")
    print(f"  rho                {format(cert.rho, FLOAT_FMT)}")
    print(f"  norm0              {format(cert.norm0, FLOAT_FMT)} (bound {format(cert.M0, FLOAT_FMT)})")
    bound1 = cert.M1 / np.sqrt(cert.rho)
    print(f"  norm1              {format(cert.norm1, FLOAT_FMT)} (bound {format(bound1, FLOAT_FMT)})")
    print(f"  map residual       {format(cert.map_residual, FLOAT_FMT)}")
    print(f"  domination margin  {format(cert.domination_margin, FLOAT_FMT)}")
    if cert.m < cert.n:
        print(f"  sharpness          complex-assembly norms "
              f"{format(cert.sharp_norm0, FLOAT_FMT)}, {format(cert.sharp_norm1, FLOAT_FMT)}")
    if cert.perturbation_scale:
        print(f"  perturbation       {format(cert.perturbation_scale, FLOAT_FMT)}")
    if cert.nudged_coordinates:
        print(f"  nudged coordinates {cert.nudged_coordinates}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hcouple",
                                     description="weighted Hilbert couple computations")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tols(p):
        p.add_argument("--tol-residual", type=float, default=1e-8)
        p.add_argument("--tol-norm", type=float, default=1e-9)
        p.add_argument("--tol-domination", type=float, default=1e-9)

    p = sub.add_parser("kfun", help="K-functional values")
    p.add_argument("--couple", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--t", required=True, help="comma-separated positive t values")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_kfun)

    p = sub.add_parser("jfun", help="J-functional values")
    p.add_argument("--couple", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_jfun)

    p = sub.add_parser("construct", help="build a contraction certificate")
    p.add_argument("--couple", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    add_tols(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--couple", required=True)
    p.add_argument("--x", default="x")
    p.add_argument("--y", default="y")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    add_tols(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("loewner", help="partial-isometry maps from a seed polynomial")
    p.add_argument("--couple", required=True)
    p.add_argument("--case", type=int, choices=(1, 2), required=True)
    p.add_argument("--q", required=True, help="comma-separated coefficients, lowest first")
    p.add_argument("--out")
    p.set_defaults(func=cmd_loewner)

    p = sub.add_parser("pickfit", help="fit a representing measure to samples")
    p.add_argument("--points", required=True)
    p.add_argument("--tol-fit", type=float, default=1e-6)
    p.set_defaults(func=cmd_pickfit)

    p = sub.add_parser("picktest", help="randomized matrix-order property tests")
    p.add_argument("--points")
    p.add_argument("--power", type=float, help="test lam^theta instead of a fit")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_picktest)

    p = sub.add_parser("norm", help="K-method norm of a vector")
    p.add_argument("--measure", required=True)
    p.add_argument("--couple", required=True)
    p.add_argument("--x", required=True)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("reiterate", help="two-path reiteration check")
    p.add_argument("--h", required=True)
    p.add_argument("--h0", required=True)
    p.add_argument("--h1", required=True)
    p.add_argument("--couple", required=True)
    p.add_argument("--x", default="x")
    p.add_argument("--tol-reiterate", type=float, default=1e-7)
    p.set_defaults(func=cmd_reiterate)

    p = sub.add_parser("kjcheck", help="K-form versus J-form measure correspondence")
    p.add_argument("--rho", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--tol-bijection", type=float, default=1e-6)
    p.set_defaults(func=cmd_kjcheck)

    p = sub.add_parser("complex", help="complex-method value for a scalar weight")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--degree", type=int, default=12)
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("report", help="human-readable certificate summary")
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DominationError, ConstructionError) as exc:
        print(f"precondition failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
