"""Command-line front end.

Subcommands: construct (shooting pipeline to a profile file), verify
(residual + identity suites on a profile file), asymptotics (predicted vs
fitted exponents), phase-portrait (CSV field samples + nullclines) and
classify (cylinders | families).  Exit codes: 0 success, 1 check failure,
2 regime/parameter rejection, 3 convergence failure.  Identical
invocations produce byte-identical files: floats are emitted as decimal
strings with 17 significant digits and key order is fixed.  RSL_LOG
(error | info | debug) controls diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import asymptotics, exact_solutions, potential_theory, shooting, warped_geometry
from .errors import (
    NotConverged,
    OutOfRegime,
    SchoutenSingular,
    SolitonLabError,
)
from .phase_system import (
    PhaseState,
    SolitonParams,
    nullcline_h,
    nullcline_k,
    vector_field,
)
from .profile import fmt17, profile_from_json, profile_to_json

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_REJECTED = 2
EXIT_NOT_CONVERGED = 3

log = logging.getLogger("rho_soliton_lab")


def _setup_logging():
    level = os.environ.get("RSL_LOG", "error").lower()
    mapping = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=mapping.get(level, logging.ERROR),
                        format="rsl %(levelname)s: %(message)s")


def _apply_config(args: argparse.Namespace):
    """Fill unset flags from a JSON config file; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    with open(args.config) as fh:
        cfg = json.load(fh)
    sub = args._subparser
    defaults = {a.dest: sub.get_default(a.dest) for a in sub._actions}
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest in defaults and getattr(args, dest) == defaults[dest]:
            setattr(args, dest, value)
    return args


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    p = SolitonParams(n=args.n, rho=args.rho)
    try:
        shooting.regime_of(p)
    except OutOfRegime as exc:
        _emit(_json_dumps({"error": str(exc), "reason": "nonexistence_regime"}), None)
        return EXIT_REJECTED
    ladder = tuple(float(e) for e in args.eps_ladder.split(","))
    try:
        prof = shooting.construct_soliton(
            p, epsilons=ladder, span=args.span, t_span=args.t_span,
            n_samples=args.samples, normalize=args.normalize, jobs=args.jobs,
        )
    except NotConverged as exc:
        _emit(_json_dumps({"error": str(exc), "reason": "not_converged"}), None)
        return EXIT_NOT_CONVERGED
    text = profile_to_json(prof)
    _emit(text, args.output)
    log.info("profile written (%d samples)", len(prof))
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.profile) as fh:
        prof = profile_from_json(fh.read())
    res = warped_geometry.soliton_residual(prof)
    ident = warped_geometry.identity_checks(prof)
    level = warped_geometry.level_set_geometry(prof)
    rect = potential_theory.rectifiability_witness(prof)
    checks = {
        "residual_sup_rel": res.sup_rel,
        "residual_sup_abs": res.sup_abs,
        "identity_1_sup": ident.sup_e1,
        "identity_2_sup": ident.sup_e2,
        "identity_3_sup": ident.sup_e3,
        "gauss_riccati_sup_rel": level.gauss_deviation,
        "rectifiability_eq2_sup": rect.eq2_sup,
        "rectifiability_chain_sup": rect.gradient_chain_sup,
    }
    gated = {k: checks[k] for k in
             ("residual_sup_rel", "identity_1_sup", "identity_2_sup",
              "identity_3_sup", "gauss_riccati_sup_rel")}
    worst = max(gated, key=lambda k: gated[k])
    doc = {
        "tolerance": fmt17(args.tol),
        "checks": {k: fmt17(v) for k, v in checks.items()},
        "worst": worst,
        "passed": bool(all(v < args.tol for v in gated.values())),
    }
    _emit(_json_dumps(doc), args.output)
    return EXIT_OK if doc["passed"] else EXIT_CHECK_FAILED


def cmd_asymptotics(args) -> int:
    with open(args.profile) as fh:
        prof = profile_from_json(fh.read())
    try:
        rows = asymptotics.fit_report(prof, tail_fraction=args.tail_fraction)
        sensitivity = {
            frac: asymptotics.fit_report(prof, tail_fraction=frac)
            for frac in (0.15, 0.35)
        }
    except OutOfRegime as exc:
        _emit(_json_dumps({"error": str(exc), "reason": "out_of_regime"}), None)
        return EXIT_REJECTED
    lines = [f"{'quantity':<24}{'predicted':>12}{'fitted':>12}{'stderr':>11}"
             f"{'tol':>8}  result"]
    ok = True
    for row in rows:
        ok &= row.passed
        lines.append(
            f"{row.quantity:<24}{row.predicted:>12.5f}{row.fitted:>12.5f}"
            f"{row.stderr:>11.2e}{row.tolerance:>8.2f}  "
            f"{'pass' if row.passed else 'FAIL'}"
        )
    for frac, srows in sorted(sensitivity.items()):
        for row in srows:
            lines.append(f"  [tail {frac:.2f}] {row.quantity:<22}"
                         f"fitted {row.fitted:.5f}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_phase_portrait(args) -> int:
    p = SolitonParams(n=args.n, rho=args.rho, lam=args.lam, kappa=args.kappa)
    try:
        p.require_not_schouten()
    except SchoutenSingular as exc:
        sys.stderr.write(f"rsl: {exc}\n")
        return EXIT_REJECTED
    x_lo, x_hi = (float(v) for v in args.x_range.split(":"))
    y_lo, y_hi = (float(v) for v in args.y_range.split(":"))
    xs = np.linspace(x_lo, x_hi, args.grid)
    ys = np.linspace(y_lo, y_hi, args.grid)
    lines = ["kind,x,y,dx,dy"]
    for x in xs:
        for y in ys:
            dx, dy, _ = vector_field(p, PhaseState(x, y, args.omega))
            lines.append(f"field,{fmt17(x)},{fmt17(y)},{fmt17(dx)},{fmt17(dy)}")
    grid_u = np.geomspace(1e-2, max(abs(y_lo), abs(y_hi), 1.0), args.grid)
    if p.rho < 1.0 / p.m:
        for u in grid_u:
            lines.append(f"nullcline_h,{fmt17(nullcline_h(p, u))},{fmt17(u)},,")
    if p.rho >= 1.0 / p.m:
        for u in grid_u:
            lines.append(f"nullcline_k,{fmt17(nullcline_k(p, u))},{fmt17(-u)},,")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.what == "cylinders":
        sols = exact_solutions.cylinder_solutions(args.n, args.rho, args.lam)
        doc = [
            {
                "kappa": s.kappa,
                "omega0_sq": fmt17(s.omega0_sq),
                "f_quadratic_coefficient": fmt17(s.f_quad),
                "trivial": s.trivial,
            }
            for s in sols
        ]
    else:
        registry = potential_theory.family_registry(n=args.n)
        doc = []
        for fam in registry:
            f0 = 0.5 * sum(fam.f_window)
            rep = potential_theory.nondegeneracy_check(fam, args.n, f0)
            doc.append({
                "family": fam.family_name,
                "f_probe": fmt17(f0),
                "nd1": fmt17(rep.nd1),
                "nd2": fmt17(rep.nd2),
                "nd3": "nan" if not np.isfinite(rep.nd3) else fmt17(rep.nd3),
                "verdict": rep.verdict,
                "identically_zero": list(rep.identically_zero),
            })
    _emit(_json_dumps(doc), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rsl", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a steady soliton profile by shooting")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--rho", type=float, required=True)
    c.add_argument("--eps-ladder", default="1e-3,1e-4,1e-5,1e-6")
    c.add_argument("--span", type=float, default=shooting.FAMILY_SPAN,
                   help="y- (or z-) extent of the shooting family")
    c.add_argument("--t-span", type=float, default=200.0,
                   help="phase-time extent of the reconstructed profile")
    c.add_argument("--samples", type=int, default=3000)
    c.add_argument("--normalize", action="store_true",
                   help="rescale so the tip scalar curvature is 1")
    c.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    c.add_argument("--output", default=None)
    c.add_argument("--config", default=None)
    c.set_defaults(func=cmd_construct, _subparser=c)

    v = sub.add_parser("verify", help="run residual and identity suites on a profile")
    v.add_argument("--profile", required=True)
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--output", default=None)
    v.add_argument("--config", default=None)
    v.set_defaults(func=cmd_verify, _subparser=v)

    a = sub.add_parser("asymptotics", help="predicted vs fitted growth exponents")
    a.add_argument("--profile", required=True)
    a.add_argument("--tail-fraction", type=float, default=0.25)
    a.add_argument("--output", default=None)
    a.add_argument("--config", default=None)
    a.set_defaults(func=cmd_asymptotics, _subparser=a)

    pp = sub.add_parser("phase-portrait", help="sample the phase field on a grid (CSV)")
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--rho", type=float, required=True)
    pp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    pp.add_argument("--kappa", type=int, default=1)
    pp.add_argument("--omega", type=float, default=1.0,
                    help="omega value entering the lambda terms")
    pp.add_argument("--x-range", default="-1.5:1.5")
    pp.add_argument("--y-range", default="-3:3")
    pp.add_argument("--grid", type=int, default=50)
    pp.add_argument("--output", default=None)
    pp.add_argument("--config", default=None)
    pp.set_defaults(func=cmd_phase_portrait, _subparser=pp)

    cl = sub.add_parser("classify", help="enumerate cylinders or coefficient families")
    cl.add_argument("what", choices=["cylinders", "families"])
    cl.add_argument("--n", type=int, default=3)
    cl.add_argument("--rho", type=float, default=0.25)
    cl.add_argument("--lambda", dest="lam", type=float, default=1.0)
    cl.add_argument("--output", default=None)
    cl.add_argument("--config", default=None)
    cl.set_defaults(func=cmd_classify, _subparser=cl)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config(args)
    try:
        return args.func(args)
    except (OutOfRegime, SchoutenSingular, ValueError) as exc:
        sys.stderr.write(f"rsl: {exc}\n")
        return EXIT_REJECTED
    except NotConverged as exc:
        sys.stderr.write(f"rsl: {exc}\n")
        return EXIT_NOT_CONVERGED
    except SolitonLabError as exc:
        sys.stderr.write(f"rsl: {exc}\n")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
