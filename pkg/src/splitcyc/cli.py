"""Command line entry point ``splitcyc``."""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import __version__


def _cmd_verify(args) -> int:
    from .harness import report_json, run_suite
    from .scenarios import ScenarioError, load_scenarios

    try:
        scenarios = load_scenarios(args.scenario)
    except ScenarioError as exc:
        print(f"scenario rejected: {exc}", file=sys.stderr)
        return 2
    reports = run_suite(scenarios, jobs=args.jobs, cache_root=args.cache_dir, use_cache=not args.no_cache)
    ok = True
    for rep in reports:
        name = rep["scenario"]["name"]
        for c in rep["checks"]:
            tag = " (cached)" if c.get("cached") else ""
            print(f"{name:24s} {c['name']:18s} {c['status'].upper():13s} {c['runtime_s']:8.2f}s{tag}")
        ok &= rep["status"] == "pass"
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report_json(reports))
            fh.write("\n")
    print("ALL CHECKS PASSED" if ok else "SOME CHECKS DID NOT PASS")
    return 0 if ok else 1


def _cmd_lp(args) -> int:
    from .characters import quadratic_character
    from .checks import interpolation_points

    chi = quadratic_character(args.disc)
    if chi.value_int(args.p) != 1:
        print(f"warning: chi({args.p}) != 1", file=sys.stderr)
    out = {}
    if args.method in ("log", "both"):
        from .lfunction import lp_at_one_log

        r = lp_at_one_log(chi, args.p, args.prec)
        out["log"] = {"residue": str(r.residue()), "precision": r.precision, "valuation": str(r.valuation)}
    if args.method in ("interp", "both"):
        from .lfunction import lp_at_one_interpolate

        J = args.points or interpolation_points(args.p, args.prec)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            r = lp_at_one_interpolate(chi, args.p, args.prec, J)
        out["interp"] = {"residue": str(r.residue()), "precision": r.precision,
                         "valuation": str(r.valuation), "points": J}
    out.update({"D": args.disc, "p": args.p})
    print(json.dumps(out, indent=1))
    if args.method == "both":
        k = min(out["log"]["precision"], out["interp"]["precision"])
        return 0 if (int(out["log"]["residue"]) - int(out["interp"]["residue"])) % args.p**k == 0 else 1
    return 0


def _cmd_classgroup(args) -> int:
    from .quadratic_field import RealQuadraticField, class_group, fundamental_unit

    cg = class_group(args.disc)
    F = RealQuadraticField.from_discriminant(args.disc)
    eps = fundamental_unit(F.d)
    print(json.dumps({
        "D": args.disc, "h": cg.h, "narrow_h": cg.narrow_h, "structure": str(cg.structure),
        "elementary_divisors": list(cg.divisors), "generators": [list(g) for g in cg.generators],
        "fundamental_unit": f"{eps.a} + {eps.b}*sqrt({F.d})", "unit_norm": cg.unit_norm,
    }, indent=1))
    return 0


def _cmd_lambda_order(args) -> int:
    from .iwasawa import IwasawaPoly, bn_model_cohomology

    coeffs = tuple(int(c) for c in args.f.split(","))
    f = IwasawaPoly(args.p, args.prec, max(len(coeffs), args.p**args.n) + 1, coeffs)
    G = bn_model_cohomology(f, args.n, args.m, args.q)
    print(json.dumps({"structure": str(G), "divisors": list(G.divisors), "order": G.order}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="splitcyc", description="cyclotomic unit and class group verification")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run scenario checks")
    v.add_argument("--scenario", help="scenario file or directory (default: shipped suite)")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--no-cache", action="store_true")
    v.add_argument("--cache-dir", default=None)
    v.add_argument("--report", help="write JSON report here")
    v.set_defaults(func=_cmd_verify)

    lp = sub.add_parser("lp", help="L_p(1, chi_D)")
    lp.add_argument("--disc", type=int, required=True)
    lp.add_argument("--p", type=int, required=True)
    lp.add_argument("--prec", type=int, default=10)
    lp.add_argument("--method", choices=("log", "interp", "both"), default="both")
    lp.add_argument("--points", type=int, default=None)
    lp.set_defaults(func=_cmd_lp)

    cg = sub.add_parser("classgroup", help="class group of Q(sqrt D)")
    cg.add_argument("--disc", type=int, required=True)
    cg.set_defaults(func=_cmd_classgroup)

    lo = sub.add_parser("lambda-order", help="Tate cohomology of Lambda/(f, omega_n/T)")
    lo.add_argument("--f", required=True, help="comma separated coefficients c0,c1,... (write --f=-9,1 when c0 is negative)")
    lo.add_argument("--n", type=int, required=True)
    lo.add_argument("--m", type=int, default=0)
    lo.add_argument("--q", type=int, default=0)
    lo.add_argument("--p", type=int, default=3)
    lo.add_argument("--prec", type=int, default=12)
    lo.set_defaults(func=_cmd_lambda_order)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
