"""Command-line entry point.

    nscurve verify      symmetry tables, Lie structure, projections
    nscurve thermo      state charts: Lagrangian, tangency, admissibility
    nscurve invariants  invariant tables: annihilation, derivatives, ranks
    nscurve lift        lifting relations; CSV samples of lifted curves
    nscurve all         the full verification matrix

Every subcommand accepts --seed and --report PATH.json; `lift` writes CSV
via --out and all report-producing commands render figures next to their
output when --plot is given.  Exit status is 0 exactly when no check is
refuted or inconclusive.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import report as rp
from . import curvelift


def _fraction(text: str) -> Fraction:
    return Fraction(text).limit_denominator(10 ** 9)


def _common(p: argparse.ArgumentParser, case_filters: bool = True):
    if case_filters:
        p.add_argument("--zeta", choices=("any", "linear", "power"))
        p.add_argument("--h", choices=("any", "const", "linear", "quadratic",
                                       "power", "exp", "log"))
        p.add_argument("--lambda", dest="lam", type=_fraction,
                       help="bind lambda; its sign also selects the parabolic branch")
        p.add_argument("--beta", type=_fraction, help="bind the viscosity exponent")
        p.add_argument("--lambda1", type=_fraction)
        p.add_argument("--lambda2", type=_fraction)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", metavar="PATH.json")
    p.add_argument("--plot", action="store_true",
                   help="render figures next to the report/CSV")
    p.add_argument("--all", action="store_true", help="run every registry cell")


def _bindings(args) -> tuple:
    out = []
    for name, attr in (("beta", "beta"), ("lambda", "lam"),
                       ("lambda1", "lambda1"), ("lambda2", "lambda2")):
        v = getattr(args, attr, None)
        if v is not None:
            out.append((name, v))
    return tuple(out)


def _lam_sign(args):
    if getattr(args, "lam", None) is not None:
        return 1 if args.lam > 0 else -1
    return None


def _finish(report, args, default_fig: str) -> int:
    print(report.to_json() if args.report is None else
          f"{report.summary['pass']} pass, {report.summary['fail']} fail, "
          f"{report.summary['inconclusive']} inconclusive")
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report.to_json())
        print(f"report written to {args.report}")
        if args.plot:
            from . import plots
            fig = os.path.splitext(args.report)[0] + ".png"
            plots.plot_report_summary(report, fig)
            print(f"figure written to {fig}")
    elif args.plot:
        from . import plots
        plots.plot_report_summary(report, default_fig)
        print(f"figure written to {default_fig}")
    return report.exit_code


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="nscurve", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="symmetry tables and Lie structure")
    _common(p)
    p.add_argument("--skip-structure", action="store_true",
                   help="symmetry verdicts only")

    p = sub.add_parser("thermo", help="thermodynamic state charts")
    _common(p)
    p.add_argument("--F", choices=("exp", "poly", "cosh"),
                   help="override the admissibility test function")
    p.add_argument("--chart", metavar="FILE",
                   help="verify a chart from a declarative file instead")
    p.add_argument("--points", type=int, default=50)

    p = sub.add_parser("invariants", help="differential invariant tables")
    _common(p)
    p.add_argument("--pure-order", action="store_true",
                   help="include the pure-order counting checks")

    p = sub.add_parser("lift", help="lifting relations and lifted curves")
    _common(p, case_filters=False)
    p.add_argument("--h", choices=("const", "linear", "quadratic", "power",
                                   "exp", "log"), help="lift shape")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--lambda1", type=float, default=1.0)
    p.add_argument("--lambda2", type=float, default=1.0)
    p.add_argument("--const", type=float, default=0.0)
    p.add_argument("--plane", choices=("circle", "line"), default="circle")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--sign", type=float, default=1.0)
    p.add_argument("--out", metavar="PATH.csv")

    p = sub.add_parser("all", help="the full verification matrix")
    _common(p, case_filters=False)

    args = ap.parse_args(argv)

    if args.command == "verify":
        report = rp.run_verify(zeta=args.zeta, h=args.h, lam_sign=_lam_sign(args),
                               bindings=_bindings(args), seed=args.seed,
                               with_structure=not args.skip_structure)
        if not args.skip_structure:
            report.extend(rp.run_structure_properties(
                zeta=args.zeta, h=args.h, lam_sign=_lam_sign(args), seed=args.seed))
        return _finish(report, args, "verify-summary.png")

    if args.command == "thermo":
        if args.chart:
            return _run_user_chart(args)
        fam = {"exp": "exp", "poly": "cubic", "cosh": "cosh"}.get(args.F)
        report = rp.run_thermo(zeta=args.zeta, h=args.h, f_family=fam,
                               seed=args.seed, n_points=args.points)
        return _finish(report, args, "thermo-summary.png")

    if args.command == "invariants":
        report = rp.run_invariants(zeta=args.zeta, h=args.h, seed=args.seed,
                                   with_pure_order=args.pure_order or args.all)
        return _finish(report, args, "invariants-summary.png")

    if args.command == "lift":
        if args.h is None or args.all:
            report = rp.run_lift(seed=args.seed)
            code = _finish(report, args, "lift-summary.png")
            if args.out:
                _write_lift_csv(args)
            return code
        return _write_lift_csv(args)

    if args.command == "all":
        report = rp.run_all(seed=args.seed)
        return _finish(report, args, "all-summary.png")

    return 2


def _lift_params(args) -> dict:
    return {"lam": args.lam, "lam1": args.lambda1, "lam2": args.lambda2,
            "const": args.const}


def _write_lift_csv(args) -> int:
    if args.h is None:
        print("lift: --h SHAPE is required when writing samples", file=sys.stderr)
        return 2
    params = _lift_params(args)
    plane = curvelift.plane_curve(args.plane)
    sign = args.sign
    if args.h == "exp" and sign > 0:
        sign = -1.0  # descend from the start height so the branch is covered
    rows = curvelift.lift_curve(plane, args.h, params, args.n, sign=sign)
    out = args.out or f"lift-{args.h}-{args.plane}.csv"
    curvelift.write_csv(rows, out)
    print(f"{len(rows)} rows written to {out}")
    if args.plot:
        from . import plots
        base = os.path.splitext(out)[0]
        if args.h != "const":
            plots.plot_relation(args.h, params, base + "-relation.png")
            print(f"figure written to {base}-relation.png")
        plots.plot_lifted_curve(rows, base + "-curve.png",
                                title=f"{args.plane} under the {args.h} lift")
        print(f"figure written to {base}-curve.png")
    return 0


def _run_user_chart(args) -> int:
    import random

    from . import thermo
    from .report import Report, _check_rng, _timed

    chart = thermo.load_chart(args.chart)
    report = Report(args.seed)
    rng = _check_rng(args.seed, f"user/{chart.name}")
    v, ms = _timed(lambda: thermo.lagrangian_verdict(chart, rng=rng))
    report.add(f"user/{chart.name}/omega", chart.name, "lagrangian", v, ms)
    if chart.Z.coeffs:
        v, ms = _timed(lambda: thermo.tangency(chart.Z, chart, rng=rng))
        report.add(f"user/{chart.name}/tangency", chart.name, "tangency", v, ms)
    if chart.region and chart.box:
        v, ms = _timed(lambda: thermo.check_admissible(
            chart, n_points=args.points, rng=rng))
        report.add(f"user/{chart.name}/admissible", chart.name, "admissibility", v, ms)
    return _finish(report, args, f"{chart.name}-summary.png")


if __name__ == "__main__":
    raise SystemExit(main())
