"""Thermodynamic states as Lagrangian surfaces in (p, rho, s, T).

A state chart gives p = P(rho, s), T = Th(rho, s) built around an arbitrary
function F of one argument.  The structure form ds^dT + rho^-2 drho^dp
pulls back to a single drho^ds coefficient (`omega_residual`); a vanishing
residual is equivalent to the existence of a specific-energy potential with
T = e_s and p = rho^2 e_rho.  Symmetry of the state under a thermodynamic
vector field Z is tangency of Z to the surface.  Admissibility is negative
definiteness of the restricted form

    kappa = d(1/T) . de - rho^-2 d(p/T) . drho

tested through its leading principal minors at sampled points inside the
declared inequality region, with F bound to a concrete admissible function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import canonicalize, is_zero_poly
from .expr import (
    Assumption, Context, Expr, ExprError, POSITIVE, Rat, UFUNC_FAMILIES, ZERO,
    add_, differentiate, div_, eval_expr, free_symbols, mul_, pow_, sub_,
    substitute, sym, EvalDomainError,
)
from .lie import THERMO_VARS, ThermoVectorField
from .parser import parse
from .zerotest import (
    INCONCLUSIVE, NO_STATE, NUMERICALLY_ZERO, PROVEN_ZERO, REFUTED,
    Verdict, is_zero, worst,
)

CHART_PARAMS = ("gamma1", "gamma2", "gamma3", "gamma4", "C", "beta", "lambda2")


def thermo_context() -> Context:
    return Context(
        variables=("rho", "s", "p", "T"),
        parameters=CHART_PARAMS,
        assumptions={"rho": POSITIVE, "T": POSITIVE,
                     "beta": Assumption(exclude=((1, Fraction(1, 8)),
                                                 (Fraction(1, 2), Fraction(1, 12)),
                                                 (Fraction(1, 3), Fraction(1, 12)),
                                                 (-1, Fraction(1, 12)))),
                     "lambda2": Assumption(exclude=((0, Fraction(1, 8)),
                                                    (1, Fraction(1, 8)),
                                                    (2, Fraction(1, 8))))},
        functions=("F",),
    )


@dataclass(frozen=True)
class StateChart:
    """p = P(rho, s), T = Th(rho, s) with an unspecified F inside."""
    name: str
    P: Expr
    T: Expr
    Z: ThermoVectorField
    region: tuple = ()          # inequality expressions, required > 0
    f_arg: Expr | None = None   # the argument fed to F, informative
    bindings: tuple = ()        # parameter values for the admissibility demo
    f_family: str = "exp"
    box: tuple = ()             # ((var, lo, hi), ...) sampling window
    notes: str = ""


@dataclass(frozen=True)
class QuadraticForm2:
    """Matrix entries of a symmetric form in (drho, ds)."""
    k11: Expr
    k12: Expr
    k22: Expr


class NoState:
    """Marker: the cell admits no one-dimensional-symmetry state."""

    def __init__(self, reason: str):
        self.reason = reason

    def __repr__(self):
        return f"NoState({self.reason})"


def omega_residual(chart: StateChart) -> Expr:
    """Coefficient of drho^ds after pulling the structure form onto the
    chart: dTh/drho - rho^-2 dP/ds; zero iff the surface is Lagrangian."""
    t_rho = differentiate(chart.T, "rho")
    p_s = differentiate(chart.P, "s")
    return canonicalize(sub_(t_rho, mul_(pow_(sym("rho"), Rat(-2)), p_s)))


def lagrangian_verdict(chart: StateChart, ctx: Context | None = None,
                       rng: random.Random | None = None) -> Verdict:
    ctx = ctx or thermo_context()
    return is_zero(omega_residual(chart), ctx, rng)


def tangency(Z: ThermoVectorField, chart: StateChart, ctx: Context | None = None,
             rng: random.Random | None = None) -> Verdict:
    """Zero verdicts for Z(p - P) and Z(T - Th) on the surface."""
    ctx = ctx or thermo_context()
    on_chart = {"p": chart.P, "T": chart.T}
    verdicts = []
    for target, tv in (("p", chart.P), ("T", chart.T)):
        val = Z.coeff(target)
        for v in ("rho", "s"):
            val = sub_(val, mul_(Z.coeff(v), differentiate(tv, v)))
        verdicts.append(is_zero(substitute(val, on_chart), ctx, rng))
    return worst(verdicts)


def _sym_product(f1: tuple, f2: tuple) -> QuadraticForm2:
    a1, a2 = f1
    b1, b2 = f2
    return QuadraticForm2(
        k11=canonicalize(mul_(a1, b1)),
        k12=canonicalize(mul_(Rat(1, 2), add_(mul_(a1, b2), mul_(a2, b1)))),
        k22=canonicalize(mul_(a2, b2)),
    )


def kappa_form(chart: StateChart) -> QuadraticForm2:
    """Restriction of the admissibility form to the chart, as a symmetric
    2x2 form in (drho, ds): on the surface de = Th ds + (P/rho^2) drho."""
    rho = sym("rho")
    P, Th = chart.P, chart.T
    de = (canonicalize(mul_(P, pow_(rho, Rat(-2)))), Th)
    t_inv = pow_(Th, Rat(-1))
    d_tinv = (differentiate(t_inv, "rho"), differentiate(t_inv, "s"))
    p_over_t = div_(P, Th)
    d_pt = (differentiate(p_over_t, "rho"), differentiate(p_over_t, "s"))
    first = _sym_product(d_tinv, de)
    second = _sym_product(d_pt, (pow_(rho, Rat(-2)), ZERO))
    return QuadraticForm2(
        k11=canonicalize(sub_(first.k11, second.k11)),
        k12=canonicalize(sub_(first.k12, second.k12)),
        k22=canonicalize(sub_(first.k22, second.k22)),
    )


def _bound_exprs(chart: StateChart, exprs) -> list:
    binds = {n: Rat(Fraction(v)) for n, v in chart.bindings}
    on_chart = {"p": chart.P, "T": chart.T}
    return [substitute(substitute(e, on_chart), binds) for e in exprs]


def check_admissible(chart: StateChart, form: QuadraticForm2 | None = None,
                     n_points: int = 50, rng: random.Random | None = None,
                     expect_definite: bool = True, flip_region: int | None = None) -> Verdict:
    """Sample (rho, s) inside the declared region with the chart's concrete
    (F, parameter) binding; assert k11 < 0 and k11*k22 - k12^2 > 0 at every
    point.  With flip_region=i the i-th inequality is reversed and at least
    one sampled point must fail definiteness."""
    form = form or kappa_form(chart)
    rng = rng or random.Random(0)
    k11, k12, k22 = _bound_exprs(chart, (form.k11, form.k12, form.k22))
    region = _bound_exprs(chart, chart.region)
    fam = UFUNC_FAMILIES[chart.f_family]
    box = dict((v, (float(lo), float(hi))) for v, lo, hi in chart.box) or \
        {"rho": (0.5, 2.0), "s": (0.2, 2.0)}

    hits = 0
    fails = 0
    attempts = 0
    while hits < n_points and attempts < 200 * n_points:
        attempts += 1
        point = {v: rng.uniform(*box[v]) for v in ("rho", "s")}
        try:
            vals = [eval_expr(r, point, {"F": fam}) for r in region]
            ok_region = all(
                (v < 0 if flip_region == i else v > 0) for i, v in enumerate(vals))
            if not ok_region:
                continue
            a = eval_expr(k11, point, {"F": fam})
            d = a * eval_expr(k22, point, {"F": fam}) - eval_expr(k12, point, {"F": fam}) ** 2
        except EvalDomainError:
            continue
        hits += 1
        if not (a < 0 and d > 0):
            fails += 1
            if expect_definite:
                return Verdict(REFUTED, residual=max(a, -d),
                               witness=point, samples=hits,
                               note="kappa not negative definite inside the region")
    if hits < n_points:
        return Verdict(INCONCLUSIVE, samples=hits,
                       note=f"only {hits} region samples in {attempts} attempts")
    if expect_definite:
        return Verdict(NUMERICALLY_ZERO, samples=hits,
                       note=f"negative definite at {hits} sampled points")
    if fails == 0:
        return Verdict(REFUTED, samples=hits,
                       note="definiteness survived outside the declared region")
    return Verdict(NUMERICALLY_ZERO, samples=hits,
                   note=f"definiteness fails at {fails}/{hits} points outside the region")


# ---------------------------------------------------------------------------
# chart library
# ---------------------------------------------------------------------------

def _chart(name, P, T, Z, region, f_arg, bindings, f_family, box, notes=""):
    ctx = thermo_context()
    return StateChart(
        name=name,
        P=canonicalize(parse(P, ctx)),
        T=canonicalize(parse(T, ctx)),
        Z=ThermoVectorField.make({k: parse(v, ctx) for k, v in Z.items()}, "Z"),
        region=tuple(canonicalize(parse(r, ctx)) for r in region),
        f_arg=canonicalize(parse(f_arg, ctx)) if f_arg else None,
        bindings=tuple((n, Fraction(v)) for n, v in bindings),
        f_family=f_family,
        box=tuple(box),
        notes=notes,
    )


def _build_library() -> dict:
    lib = {}
    # viscosity arbitrary; flat, sloped and logarithmic lifts share one family
    w = "s - (gamma2/gamma3)*ln(rho)"
    lib["universal"] = _chart(
        "universal",
        P=f"-((gamma2*F'({w}) + C)*rho)/gamma3 - gamma1/gamma3",
        T=f"F'({w})",
        Z={"p": "gamma1 + gamma3*p", "rho": "gamma3*rho", "s": "gamma2"},
        region=[f"F'({w})", f"F''({w})", f"-(gamma2*F'({w})+C)/gamma3"],
        f_arg=w,
        bindings=[("gamma1", 0), ("gamma2", -1), ("gamma3", 1), ("C", 1)],
        f_family="exp",
        box=[("rho", Fraction(1, 2), 2), ("s", Fraction(1, 4), 2)],
    )
    # viscosity linear in temperature; arbitrary and quadratic lifts
    w = "(s - gamma2/gamma3)*rho"
    lib["lin-any"] = _chart(
        "lin-any",
        P=f"rho^2*(s - gamma2/gamma3)*F'({w}) + C*rho - gamma1/gamma3",
        T=f"rho*F'({w})",
        Z={"p": "gamma1 + gamma3*p", "rho": "gamma3*rho",
           "s": "gamma2 - gamma3*s", "T": "gamma3*T"},
        region=[f"F'({w})", f"F''({w})", f"C*F''({w}) - F'({w})^2"],
        f_arg=w,
        bindings=[("gamma1", 0), ("gamma2", -1), ("gamma3", 1), ("C", 10)],
        f_family="exp",
        box=[("rho", Fraction(3, 10), 1), ("s", Fraction(-1, 2), 1)],
    )
    # viscosity linear; flat, sloped and logarithmic lifts
    w = "(s + gamma2/gamma4)*rho^(-gamma4/gamma3)"
    lib["lin-main"] = _chart(
        "lin-main",
        P=f"C*rho - (F'({w})*(gamma4*s+gamma2)*rho^(-gamma4/gamma3+1) + gamma1)/gamma3",
        T=f"rho^(-gamma4/gamma3)*F'({w})",
        Z={"p": "gamma1 + gamma3*p", "rho": "gamma3*rho",
           "s": "gamma2 + gamma4*s", "T": "-gamma4*T"},
        region=[f"F'({w})", f"F''({w})",
                f"-(F'({w})*F''({w})*(gamma3+gamma4)*(gamma4*s+gamma2)*rho^(-gamma4/gamma3)"
                f" - C*gamma3^2*F''({w}) + gamma4^2*F'({w})^2)"],
        f_arg=w,
        bindings=[("gamma1", 0), ("gamma2", 0), ("gamma3", 1), ("gamma4", -1), ("C", 10)],
        f_family="exp",
        box=[("rho", Fraction(3, 10), Fraction(6, 5)), ("s", Fraction(1, 5), Fraction(3, 2))],
    )
    # power-law viscosity; flat and sloped lifts
    D = "(gamma3+(beta-1)*gamma4)"
    w = f"(s - gamma2/(beta*gamma4))*rho^(beta*gamma4/{D})"
    lib["pow-main"] = _chart(
        "pow-main",
        P=f"(F'({w})*(beta*gamma4*s-gamma2)*rho^((beta*gamma4+gamma3)/{D})"
          f" - F({w})*gamma4*(beta-1)*rho^(gamma3/{D}))/{D} - gamma1/gamma3",
        T=f"F'({w})*rho^(gamma4/{D})",
        Z={"p": "gamma1 + gamma3*p", "rho": f"{D}*rho",
           "s": "gamma2 - beta*gamma4*s", "T": "gamma4*T"},
        region=[f"F'({w})", f"F''({w})",
                f"F'({w})*F''({w})*(gamma3-gamma4)*(beta*gamma4*s-gamma2)*rho^(beta*gamma4/{D})"
                f" - gamma4*(gamma3*(beta-1)*F({w})*F''({w}) + gamma4*F'({w})^2)"],
        f_arg=w,
        bindings=[("beta", 2), ("gamma1", 0), ("gamma2", 0), ("gamma3", 3), ("gamma4", -1)],
        f_family="exp",
        box=[("rho", Fraction(1, 2), 2), ("s", -2, Fraction(-3, 10))],
    )
    # power-law viscosity; parabolic lift
    w = "(s - gamma2/(beta*gamma3))*rho^(beta/(2*beta-1))"
    lib["pow-quad"] = _chart(
        "pow-quad",
        P=f"(F'({w})*(beta*gamma3*s-gamma2)*rho^(2*beta/(2*beta-1))"
          f" - F({w})*gamma3*(beta-1)*rho^(beta/(2*beta-1)))/(gamma3*(2*beta-1)) - gamma1/(beta*gamma3)",
        T=f"F'({w})*rho^(1/(2*beta-1))",
        Z={"p": "gamma1 + beta*gamma3*p", "rho": "(2*beta-1)*gamma3*rho",
           "s": "gamma2 - beta*gamma3*s", "T": "gamma3*T"},
        region=[f"F'({w})", f"F''({w})",
                f"F'({w})*F''({w})*(beta-1)*(beta*s-gamma2/gamma3)*rho^(beta/(2*beta-1))"
                f" - beta*(beta-1)*F({w})*F''({w}) - F'({w})^2"],
        f_arg=w,
        bindings=[("beta", 2), ("gamma1", 0), ("gamma2", 0), ("gamma3", 1)],
        f_family="exp",
        box=[("rho", 1, 2), ("s", 2, 4)],
    )
    # parabolic lift, exponent one half: F becomes a function of rho alone
    lib["pow-quad-half"] = _chart(
        "pow-quad-half",
        P="(rho^2*F'(rho) + 2*gamma1*s)/(2*gamma2 - gamma3*s)",
        T="(gamma3*rho*F(rho) - 4*gamma2*(C*rho+gamma1))/(rho*(2*gamma2-gamma3*s)^2)",
        Z={"p": "gamma1 + (1/2)*gamma3*p", "s": "gamma2 - (1/2)*gamma3*s",
           "T": "gamma3*T"},
        region=["(2*gamma2 - gamma3*s)/gamma3",
                "-((p^2 + 4*p*rho*s*T)*gamma3^2"
                " - ((2*rho^3*F''(rho) + 8*(gamma2*p - gamma1*s))*rho*T - 4*gamma1*p)*gamma3"
                " + 4*gamma1^2)"],
        f_arg="rho",
        bindings=[("gamma1", 0), ("gamma2", 1), ("gamma3", 1), ("C", 0), ("beta", Fraction(1, 2))],
        f_family="square",
        box=[("rho", Fraction(7, 10), Fraction(13, 10)), ("s", Fraction(-1, 2), 1)],
        notes="free constant C enters T only; the structure form does not constrain it",
    )
    # power-law viscosity; power lift
    A = "(lambda2*(3*beta-1)+2*(beta-1))"
    w = f"rho^(2*beta*lambda2/{A})*(s - gamma2/(2*beta*lambda2*gamma3))"
    lib["pow-power"] = _chart(
        "pow-power",
        P=f"((2*beta*lambda2*gamma3*s - gamma2)*F'({w})*rho^(2*lambda2/{A}+1)"
          f" - 2*(beta-1)*lambda2*gamma3*F({w})*rho^(2*lambda2*(1-beta)/{A}+1))/({A}*gamma3)"
          f" - gamma1/(gamma3*(lambda2*(beta+1)+2*(beta-1)))",
        T=f"rho^(2*lambda2/{A})*F'({w})",
        Z={"p": "gamma1 + gamma3*(lambda2*(beta+1)+2*(beta-1))*p",
           "rho": f"gamma3*{A}*rho",
           "s": "gamma2 - 2*beta*lambda2*gamma3*s", "T": "2*lambda2*gamma3*T"},
        region=[f"F'({w})", f"F''({w})",
                f"(2*beta*lambda2*s - gamma2/gamma3)*(beta-1)*(lambda2+2)"
                f"*F'({w})*F''({w})*rho^(2*beta*lambda2/{A})"
                f" - 2*lambda2*((lambda2*(beta+1)+2*(beta-1))*(beta-1)*F({w})*F''({w})"
                f" + 2*lambda2*F'({w})^2)"],
        f_arg=w,
        bindings=[("beta", 2), ("lambda2", 3), ("gamma1", 0), ("gamma2", 0), ("gamma3", 1)],
        f_family="exp",
        box=[("rho", 1, 2), ("s", 3, 5)],
    )
    # power-law viscosity; exponential lift
    w = "rho^(2*beta/(3*beta-1))*(s - gamma2/(2*beta*gamma3))"
    lib["pow-exp"] = _chart(
        "pow-exp",
        P=f"((2*beta*gamma3*s - gamma2)*rho^((3*beta+1)/(3*beta-1))*F'({w})"
          f" - 2*gamma3*(beta-1)*rho^((beta+1)/(3*beta-1))*F({w}))/(gamma3*(3*beta-1))"
          f" - gamma1/(gamma3*(beta+1))",
        T=f"rho^(2/(3*beta-1))*F'({w})",
        Z={"p": "gamma1 + (beta+1)*gamma3*p", "rho": "(3*beta-1)*gamma3*rho",
           "s": "gamma2 - 2*beta*gamma3*s", "T": "2*gamma3*T"},
        region=[f"F'({w})", f"F''({w})",
                f"(beta-1)*(2*beta*s - gamma2/gamma3)*F'({w})*F''({w})*rho^(2*beta/(3*beta-1))"
                f" - 2*(beta^2-1)*F({w})*F''({w}) - 4*F'({w})^2"],
        f_arg=w,
        bindings=[("beta", 2), ("gamma1", 0), ("gamma2", 0), ("gamma3", 1)],
        f_family="exp",
        box=[("rho", 1, 2), ("s", 3, 5)],
    )
    # exponential lift, beta = 1/3: F a function of rho alone
    lib["pow-exp-third"] = _chart(
        "pow-exp-third",
        P="(rho^2*F'(rho) - 3*gamma1*s*(gamma3*s - 3*gamma2))/(2*gamma3*s - 3*gamma2)^2",
        T="(27*gamma2^2*(C*rho+gamma1) - 4*gamma3*rho*F(rho))/(rho*(2*gamma3*s - 3*gamma2)^3)",
        Z={"p": "gamma1 + (4/3)*gamma3*p", "s": "gamma2 - (2/3)*gamma3*s",
           "T": "2*gamma3*T"},
        region=["-6*gamma3/(2*gamma3*s - 3*gamma2)",
                "-(6*gamma3*(2*F'(rho) + rho*F''(rho))/(2*gamma3*s - 3*gamma2)"
                " + (4*gamma3*rho^2*F'(rho) + 27*gamma1*gamma2^2)^2"
                "/(rho^3*T*(2*gamma3*s - 3*gamma2)^4))"],
        f_arg="rho",
        bindings=[("gamma1", 0), ("gamma2", 2), ("gamma3", 1), ("C", 0), ("beta", Fraction(1, 3))],
        f_family="square",
        box=[("rho", Fraction(1, 2), 2), ("s", 0, Fraction(5, 2))],
    )
    # exponential lift, beta = -1
    w = "rho^(1/2)*(s + gamma2/(2*gamma3))"
    lib["pow-exp-neg1"] = _chart(
        "pow-exp-neg1",
        P=f"rho^(1/2)*F'({w})*(s/2 + gamma2/(4*gamma3))"
          f" - (gamma1/(4*gamma3))*(ln(rho) - 1) - F({w})",
        T=f"rho^(-1/2)*F'({w})",
        Z={"p": "gamma1", "rho": "-4*gamma3*rho",
           "s": "gamma2 + 2*gamma3*s", "T": "2*gamma3*T"},
        region=[f"F'({w})", f"F''({w})",
                f"(s + gamma2/(2*gamma3))*rho^(1/2)*F'({w})*F''({w})"
                f" - F'({w})^2 - (gamma1/gamma3)*F''({w})"],
        f_arg=w,
        bindings=[("gamma1", -1), ("gamma2", 0), ("gamma3", 1), ("beta", -1)],
        f_family="exp",
        box=[("rho", 1, 2), ("s", Fraction(6, 5), Fraction(5, 2))],
    )
    return lib


_library = None


def chart_library() -> dict:
    global _library
    if _library is None:
        _library = _build_library()
    return _library


# (zeta model, h shape) -> chart key, NoState reason, or a delegation note
_STATE_MAP = {
    ("any", "any"): NoState("kappa is degenerate for every state in <d_p, d_s>"),
    ("any", "const"): "universal",
    ("any", "linear"): "universal",
    ("any", "quadratic"): NoState("kappa is degenerate for every state in <d_p, d_s>"),
    ("any", "power"): NoState("thermodynamic part is <d_p, d_s>, same degeneracy"),
    ("any", "exp"): NoState("thermodynamic part is <d_p, d_s>, same degeneracy"),
    ("any", "log"): "universal",
    ("linear", "any"): "lin-any",
    ("linear", "const"): "lin-main",
    ("linear", "linear"): "lin-main",
    ("linear", "quadratic"): "lin-any",
    ("linear", "power"): "lin-any",
    ("linear", "exp"): "lin-any",
    ("linear", "log"): "lin-main",
    ("power", "any"): NoState("kappa is degenerate for every state in <d_p, d_s>"),
    ("power", "const"): "pow-main",
    ("power", "linear"): "pow-main",
    ("power", "quadratic"): "pow-quad",
    ("power", "power"): "pow-power",
    ("power", "exp"): "pow-exp",
    ("power", "log"): "universal",
}

SPECIAL_CHARTS = {
    ("pow-quad", Fraction(1, 2)): "pow-quad-half",
    ("pow-exp", Fraction(1, 3)): "pow-exp-third",
    ("pow-exp", -1): "pow-exp-neg1",
}


def state_library(zeta: str, h: str, beta=None):
    """Chart (or NoState) for a classification cell; `beta` selects the
    special charts of the parabolic and exponential lifts."""
    ref = _STATE_MAP.get((zeta, h))
    if ref is None:
        raise ExprError(f"no state entry for ({zeta}, {h})")
    if isinstance(ref, NoState):
        return ref
    if beta is not None:
        special = SPECIAL_CHARTS.get((ref, Fraction(beta)))
        if special:
            return chart_library()[special]
    return chart_library()[ref]


def load_chart(path: str) -> StateChart:
    """Read a chart from a declarative text file.

    Lines are `key: value` with expressions in the engine grammar:
    name, P, T, region (;-separated), Z.p / Z.rho / Z.s / Z.T, F (family),
    bind (comma-separated name=value), box.rho / box.s (lo, hi)."""
    ctx = thermo_context()
    fields = {"name": "user-chart", "F": "exp"}
    z: dict = {}
    region: list = []
    bindings: list = []
    box: list = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(":")
            key = key.strip()
            value = value.strip()
            if key.startswith("Z."):
                z[key[2:]] = parse(value, ctx)
            elif key == "region":
                region = [canonicalize(parse(v.strip(), ctx)) for v in value.split(";") if v.strip()]
            elif key == "bind":
                for item in value.split(","):
                    n, _, v = item.partition("=")
                    bindings.append((n.strip(), Fraction(v.strip())))
            elif key.startswith("box."):
                lo, hi = (Fraction(x.strip()) for x in value.split(","))
                box.append((key[4:], lo, hi))
            else:
                fields[key] = value
    if "P" not in fields or "T" not in fields:
        raise ExprError(f"chart file {path} must define P and T")
    return StateChart(
        name=fields["name"],
        P=canonicalize(parse(fields["P"], ctx)),
        T=canonicalize(parse(fields["T"], ctx)),
        Z=ThermoVectorField.make(z, "Z"),
        region=tuple(region),
        f_arg=canonicalize(parse(fields["w"], ctx)) if "w" in fields else None,
        bindings=tuple(bindings),
        f_family=fields["F"],
        box=tuple(box),
    )
