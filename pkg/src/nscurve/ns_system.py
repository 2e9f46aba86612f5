"""The flow system on the curve and the point-symmetry decision.

Momentum, continuity and energy residuals restricted to a naturally
parameterized curve with lifting function h(a) and viscosity zeta(T):

    F1 = rho*(u_t + u*u_a) + p_a - D_a(zeta(T)*u_a) - g*h'(a)*rho
    F2 = rho_t + u*rho_a + rho*u_a
    F3 = rho*T*(s_t + u*s_a) - zeta(T)*u_a^2 + k*T_aa

The viscous term is kept in divergence form and the conduction term keeps
the printed positive sign; `sign_variant_sweep` re-runs a symmetry check
over the three plausible conventions so the choice is validated rather
than assumed (the conduction sign cannot matter: k is a free constant, so
the determining equations split by powers of k either way).

A vector field X is a symmetry when the second prolongation annihilates
every residual on the solution manifold, i.e. after u_t, rho_t, s_t and
all their total derivatives are eliminated via the solved system.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import canonicalize
from .expr import (
    Assumption, Context, Expr, ExprError, NEGATIVE, POSITIVE, Rat, ZERO,
    add_, div_, free_symbols, mul_, pow_, sub_, substitute, sym,
)
from .jet import (
    BASE_VARS, DEPS, JetContext, PointVectorField, ProlongedVectorField,
    apply_field, base_context, coord_name, parse_coord, prolong,
    total_derivative,
)
from .parser import parse
from .zerotest import Verdict, is_zero, worst

ZETA_MODELS = ("any", "linear", "power")
H_SHAPES = ("any", "const", "linear", "quadratic", "power", "exp", "log")

PARAMS = ("alpha", "beta", "lambda", "lambda1", "lambda2", "g", "k", "C",
          "gamma1", "gamma2", "gamma3", "gamma4", "xi1", "xi2", "xi3", "xi4")

_PARAM_ASSUMPTIONS = {
    "g": NEGATIVE,
    "alpha": POSITIVE,
    # keep parameters away from the singular values of the case formulas
    "beta": Assumption(exclude=((1, Fraction(1, 8)), (Fraction(1, 2), Fraction(1, 12)),
                                (Fraction(1, 3), Fraction(1, 12)), (Fraction(3, 5), Fraction(1, 12)),
                                (-1, Fraction(1, 12)))),
    "lambda2": Assumption(exclude=((0, Fraction(1, 8)), (1, Fraction(1, 8)),
                                   (2, Fraction(1, 8)), (-2, Fraction(1, 12)))),
}


@dataclass(frozen=True)
class CaseSpec:
    """One classification cell: viscosity model, curve shape, branch sign of
    the quadratic lift, optional numeric parameter bindings."""
    zeta: str
    h: str
    lam_sign: int = 1          # sign of lambda for the quadratic shape
    bindings: tuple = ()       # ((name, Fraction), ...)

    def __post_init__(self):
        if self.zeta not in ZETA_MODELS:
            raise ExprError(f"unknown viscosity model {self.zeta}")
        if self.h not in H_SHAPES:
            raise ExprError(f"unknown curve shape {self.h}")
        for name, v in self.bindings:
            v = Fraction(v)
            if name == "beta" and self.zeta == "power" and v == 1:
                raise ExprError("beta = 1 is the linear viscosity model")
            if name == "lambda2" and self.h == "power" and v in (0, 1, 2):
                raise ExprError("lambda2 in {0, 1, 2} is a degenerate power shape")
            if name == "lambda" and self.h in ("linear", "quadratic") and v == 0:
                raise ExprError("lambda = 0 degenerates the shape")

    @property
    def id(self) -> str:
        extra = ""
        if self.h == "quadratic":
            extra = "-" if self.lam_sign < 0 else "+"
        b = ",".join(f"{n}={v}" for n, v in self.bindings)
        return f"zeta={self.zeta}|h={self.h}{extra}" + (f"|{b}" if b else "")

    def context(self, jc: JetContext) -> Context:
        assumptions = dict(_PARAM_ASSUMPTIONS)
        if self.h == "quadratic":
            assumptions["lambda"] = NEGATIVE if self.lam_sign < 0 else POSITIVE
        ctx = base_context().with_parameters(PARAMS, assumptions)
        ctx = ctx.with_functions(("zeta", "h", "F"))
        return jc.context(ctx)

    def bind(self, e: Expr) -> Expr:
        if not self.bindings:
            return e
        return substitute(e, {n: Rat(Fraction(v)) for n, v in self.bindings})

    def parse(self, text: str, jc: JetContext | None = None) -> Expr:
        return self.bind(parse(text, self.context(jc or JetContext(2))))


def zeta_expr(case: CaseSpec) -> Expr:
    ctx = case.context(JetContext(0))
    if case.zeta == "any":
        return parse("zeta(T)", ctx)
    if case.zeta == "linear":
        return case.bind(parse("alpha*T", ctx))
    return case.bind(parse("alpha*T^beta", ctx))


def hprime_expr(case: CaseSpec) -> Expr:
    ctx = case.context(JetContext(0))
    shapes = {
        "any": "h'(a)",
        "const": "0",
        "linear": "lambda",
        "quadratic": "2*lambda*a",
        "power": "lambda1*lambda2*a^(lambda2-1)",
        "exp": "lambda1*lambda2*exp(lambda2*a)",
        "log": "1/a",
    }
    return case.bind(parse(shapes[case.h], ctx))


def build_system(case: CaseSpec, heat_sign: int = 1, divergence: bool = True) -> tuple:
    """Return (F1, F2, F3) with zeta and h substituted for the case."""
    jc = JetContext(2)
    ctx = case.context(jc)
    zeta = zeta_expr(case)
    hp = hprime_expr(case)
    u_t, u_a, p_a = sym("u_t"), sym("u_a"), sym("p_a")
    rho, u, T, g, k = sym("rho"), sym("u"), sym("T"), sym("g"), sym("k")
    if divergence:
        viscous = total_derivative(mul_(zeta, u_a), "a", jc)
    else:
        viscous = mul_(zeta, sym("u_aa"))
    f1 = add_(mul_(rho, add_(u_t, mul_(u, u_a))), p_a,
              mul_(Rat(-1), viscous), mul_(Rat(-1), g, hp, rho))
    f2 = parse("rho_t + u*rho_a + rho*u_a", ctx)
    f3 = add_(mul_(rho, T, parse("s_t + u*s_a", ctx)),
              mul_(Rat(-1), zeta, u_a, u_a),
              mul_(Rat(heat_sign), k, sym("T_aa")))
    return tuple(canonicalize(f) for f in (f1, f2, f3))


_LEADING = (("u", "F1"), ("rho", "F2"), ("s", "F3"))


@dataclass
class SolvedSystem:
    """Evolution form: u_t, rho_t, s_t isolated; `restrict` eliminates every
    t-derivative of u, rho, s through total derivatives of the solved
    right-hand sides."""
    case: CaseSpec
    equations: tuple
    rhs: dict
    _deriv_memo: dict = field(default_factory=dict)

    def solved_deriv(self, dep: str, nt: int, na: int) -> Expr:
        """t-free expression for the coordinate dep_{t^nt a^na}, nt >= 1."""
        key = (dep, nt, na)
        got = self._deriv_memo.get(key)
        if got is not None:
            return got
        if nt == 1:
            e = self.rhs[dep]
            for _ in range(na):
                e = total_derivative(e, "a", None)
        else:
            e = self.restrict(total_derivative(self.solved_deriv(dep, nt - 1, na), "t", None))
        e = canonicalize(e)
        self._deriv_memo[key] = e
        return e

    def restrict(self, e: Expr) -> Expr:
        """Substitute away all t-derivatives of u, rho, s (any order)."""
        bindings = {}
        for name in free_symbols(e):
            pc = parse_coord(name)
            if pc is None:
                continue
            dep, nt, na = pc
            if dep in ("u", "rho", "s") and nt >= 1:
                bindings[name] = self.solved_deriv(dep, nt, na)
        if not bindings:
            return canonicalize(e)
        return substitute(e, bindings)


def solve_for_leading(system: tuple, case: CaseSpec) -> SolvedSystem:
    from .expr import differentiate

    rhs = {}
    for (dep, _), f in zip(_LEADING, system):
        lead = coord_name(dep, 1, 0)
        c = differentiate(f, lead)
        if c == ZERO or any(parse_coord(s) and parse_coord(s)[1] + parse_coord(s)[2] > 0
                            for s in free_symbols(c)):
            raise ExprError(f"cannot isolate {lead}: leading coefficient {c!r}")
        rhs[dep] = canonicalize(sub_(sym(lead), div_(f, c)))
    return SolvedSystem(case, system, rhs)


_solved_cache: dict = {}


def solved_system(case: CaseSpec, heat_sign: int = 1, divergence: bool = True) -> SolvedSystem:
    key = (case, heat_sign, divergence)
    if key not in _solved_cache:
        _solved_cache[key] = solve_for_leading(build_system(case, heat_sign, divergence), case)
    return _solved_cache[key]


def is_symmetry(X: PointVectorField, case: CaseSpec, rng: random.Random | None = None,
                heat_sign: int = 1, divergence: bool = True,
                n_points: int = 25) -> Verdict:
    """Worst verdict of X^(2)(F_i)|_E = 0 over the three residuals."""
    jc = JetContext(2)
    ctx = case.context(JetContext(8))
    sys = solved_system(case, heat_sign, divergence)
    Xp = prolong(X, 2, jc)
    rng = rng or random.Random(0)
    verdicts = []
    for f in sys.equations:
        determining = sys.restrict(apply_field(Xp, f))
        verdicts.append(is_zero(determining, ctx, rng, n_points=n_points))
    return worst(verdicts)


def sign_variant_sweep(X: PointVectorField, case: CaseSpec,
                       rng: random.Random | None = None) -> dict:
    """Symmetry verdict of X under each (heat sign, viscous form) convention."""
    out = {}
    for heat_sign in (1, -1):
        for divergence in (True, False):
            tag = f"{'+' if heat_sign > 0 else '-'}kT_aa/{'div' if divergence else 'plain'}"
            out[tag] = is_symmetry(X, case, rng, heat_sign, divergence).status
    return out
