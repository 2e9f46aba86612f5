"""Registry of all classification cells: generator tables, derived-series
expectations, thermodynamic projections, state-chart references and
invariant tables.

Generators are written in the expression grammar and instantiated against
each cell's context.  Cells without their own printed table (power/exp
lifts under the first two viscosity models) inherit the arbitrary-shape
algebra of their viscosity model, which remains a symmetry algebra for
every specific lift.

Two convention notes, both validated mechanically and flagged in reports:

* Parabolic lift branches.  The determining equation for the translation
  pair is f'' = 2*lambda*g*f, so with g < 0 the oscillatory pair belongs to
  lambda > 0 (frequency sqrt(-2*lambda*g)) and the exponential pair to
  lambda < 0 (rate sqrt(2*lambda*g), the form the summary tables print).
  Sources that attach the oscillatory pair to lambda < 0 fail the symmetry
  check (the engine refutes that assignment; see the erratum records).

* Three invariant-table entries needed one-character repairs to be
  annihilated by their algebras; the printed originals are kept alongside
  as negative controls.  See ERRATA below.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .expr import Expr, ZERO, add_, mul_
from .jet import JetContext, PointVectorField
from .lie import THERMO_VARS, ThermoVectorField
from .ns_system import CaseSpec
from .parser import parse

# frequently reused component dictionaries
_X1 = {"t": "1"}
_X2 = {"p": "1"}
_X3 = {"s": "1"}
_XA = {"a": "1"}
_XGAL = {"a": "t", "u": "1"}
_XSCALE = {"t": "t", "a": "a", "p": "-p", "rho": "-rho"}
_XBOOST = {"t": "t", "a": "lambda*g*t^2/2 + a", "u": "lambda*g*t",
           "p": "-p", "rho": "-rho"}
_W = {"p": "p", "rho": "rho", "s": "-s", "T": "T"}

# oscillatory pair (lambda > 0, g < 0) and exponential pair (lambda < 0)
_XTRIG1 = {"a": "sin((-2*lambda*g)^(1/2)*t)",
           "u": "(-2*lambda*g)^(1/2)*cos((-2*lambda*g)^(1/2)*t)"}
_XTRIG2 = {"a": "cos((-2*lambda*g)^(1/2)*t)",
           "u": "-(-2*lambda*g)^(1/2)*sin((-2*lambda*g)^(1/2)*t)"}
_XEXP1 = {"a": "exp((2*lambda*g)^(1/2)*t)",
          "u": "(2*lambda*g)^(1/2)*exp((2*lambda*g)^(1/2)*t)"}
_XEXP2 = {"a": "exp(-(2*lambda*g)^(1/2)*t)",
          "u": "-(2*lambda*g)^(1/2)*exp(-(2*lambda*g)^(1/2)*t)"}

# power-law viscosity scalings
_X7_POW_CONST = {"a": "a", "u": "u",
                 "p": "-(2*beta/(beta-1))*p",
                 "rho": "-((4*beta-2)/(beta-1))*rho",
                 "s": "(2*beta/(beta-1))*s",
                 "T": "-(2/(beta-1))*T"}
_X6_POW_LIN = {"t": "t", "a": "2*a", "u": "u",
               "p": "-((3*beta-1)/(beta-1))*p",
               "rho": "-((5*beta-3)/(beta-1))*rho",
               "s": "(2*beta/(beta-1))*s",
               "T": "-(2/(beta-1))*T"}
_X4_POW_POWER = {"t": "t", "a": "-(2*a)/(lambda2-2)", "u": "-(lambda2*u)/(lambda2-2)",
                 "p": "((lambda2*(beta+1)+2*(beta-1))/((beta-1)*(lambda2-2)))*p",
                 "rho": "((lambda2*(3*beta-1)+2*(beta-1))/((beta-1)*(lambda2-2)))*rho",
                 "s": "-((2*beta*lambda2)/((beta-1)*(lambda2-2)))*s",
                 "T": "((2*lambda2)/((beta-1)*(lambda2-2)))*T"}
_X4_POW_EXP = {"t": "t", "a": "-2/lambda2", "u": "-u",
               "p": "((beta+1)/(beta-1))*p",
               "rho": "((3*beta-1)/(beta-1))*rho",
               "s": "-(2*beta/(beta-1))*s",
               "T": "(2/(beta-1))*T"}

# thermodynamic generators
_YP = {"p": "1"}
_YS = {"s": "1"}
_YPR = {"p": "p", "rho": "rho"}
_YW = {"p": "p", "rho": "rho", "s": "-s", "T": "T"}
_YST = {"s": "s", "T": "-T"}
_Y4_POW = {"rho": "(beta-1)*rho", "s": "-beta*s", "T": "T"}
_Y3_POW_QUAD = {"p": "beta*p", "rho": "(2*beta-1)*rho", "s": "-beta*s", "T": "T"}
_Y3_POW_POWER = {"p": "(lambda2*(beta+1)+2*(beta-1))*p",
                 "rho": "(lambda2*(3*beta-1)+2*(beta-1))*rho",
                 "s": "-2*beta*lambda2*s", "T": "2*lambda2*T"}
_Y3_POW_EXP = {"p": "(beta+1)*p", "rho": "(3*beta-1)*rho",
               "s": "-2*beta*s", "T": "2*T"}


@dataclass(frozen=True)
class CaseEntry:
    """One registry cell with everything the verifiers need."""
    zeta: str
    h: str
    lam_sign: int = 1
    printed: bool = True                 # the generator table appears in a summary row
    generators: tuple = ()               # (name, components) pairs
    series: tuple | None = None          # expected derived-series dimensions
    series_printed: bool = False
    derived_basis: tuple = ()            # printed first-derived basis, combos over names
    derived_basis2: tuple = ()           # printed second-derived basis
    y_list: tuple = ()                   # thermodynamic part generators
    notes: str = ""

    @property
    def case(self) -> CaseSpec:
        return CaseSpec(self.zeta, self.h, self.lam_sign)

    @property
    def id(self) -> str:
        return self.case.id

    def fields(self, bindings: tuple = ()) -> list:
        case = CaseSpec(self.zeta, self.h, self.lam_sign, bindings)
        ctx = case.context(JetContext(2))
        out = []
        for name, comps in self.generators:
            parsed = {k: case.bind(parse(v, ctx)) for k, v in comps.items()}
            out.append(PointVectorField.make(parsed, name))
        return out

    def y_fields(self, bindings: tuple = ()) -> list:
        case = CaseSpec(self.zeta, self.h, self.lam_sign, bindings)
        ctx = case.context(JetContext(0))
        out = []
        for i, comps in enumerate(self.y_list, 1):
            out.append(ThermoVectorField.make(
                {k: case.bind(parse(v, ctx)) for k, v in comps.items()}, f"Y{i}"))
        return out

    def combo_fields(self, combos, named_fields, bindings: tuple = ()) -> list:
        """Printed sub-basis combos like {'X1': '1', 'X5': 'lambda*g'}."""
        case = CaseSpec(self.zeta, self.h, self.lam_sign, bindings)
        ctx = case.context(JetContext(2))
        by_name = {f.name: f for f in named_fields}
        out = []
        for combo in combos:
            comps: dict = {}
            for gname, coeff in combo.items():
                ce = case.bind(parse(coeff, ctx))
                for var, e in by_name[gname].coeffs:
                    comps[var] = add_(comps.get(var, ZERO), mul_(ce, e))
            out.append(PointVectorField.make(comps, "+".join(combo)))
        return out


def _gens(*pairs):
    return tuple(pairs)


def _entries() -> list:
    entries = []

    # ---- viscosity an arbitrary function of temperature -----------------
    base3 = _gens(("X1", _X1), ("X2", _X2), ("X3", _X3))
    entries += [
        CaseEntry("any", "any", generators=base3,
                  series=(3, 0), y_list=(_YP, _YS)),
        CaseEntry("any", "const",
                  generators=base3 + (("X4", _XA), ("X5", _XGAL), ("X6", _XSCALE)),
                  series=(6, 3, 0), series_printed=True,
                  derived_basis=({"X1": "1"}, {"X2": "1"}, {"X4": "1"}),
                  y_list=(_YP, _YS, _YPR)),
        CaseEntry("any", "linear",
                  generators=base3 + (("X4", _XA), ("X5", _XGAL), ("X6", _XBOOST)),
                  series=(6, 3, 0), series_printed=True,
                  derived_basis=({"X2": "1"}, {"X4": "1"},
                                 {"X1": "1", "X5": "lambda*g"}),
                  y_list=(_YP, _YS, _YPR)),
        CaseEntry("any", "quadratic", lam_sign=1,
                  generators=base3 + (("X4", _XTRIG1), ("X5", _XTRIG2)),
                  series=(5, 2, 0), series_printed=True,
                  derived_basis=({"X4": "1"}, {"X5": "1"}),
                  y_list=(_YP, _YS)),
        CaseEntry("any", "quadratic", lam_sign=-1,
                  generators=base3 + (("X4", _XEXP1), ("X5", _XEXP2)),
                  series=(5, 2, 0), series_printed=True,
                  derived_basis=({"X4": "1"}, {"X5": "1"}),
                  y_list=(_YP, _YS)),
        CaseEntry("any", "power", printed=False, generators=base3,
                  series=(3, 0), y_list=(_YP, _YS),
                  notes="no special symmetries for this lift; inherits the arbitrary-shape algebra"),
        CaseEntry("any", "exp", printed=False, generators=base3,
                  series=(3, 0), y_list=(_YP, _YS),
                  notes="no special symmetries for this lift; inherits the arbitrary-shape algebra"),
        CaseEntry("any", "log",
                  generators=base3 + (("X4", _XSCALE),),
                  series=(4, 2, 0), series_printed=True,
                  derived_basis=({"X1": "1"}, {"X2": "1"}),
                  y_list=(_YP, _YS, _YPR)),
    ]

    # ---- viscosity linear in temperature ---------------------------------
    lin4 = base3 + (("W", _W),)
    entries += [
        CaseEntry("linear", "any", generators=lin4,
                  series=(4, 2, 0), y_list=(_YP, _YS, _YW)),
        CaseEntry("linear", "const",
                  generators=base3 + (("X4", _XA), ("X5", _XGAL), ("W", _W), ("X6", _XSCALE)),
                  series=(7, 4, 0), y_list=(_YP, _YS, _YPR, _YST)),
        CaseEntry("linear", "linear",
                  generators=base3 + (("X4", _XA), ("X5", _XGAL), ("W", _W), ("X6", _XBOOST)),
                  series=(7, 4, 0), y_list=(_YP, _YS, _YPR, _YST)),
        CaseEntry("linear", "quadratic", lam_sign=1,
                  generators=lin4 + (("X4", _XTRIG1), ("X5", _XTRIG2)),
                  series=(6, 4, 0), y_list=(_YP, _YS, _YW)),
        CaseEntry("linear", "quadratic", lam_sign=-1,
                  generators=lin4 + (("X4", _XEXP1), ("X5", _XEXP2)),
                  series=(6, 4, 0), y_list=(_YP, _YS, _YW)),
        CaseEntry("linear", "power", printed=False, generators=lin4,
                  series=(4, 2, 0), y_list=(_YP, _YS, _YW),
                  notes="no special symmetries for this lift; inherits the arbitrary-shape algebra"),
        CaseEntry("linear", "exp", printed=False, generators=lin4,
                  series=(4, 2, 0), y_list=(_YP, _YS, _YW),
                  notes="no special symmetries for this lift; inherits the arbitrary-shape algebra"),
        CaseEntry("linear", "log",
                  generators=lin4 + (("X4", _XSCALE),),
                  series=(5, 3, 0), y_list=(_YP, _YS, _YPR, _YST)),
    ]

    # ---- power-law viscosity ----------------------------------------------
    entries += [
        CaseEntry("power", "any", generators=base3,
                  series=(3, 0), y_list=(_YP, _YS)),
        CaseEntry("power", "const",
                  generators=base3 + (("X4", _XA), ("X5", _XGAL),
                                      ("X6", _XSCALE), ("X7", _X7_POW_CONST)),
                  series=(7, 5, 1, 0), series_printed=True,
                  derived_basis=({"X1": "1"}, {"X2": "1"}, {"X3": "1"},
                                 {"X4": "1"}, {"X5": "1"}),
                  derived_basis2=({"X4": "1"},),
                  y_list=(_YP, _YS, _YPR, _Y4_POW)),
        CaseEntry("power", "linear",
                  generators=base3 + (("X4", _XA), ("X5", _XGAL),
                                      ("X6", _X6_POW_LIN), ("X7", _XBOOST)),
                  series=(7, 5, 1, 0), series_printed=True,
                  derived_basis=({"X1": "1"}, {"X2": "1"}, {"X3": "1"},
                                 {"X4": "1"}, {"X5": "1"}),
                  derived_basis2=({"X4": "1"},),
                  y_list=(_YP, _YS, _YPR, _Y4_POW)),
        CaseEntry("power", "quadratic", lam_sign=1,
                  generators=base3 + (("X4", _XTRIG1), ("X5", _XTRIG2), ("X6", _X7_POW_CONST)),
                  series=(6, 4, 0), series_printed=True,
                  derived_basis=({"X2": "1"}, {"X3": "1"}, {"X4": "1"}, {"X5": "1"}),
                  y_list=(_YP, _YS, _Y3_POW_QUAD)),
        CaseEntry("power", "quadratic", lam_sign=-1,
                  generators=base3 + (("X4", _XEXP1), ("X5", _XEXP2), ("X6", _X7_POW_CONST)),
                  series=(6, 4, 0), series_printed=True,
                  derived_basis=({"X2": "1"}, {"X3": "1"}, {"X4": "1"}, {"X5": "1"}),
                  y_list=(_YP, _YS, _Y3_POW_QUAD)),
        CaseEntry("power", "power",
                  generators=base3 + (("X4", _X4_POW_POWER),),
                  series=(4, 3, 0), series_printed=True,
                  derived_basis=({"X1": "1"}, {"X2": "1"}, {"X3": "1"}),
                  y_list=(_YP, _YS, _Y3_POW_POWER)),
        CaseEntry("power", "exp",
                  generators=base3 + (("X4", _X4_POW_EXP),),
                  series=(4, 3, 0), series_printed=True,
                  derived_basis=({"X1": "1"}, {"X2": "1"}, {"X3": "1"}),
                  y_list=(_YP, _YS, _Y3_POW_EXP)),
        CaseEntry("power", "log",
                  generators=base3 + (("X4", _XSCALE),),
                  series=(4, 2, 0), series_printed=True,
                  derived_basis=({"X1": "1"}, {"X2": "1"}),
                  y_list=(_YP, _YS, _YPR)),
    ]
    return entries


_REGISTRY: list | None = None


def registry() -> list:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _entries()
    return _REGISTRY


def find_entries(zeta: str | None = None, h: str | None = None,
                 lam_sign: int | None = None) -> list:
    out = []
    for e in registry():
        if zeta and e.zeta != zeta:
            continue
        if h and e.h != h:
            continue
        if lam_sign is not None and e.h == "quadratic" and e.lam_sign != lam_sign:
            continue
        out.append(e)
    return out


# ---------------------------------------------------------------------------
# invariant tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantTable:
    """One invariant display: generator combo Z (for the flow tables),
    invariant expressions, invariant-derivative pairs (A, B) meaning
    A*D_t + B*D_a."""
    key: str
    zeta: str
    h: str
    kind: str                               # kinematic | navier_stokes
    invariants: tuple
    derivatives: tuple                      # ((A, B), ...)
    Z: dict | None = None                   # components of the xi-combination
    beta: Fraction | None = None            # special-value tables
    errata: tuple = ()                      # (description, printed_invariant)


# kinematic bases by lift class
KINEMATIC_TABLES = (
    InvariantTable(
        key="kin-free", zeta="*", h="any|power|exp|log", kind="kinematic",
        invariants=("a", "u", "rho", "s", "u_t", "u_a", "rho_a", "s_t", "s_a"),
        derivatives=(("1", "0"), ("0", "1")),
    ),
    InvariantTable(
        key="kin-translation", zeta="*", h="const|linear", kind="kinematic",
        invariants=("rho", "s", "u_a", "u_t + u*u_a", "rho_a", "s_a", "s_t + u*s_a"),
        derivatives=(("1", "u"), ("0", "1")),
    ),
    InvariantTable(
        key="kin-quadratic", zeta="*", h="quadratic", kind="kinematic",
        invariants=("rho", "s", "u_a", "u_t + u*u_a - 2*lambda*g*a",
                    "rho_a", "s_a", "s_t + u*s_a"),
        derivatives=(("1", "u"), ("0", "1")),
    ),
)

_E1 = ("third invariant printed with denominator rho; only the u_a "
       "denominator is annihilated by the temperature-scaling part",
       "(u_t + u*u_a - lambda*g)/rho")
_E2 = ("exponent printed as -(xi3+xi4)*(beta-1)/(...); the scaling weights "
       "require (xi4-xi3)*(beta-1)/(...)",
       "(u_t + u*u_a)*rho^(-(xi3+xi4)*(beta-1)/(xi3*(beta-1)+2*xi4*(2*beta-1)))")
_E3 = ("stray factor a printed in the entropy invariant; the shift "
       "direction makes any a-dependence non-invariant",
       "a*u*rho*(s - xi2*(beta-1)/(2*beta*xi3))")

NS_TABLES = (
    # ---- arbitrary viscosity ------------------------------------------------
    InvariantTable(
        key="ns-any-const", zeta="any", h="const", kind="navier_stokes",
        Z={"t": "xi3*t", "a": "xi3*a", "p": "xi1 - xi3*p",
           "rho": "-xi3*rho", "s": "xi2"},
        invariants=("s + (xi2/xi3)*ln(rho)", "u_a/rho", "(u_t + u*u_a)/rho",
                    "rho_a/rho^2", "s_a/rho", "(s_t + u*s_a)/rho"),
        derivatives=(("1/rho", "u/rho"), ("0", "1/rho")),
    ),
    InvariantTable(
        key="ns-any-linear", zeta="any", h="linear", kind="navier_stokes",
        Z={"t": "xi3*t", "a": "xi3*(lambda*g*t^2/2 + a)", "u": "xi3*lambda*g*t",
           "p": "xi1 - xi3*p", "rho": "-xi3*rho", "s": "xi2"},
        invariants=("s + (xi2/xi3)*ln(rho)", "u_a/rho",
                    "(u_t + u*u_a - lambda*g)/rho",
                    "rho_a/rho^2", "s_a/rho", "(s_t + u*s_a)/rho"),
        derivatives=(("1/rho", "u/rho"), ("0", "1/rho")),
    ),
    InvariantTable(
        key="ns-any-log", zeta="any", h="log", kind="navier_stokes",
        Z={"t": "xi3*t", "a": "xi3*a", "p": "xi1 - xi3*p",
           "rho": "-xi3*rho", "s": "xi2"},
        invariants=("s - (xi2/xi3)*ln(a)", "u", "a*rho", "a*u_t", "a*u_a",
                    "a^2*rho_a", "a*s_t", "a*s_a"),
        derivatives=(("1/rho", "0"), ("0", "1/rho")),
    ),
    # ---- viscosity linear in temperature ------------------------------------
    InvariantTable(
        key="ns-lin-any", zeta="linear", h="any", kind="navier_stokes",
        Z={"p": "xi1 + xi3*p", "rho": "xi3*rho", "s": "xi2 - xi3*s", "T": "xi3*T"},
        invariants=("a", "u", "(s - xi2/xi3)*rho", "u_t", "u_a",
                    "rho_a/rho", "rho*s_t", "rho*s_a"),
        derivatives=(("1", "0"), ("0", "1")),
    ),
    InvariantTable(
        key="ns-lin-const", zeta="linear", h="const", kind="navier_stokes",
        Z={"t": "xi4*t", "a": "xi4*a", "p": "xi1 + (xi3 - xi4)*p",
           "rho": "(xi3 - xi4)*rho", "s": "xi2 - xi3*s", "T": "xi3*T"},
        invariants=("(rho/u_a)*(s - xi2/xi3)", "u_a*rho^(xi4/(xi3-xi4))",
                    "(u_t + u*u_a)/u_a", "rho_a/(rho*u_a)",
                    "rho*s_a/u_a^2", "rho*(s_t + u*s_a)/u_a^2"),
        derivatives=(("rho^(xi4/(xi3-xi4))", "u*rho^(xi4/(xi3-xi4))"),
                     ("0", "rho^(xi4/(xi3-xi4))")),
    ),
    InvariantTable(
        key="ns-lin-linear", zeta="linear", h="linear", kind="navier_stokes",
        Z={"t": "xi4*t", "a": "xi4*(lambda*g*t^2/2 + a)", "u": "xi4*lambda*g*t",
           "p": "xi1 + (xi3 - xi4)*p", "rho": "(xi3 - xi4)*rho",
           "s": "xi2 - xi3*s", "T": "xi3*T"},
        invariants=("(rho/u_a)*(s - xi2/xi3)", "u_a*rho^(xi4/(xi3-xi4))",
                    "(u_t + u*u_a - lambda*g)/u_a",
                    "rho_a*(u_t + u*u_a - lambda*g)/(rho*u_a^2)",
                    "rho*s_a/u_a^2", "rho*(s_t + u*s_a)/u_a^2"),
        derivatives=(("rho^(xi4/(xi3-xi4))", "u*rho^(xi4/(xi3-xi4))"),
                     ("0", "rho^(xi4/(xi3-xi4))")),
        errata=(_E1,),
    ),
    InvariantTable(
        key="ns-lin-quadratic", zeta="linear", h="quadratic", kind="navier_stokes",
        Z={"p": "xi1 + xi3*p", "rho": "xi3*rho", "s": "xi2 - xi3*s", "T": "xi3*T"},
        invariants=("(s - xi2/xi3)*rho", "u_t + u*u_a - 2*lambda*g*a", "u_a",
                    "rho_a/rho", "rho*(s_t + u*s_a)", "rho*s_a"),
        derivatives=(("1", "u"), ("0", "1")),
    ),
    InvariantTable(
        key="ns-lin-log", zeta="linear", h="log", kind="navier_stokes",
        Z={"t": "xi4*t", "a": "xi4*a", "p": "xi1 + (xi3 - xi4)*p",
           "rho": "(xi3 - xi4)*rho", "s": "xi2 - xi3*s", "T": "xi3*T"},
        invariants=("u", "rho*a^(1 - xi3/xi4)", "a*rho*(s - xi2/xi3)",
                    "a*u_t", "a*u_a", "a*rho_a/rho", "a^2*rho*s_t", "a^2*rho*s_a"),
        derivatives=(("rho^(xi4/(xi3-xi4))", "0"), ("0", "rho^(xi4/(xi3-xi4))")),
    ),
    # ---- power-law viscosity -------------------------------------------------
    InvariantTable(
        key="ns-pow-const", zeta="power", h="const", kind="navier_stokes",
        Z={"t": "xi3*t", "a": "(xi3 + xi4)*a", "u": "xi4*u",
           "p": "xi1 - xi3*p - xi4*(2*beta/(beta-1))*p",
           "rho": "-xi3*rho - xi4*((4*beta-2)/(beta-1))*rho",
           "s": "xi2 + xi4*(2*beta/(beta-1))*s",
           "T": "-xi4*(2/(beta-1))*T"},
        invariants=(
            "(rho^3*u_a/rho_a^2)*(s + xi2*(beta-1)/(2*xi4*beta))",
            "u_a*rho^(-xi3*(beta-1)/(xi3*(beta-1)+2*xi4*(2*beta-1)))",
            "(u_t + u*u_a)*rho^((xi4-xi3)*(beta-1)/(xi3*(beta-1)+2*xi4*(2*beta-1)))",
            "rho_a*(u_t + u*u_a)/(rho*u_a^2)",
            "rho^4*u_a*s_a/rho_a^3",
            "rho^3*(s_t + u*s_a)/rho_a^2"),
        derivatives=(
            ("rho^(-xi3*(beta-1)/(xi3*(beta-1)+2*xi4*(2*beta-1)))",
             "u*rho^(-xi3*(beta-1)/(xi3*(beta-1)+2*xi4*(2*beta-1)))"),
            ("0", "rho^(-(xi3+xi4)*(beta-1)/(xi3*(beta-1)+2*xi4*(2*beta-1)))")),
        errata=(_E2,),
    ),
    InvariantTable(
        key="ns-pow-linear", zeta="power", h="linear", kind="navier_stokes",
        Z={"t": "(xi3 + xi4)*t", "a": "2*xi3*a + xi4*(lambda*g*t^2/2 + a)",
           "u": "xi3*u + xi4*lambda*g*t",
           "p": "xi1 - xi3*((3*beta-1)/(beta-1))*p - xi4*p",
           "rho": "-xi3*((5*beta-3)/(beta-1))*rho - xi4*rho",
           "s": "xi2 + xi3*(2*beta/(beta-1))*s",
           "T": "-xi3*(2/(beta-1))*T"},
        invariants=(
            "(rho^3*u_a/rho_a^2)*(s + xi2*(beta-1)/(2*xi3*beta))",
            "u_a*rho^(-(xi3+xi4)*(beta-1)/(xi3*(5*beta-3)+xi4*(beta-1)))",
            "(u_t + u*u_a - lambda*g)*rho^(-xi4*(beta-1)/(xi3*(5*beta-3)+xi4*(beta-1)))",
            "rho_a*(u_t + u*u_a - lambda*g)/(rho*u_a^2)",
            "rho^4*u_a*s_a/rho_a^3",
            "rho^3*(s_t + u*s_a)/rho_a^2"),
        derivatives=(
            ("rho^(-(xi3+xi4)*(beta-1)/(xi3*(5*beta-3)+xi4*(beta-1)))",
             "u*rho^(-(xi3+xi4)*(beta-1)/(xi3*(5*beta-3)+xi4*(beta-1)))"),
            ("0", "rho^(-(2*xi3+xi4)*(beta-1)/(xi3*(5*beta-3)+xi4*(beta-1)))")),
    ),
    InvariantTable(
        key="ns-pow-quadratic", zeta="power", h="quadratic", kind="navier_stokes",
        Z={"a": "xi3*a", "u": "xi3*u",
           "p": "xi1 - xi3*(2*beta/(beta-1))*p",
           "rho": "-xi3*((4*beta-2)/(beta-1))*rho",
           "s": "xi2 + xi3*(2*beta/(beta-1))*s",
           "T": "-xi3*(2/(beta-1))*T"},
        invariants=(
            "(rho^3*u_a/rho_a^2)*(s + xi2*(beta-1)/(2*xi3*beta))",
            "u_a",
            "(u_t + u*u_a - 2*lambda*g*a)*rho^((beta-1)/(2*(2*beta-1)))",
            "rho_a*(u_t + u*u_a - 2*lambda*g*a)/(rho*u_a^2)",
            "rho^4*u_a*s_a/rho_a^3",
            "rho^3*(s_t + u*s_a)/rho_a^2"),
        derivatives=(("1", "u"), ("0", "rho^(-(beta-1)/(2*(2*beta-1)))")),
    ),
    InvariantTable(
        key="ns-pow-quadratic-half", zeta="power", h="quadratic",
        kind="navier_stokes", beta=Fraction(1, 2),
        Z={"a": "xi3*a", "u": "xi3*u",
           "p": "xi1 - xi3*(2*beta/(beta-1))*p",
           "rho": "-xi3*((4*beta-2)/(beta-1))*rho",
           "s": "xi2 + xi3*(2*beta/(beta-1))*s",
           "T": "-xi3*(2/(beta-1))*T"},
        invariants=(
            "rho", "(2*xi3*s - xi2)/rho_a^2", "u_a",
            "rho_a*(u_t + u*u_a - 2*lambda*g*a)",
            "s_a/rho_a^3", "(s_t + u*s_a)/rho_a^2"),
        derivatives=(("1", "u"), ("0", "(xi2 - 2*xi3*s)^(-1/2)")),
    ),
    InvariantTable(
        key="ns-pow-power", zeta="power", h="power", kind="navier_stokes",
        Z={"t": "xi3*t", "a": "-xi3*(2*a)/(lambda2-2)",
           "u": "-xi3*(lambda2*u)/(lambda2-2)",
           "p": "xi1 + xi3*((lambda2*(beta+1)+2*(beta-1))/((beta-1)*(lambda2-2)))*p",
           "rho": "xi3*((lambda2*(3*beta-1)+2*(beta-1))/((beta-1)*(lambda2-2)))*rho",
           "s": "xi2 - xi3*((2*beta*lambda2)/((beta-1)*(lambda2-2)))*s",
           "T": "xi3*((2*lambda2)/((beta-1)*(lambda2-2)))*T"},
        invariants=(
            "u^2*a^(-lambda2)",
            "rho*u*a^(1 + lambda2*beta/(beta-1))",
            "a*u*rho*(s - xi2*(beta-1)*(lambda2-2)/(2*lambda2*beta*xi3))",
            "a*u_t/u^2", "a*u_a/u", "a*rho_a/rho",
            "a^2*rho*s_t", "a^2*u*rho*s_a"),
        derivatives=(
            ("rho^((lambda2-2)*(beta-1)/(lambda2*(3*beta-1)+2*(beta-1)))", "0"),
            ("0", "rho^(-2*(beta-1)/(lambda2*(3*beta-1)+2*(beta-1)))")),
    ),
    InvariantTable(
        key="ns-pow-exp", zeta="power", h="exp", kind="navier_stokes",
        Z={"t": "xi3*t", "a": "-xi3*2/lambda2", "u": "-xi3*u",
           "p": "xi1 + xi3*((beta+1)/(beta-1))*p",
           "rho": "xi3*((3*beta-1)/(beta-1))*rho",
           "s": "xi2 - xi3*(2*beta/(beta-1))*s",
           "T": "xi3*(2/(beta-1))*T"},
        invariants=(
            "u^2*exp(-lambda2*a)",
            "u*rho*exp(lambda2*beta*a/(beta-1))",
            "u*rho*(s - xi2*(beta-1)/(2*beta*xi3))",
            "u_t/u^2", "u_a/u", "rho_a/rho", "rho*s_t", "u*rho*s_a"),
        derivatives=(("rho^((beta-1)/(3*beta-1))", "0"), ("0", "1")),
        errata=(_E3,),
    ),
    InvariantTable(
        key="ns-pow-exp-third", zeta="power", h="exp", kind="navier_stokes",
        beta=Fraction(1, 3),
        Z={"t": "xi3*t", "a": "-xi3*2/lambda2", "u": "-xi3*u",
           "p": "xi1 + xi3*((beta+1)/(beta-1))*p",
           "rho": "xi3*((3*beta-1)/(beta-1))*rho",
           "s": "xi2 - xi3*(2*beta/(beta-1))*s",
           "T": "xi3*(2/(beta-1))*T"},
        invariants=(
            "u^2*exp(-lambda2*a)", "rho", "u*(s + xi2/xi3)",
            "u_t/u^2", "u_a/u", "rho_a", "s_t", "u*s_a"),
        derivatives=(("xi3*s + xi2", "0"), ("0", "1")),
    ),
    InvariantTable(
        key="ns-pow-log", zeta="power", h="log", kind="navier_stokes",
        Z={"t": "xi3*t", "a": "xi3*a", "p": "xi1 - xi3*p",
           "rho": "-xi3*rho", "s": "xi2"},
        invariants=("s - (xi2/xi3)*ln(a)", "u", "a*rho", "a*u_t", "a*u_a",
                    "a^2*rho_a", "a*s_t", "a*s_a"),
        derivatives=(("1/rho", "0"), ("0", "1/rho")),
    ),
)


def kinematic_table(h: str) -> InvariantTable:
    for t in KINEMATIC_TABLES:
        if h in t.h.split("|"):
            return t
    raise KeyError(h)


def ns_table(zeta: str, h: str, beta=None) -> InvariantTable:
    special = None
    generic = None
    for t in NS_TABLES:
        if t.zeta == zeta and t.h == h:
            if t.beta is not None:
                if beta is not None and Fraction(beta) == t.beta:
                    special = t
            else:
                generic = t
    if special is not None:
        return special
    if generic is None:
        raise KeyError(f"no flow-invariant table for ({zeta}, {h})")
    return generic
