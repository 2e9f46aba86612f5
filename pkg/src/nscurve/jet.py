"""Jet coordinates, total derivatives and prolongation of point vector
fields.

Base space: independents (t, a), dependents (u, p, rho, s, T).  Derivative
coordinates are symbols named dep_<t..><a..> with the t-marks first
(u_ta, never u_at), so the whole expression engine applies unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .expr import (
    Context, Expr, ExprError, MINUS_ONE, POSITIVE, Sym, ZERO,
    add_, differentiate, free_symbols, mul_, sym,
)

INDEPS = ("t", "a")
DEPS = ("u", "p", "rho", "s", "T")
BASE_VARS = INDEPS + DEPS


class OrderOverflowError(ExprError):
    """A total derivative needed a coordinate beyond the context order."""


def coord_name(dep: str, nt: int, na: int) -> str:
    if nt == 0 and na == 0:
        return dep
    return f"{dep}_{'t' * nt}{'a' * na}"


@lru_cache(maxsize=None)
def parse_coord(name: str):
    """Return (dep, nt, na) when `name` is a jet coordinate, else None."""
    if name in DEPS:
        return (name, 0, 0)
    if "_" not in name:
        return None
    dep, _, marks = name.partition("_")
    if dep not in DEPS or not marks:
        return None
    nt = 0
    i = 0
    while i < len(marks) and marks[i] == "t":
        nt += 1
        i += 1
    na = len(marks) - i
    if marks[i:] != "a" * na:
        return None
    return (dep, nt, na)


@dataclass(frozen=True)
class JetContext:
    """Coordinates of order <= k; k=0 is the base space."""
    k: int = 2

    def coords(self, min_order: int = 0):
        out = []
        for order in range(min_order, self.k + 1):
            for nt in range(order, -1, -1):
                na = order - nt
                for dep in DEPS:
                    out.append(coord_name(dep, nt, na))
        return out

    def extend(self, k: int) -> "JetContext":
        return JetContext(max(k, self.k))

    def context(self, base: Context) -> Context:
        """Expression context with every coordinate registered as a variable."""
        return base.with_variables(INDEPS + tuple(self.coords()))


def total_derivative(e: Expr, direction: str, jc: JetContext | None = None) -> Expr:
    """D_dir e = de/d(dir) + sum over coordinates u_J of u_{J,dir} * de/du_J.

    With a JetContext given, raises OrderOverflowError when the result needs
    a coordinate beyond jc.k; jc=None lifts the order check (used by the
    restriction machinery, which controls growth itself)."""
    if direction not in INDEPS:
        raise ExprError(f"total derivative direction must be t or a, not {direction}")
    parts = [differentiate(e, direction)]
    for name in free_symbols(e):
        pc = parse_coord(name)
        if pc is None:
            continue
        de = differentiate(e, name)
        if isinstance(de, type(ZERO)) and de == ZERO:
            continue
        dep, nt, na = pc
        if direction == "t":
            succ = coord_name(dep, nt + 1, na)
            order = nt + na + 1
        else:
            succ = coord_name(dep, nt, na + 1)
            order = nt + na + 1
        if jc is not None and order > jc.k:
            raise OrderOverflowError(
                f"needs coordinate {succ} of order {order} > context order {jc.k}")
        parts.append(mul_(sym(succ), de))
    from .canonical import canonicalize
    return canonicalize(add_(*parts))


@dataclass(frozen=True)
class PointVectorField:
    """Vector field on the base space; coefficient expressions must not
    involve derivative coordinates."""
    coeffs: tuple  # tuple of (var, Expr) pairs over BASE_VARS, zeros omitted
    name: str = ""

    @staticmethod
    def make(coeffs: dict, name: str = "") -> "PointVectorField":
        items = []
        for var, e in coeffs.items():
            if var not in BASE_VARS:
                raise ExprError(f"unknown base variable {var}")
            for s in free_symbols(e):
                if parse_coord(s) and parse_coord(s)[1] + parse_coord(s)[2] > 0:
                    raise ExprError(f"coefficient of {var} involves jet coordinate {s}")
            if not (e == ZERO):
                items.append((var, e))
        items.sort(key=lambda it: BASE_VARS.index(it[0]))
        return PointVectorField(tuple(items), name)

    def coeff(self, var: str) -> Expr:
        for v, e in self.coeffs:
            if v == var:
                return e
        return ZERO

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __str__(self):
        from .expr import render
        parts = [f"({render(e)}) d/d{v}" for v, e in self.coeffs]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ProlongedVectorField:
    base: PointVectorField
    k: int
    coeffs: tuple  # ((coordinate name, Expr), ...) including base variables

    def coeff(self, name: str) -> Expr:
        return dict(self.coeffs).get(name, ZERO)


def prolong(X: PointVectorField, k: int, jc: JetContext | None = None) -> ProlongedVectorField:
    """Standard prolongation: phi_{J,i} = D_i(phi_J) - sum_j u_{J,j} D_i(xi^j)."""
    from .canonical import canonicalize

    xi = {d: X.coeff(d) for d in INDEPS}
    phis: dict[str, Expr] = {d: X.coeff(d) for d in INDEPS}
    table: dict[tuple, Expr] = {}
    for dep in DEPS:
        table[(dep, 0, 0)] = X.coeff(dep)
        phis[dep] = X.coeff(dep)
    for order in range(1, k + 1):
        for nt in range(order, -1, -1):
            na = order - nt
            if nt > 0:
                parent, dirn = (nt - 1, na), "t"
            else:
                parent, dirn = (nt, na - 1), "a"
            for dep in DEPS:
                phi_parent = table[(dep, *parent)]
                parts = [total_derivative(phi_parent, dirn, None)]
                for dj in INDEPS:
                    dxi = total_derivative(xi[dj], dirn, None)
                    if dxi == ZERO:
                        continue
                    succ = coord_name(dep,
                                      parent[0] + (1 if dj == "t" else 0),
                                      parent[1] + (1 if dj == "a" else 0))
                    parts.append(mul_(MINUS_ONE, sym(succ), dxi))
                phi = canonicalize(add_(*parts))
                name = coord_name(dep, nt, na)
                table[(dep, nt, na)] = phi
                phis[name] = phi
    return ProlongedVectorField(X, k, tuple(sorted(phis.items())))


def apply_field(Xp: ProlongedVectorField, e: Expr) -> Expr:
    """Directional derivative sum coeff * de/dcoordinate, canonicalized."""
    from .canonical import canonicalize

    coeffs = dict(Xp.coeffs)
    parts = []
    for name in free_symbols(e):
        pc = parse_coord(name)
        if pc is not None and pc[1] + pc[2] > Xp.k:
            raise OrderOverflowError(
                f"{name} has order {pc[1] + pc[2]} beyond prolongation order {Xp.k}")
        c = coeffs.get(name)
        if c is None or c == ZERO:
            continue
        de = differentiate(e, name)
        if de == ZERO:
            continue
        parts.append(mul_(c, de))
    return canonicalize(add_(*parts))


def base_context() -> Context:
    """Context over the base variables with the physical sign assumptions."""
    return Context(
        variables=BASE_VARS,
        assumptions={"rho": POSITIVE, "T": POSITIVE},
    )
