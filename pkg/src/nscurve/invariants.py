"""Differential-invariant verification: annihilation by the prolonged
action, invariant derivatives, functional independence and pure-order
counts.

The geometric algebra of a cell is computed as the kernel of the
thermodynamic projection of its generators; the flow algebra adds the
xi-combination attached to the relevant invariant table.  An expression J
is accepted as invariant when, for every generator X, the restriction of
X^(2)(J) to the solution manifold tests zero (symbolically in the xi's
whenever the identity is rational in the atoms).
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .canonical import canonicalize
from .cases import CaseEntry, InvariantTable, kinematic_table, ns_table
from .expr import (Expr, add_, differentiate, div_, eval_expr, free_symbols,
                   mul_, sub_, substitute, sym, EvalDomainError)
from .jet import JetContext, PointVectorField, apply_field, parse_coord, prolong, total_derivative
from .lie import kernel_theta
from .ns_system import CaseSpec, solved_system
from .parser import parse
from .zerotest import INCONCLUSIVE, Verdict, is_zero, worst


def written_order(e: Expr) -> int:
    """Maximal jet order of the coordinates appearing in the expression."""
    best = 0
    for name in free_symbols(e):
        pc = parse_coord(name)
        if pc:
            best = max(best, pc[1] + pc[2])
    return best


def parse_in_case(case: CaseSpec, text: str, k: int = 3) -> Expr:
    return case.bind(parse(text, case.context(JetContext(k))))


def z_field(table: InvariantTable, entry: CaseEntry, bindings: tuple = ()) -> PointVectorField:
    case = CaseSpec(entry.zeta, entry.h, entry.lam_sign, bindings)
    ctx = case.context(JetContext(2))
    comps = {k: case.bind(parse(v, ctx)) for k, v in (table.Z or {}).items()}
    return PointVectorField.make(comps, "Z")


def algebra_for(entry: CaseEntry, kind: str, table: InvariantTable | None = None,
                bindings: tuple = ()) -> list:
    """kinematic: kernel of the projection; navier_stokes: kernel plus the
    table's xi-combination."""
    gm = kernel_theta(entry.fields(bindings))
    if kind == "kinematic":
        return gm
    if table is None:
        raise ValueError("flow-invariant checks need the table for Z")
    return gm + [z_field(table, entry, bindings)]


def check_annihilated(J: Expr, algebra, case: CaseSpec,
                      rng: random.Random | None = None, n_points: int = 25) -> Verdict:
    """All generators must kill J on the solution manifold."""
    sys = solved_system(case)
    ctx = case.context(JetContext(8))
    jc = JetContext(max(2, written_order(J)))
    rng = rng or random.Random(0)
    verdicts = []
    for X in algebra:
        e = sys.restrict(apply_field(prolong(X, jc.k, jc), J))
        verdicts.append(is_zero(e, ctx, rng, n_points=n_points))
    return worst(verdicts)


def check_invariant_derivative(pair, basis, algebra, case: CaseSpec,
                               rng: random.Random | None = None,
                               n_points: int = 25) -> Verdict:
    """The derivative A*D_t + B*D_a must map every basis invariant to an
    expression annihilated by the algebra."""
    A, B = pair
    rng = rng or random.Random(0)
    verdicts = []
    for J in basis:
        img = add_(mul_(A, total_derivative(J, "t", None)),
                   mul_(B, total_derivative(J, "a", None)))
        verdicts.append(check_annihilated(canonicalize(img), algebra, case,
                                          rng, n_points=n_points))
    return worst(verdicts)


def _free_columns(exprs, case: CaseSpec) -> list:
    ctx = case.context(JetContext(8))
    cols = set()
    for e in exprs:
        for name in free_symbols(e):
            if name in ctx.variables:
                cols.add(name)
    return sorted(cols)


def independence_rank(exprs, case: CaseSpec, n_points: int = 8,
                      rng: random.Random | None = None, tol: float = 1e-8) -> int:
    """Numeric rank of the Jacobian with respect to the free coordinates of
    the solution manifold, maximized over sampled regular points."""
    if not exprs:
        return 0
    rng = rng or random.Random(0)
    sys = solved_system(case)
    restricted = [sys.restrict(e) for e in exprs]
    cols = _free_columns(restricted, case)
    ctx = case.context(JetContext(8))
    grads = [[canonicalize(parse_in_case(case, "0")) for _ in cols] for _ in restricted]
    from .expr import differentiate
    for i, e in enumerate(restricted):
        for j, c in enumerate(cols):
            grads[i][j] = differentiate(e, c)
    names = sorted(set().union(*[free_symbols(e) for e in restricted])
                   | set().union(*[free_symbols(g) for row in grads for g in row]) | set(cols))
    names = [n for n in names if ctx.knows(n)]
    best = 0
    for trial in range(n_points):
        for _ in range(60):
            try:
                point = {k: float(v) for k, v in ctx.sample(rng, names).items()}
                uf = ctx.family_cycle(trial)
                mat = np.array([[eval_expr(g, point, uf) for g in row] for row in grads])
                break
            except EvalDomainError:
                continue
        else:
            continue
        if not np.all(np.isfinite(mat)):
            continue
        svals = np.linalg.svd(mat, compute_uv=False)
        if svals.size and svals[0] > 0:
            best = max(best, int(np.sum(svals > tol * svals[0])))
    return best


def basis_for(entry: CaseEntry, kind: str, beta=None):
    """(table, invariant Exprs, derivative pairs, bindings) for a cell."""
    if kind == "kinematic":
        table = kinematic_table(entry.h)
        bindings: tuple = ()
    else:
        table = ns_table(entry.zeta, entry.h, beta)
        bindings = (("beta", table.beta),) if table.beta is not None else ()
    case = CaseSpec(entry.zeta, entry.h, entry.lam_sign, bindings)
    invs = [parse_in_case(case, s) for s in table.invariants]
    derivs = [(parse_in_case(case, a), parse_in_case(case, b))
              for a, b in table.derivatives]
    return table, invs, derivs, bindings


class StateRestriction:
    """Coordinates of the full system manifold: a thermodynamic state is
    substituted (p, T become functions of rho and s), continuity is solved
    for rho_t, momentum for u_aa and energy for s_aa.  The remaining free
    jets are u and s derivatives with at most one a-mark plus pure
    a-derivatives of rho, which is the intrinsic jet filtration the
    pure-order counts live in (five new coordinates per order)."""

    def __init__(self, case: CaseSpec, chart_p: str = "rho^2*exp(s)",
                 chart_t: str = "rho*exp(s)"):
        from .ns_system import build_system
        from . import canonical

        self.case = case
        ctx = case.context(JetContext(4))
        state = {"p": parse(chart_p, ctx), "T": parse(chart_t, ctx)}
        self.rhs = {}
        self._memo: dict = {}
        leads = {"u": "u_aa", "rho": "rho_t", "s": "s_aa"}
        for f, dep in zip(build_system(case), ("u", "rho", "s")):
            fl = canonical.canonicalize(self._spread_state(f, state))
            lead = leads[dep]
            c = differentiate(fl, lead)
            self.rhs[dep] = canonical.canonicalize(
                sub_(parse(lead, ctx), div_(fl, c)))
        self.state = state

    @staticmethod
    def _spread_state(e: Expr, state: dict) -> Expr:
        """Replace p, T and every derivative coordinate of them by total
        derivatives of the state functions."""
        bindings = {}
        todo = True
        while todo:
            todo = False
            bindings = {}
            for name in free_symbols(e):
                pc = parse_coord(name)
                if pc and pc[0] in ("p", "T"):
                    expr = state[pc[0]]
                    for _ in range(pc[1]):
                        expr = total_derivative(expr, "t", None)
                    for _ in range(pc[2]):
                        expr = total_derivative(expr, "a", None)
                    bindings[name] = expr
            if bindings:
                e = substitute(e, bindings)
                todo = any(parse_coord(n) and parse_coord(n)[0] in ("p", "T")
                           for n in free_symbols(e))
        return e

    def _eliminated(self, name: str):
        pc = parse_coord(name)
        if pc is None:
            return None
        dep, nt, na = pc
        if dep == "rho" and nt >= 1:
            return (dep, nt, na)
        if dep in ("u", "s") and na >= 2:
            return (dep, nt, na)
        return None

    def _solved(self, dep: str, nt: int, na: int) -> Expr:
        key = (dep, nt, na)
        got = self._memo.get(key)
        if got is not None:
            return got
        from . import canonical
        if dep == "rho":
            e = self.rhs["rho"]
            base_nt = 1
            e = self._chain(e, nt - 1, na)
        else:
            e = self.rhs[dep]
            e = self._chain(e, nt, na - 2)
        e = canonical.canonicalize(e)
        self._memo[key] = e
        return e

    def _chain(self, e: Expr, nt: int, na: int) -> Expr:
        for _ in range(na):
            e = self.restrict(total_derivative(e, "a", None))
        for _ in range(nt):
            e = self.restrict(total_derivative(e, "t", None))
        return e

    def restrict(self, e: Expr) -> Expr:
        from . import canonical
        e = self._spread_state(e, self.state)
        for _ in range(40):
            bindings = {}
            for name in free_symbols(e):
                tgt = self._eliminated(name)
                if tgt:
                    bindings[name] = self._solved(*tgt)
            if not bindings:
                return canonical.canonicalize(e)
            e = substitute(e, bindings)
        raise RuntimeError("state restriction did not reach a fixed point")

    def free_names(self, exprs) -> list:
        ctx = self.case.context(JetContext(8))
        out = set()
        for e in exprs:
            for n in free_symbols(e):
                if n in ctx.variables and self._eliminated(n) is None:
                    pc = parse_coord(n)
                    if pc is None or pc[0] not in ("p", "T"):
                        out.add(n)
        return sorted(out)


def _state_rank(exprs, sr: StateRestriction, case: CaseSpec,
                n_points: int = 8, rng: random.Random | None = None,
                tol: float = 1e-8) -> int:
    if not exprs:
        return 0
    rng = rng or random.Random(0)
    restricted = [sr.restrict(e) for e in exprs]
    cols = sr.free_names(restricted)
    ctx = case.context(JetContext(8))
    from .expr import differentiate
    grads = [[differentiate(e, c) for c in cols] for e in restricted]
    names = set(cols)
    for row in grads:
        for g in row:
            names |= {n for n in free_symbols(g) if ctx.knows(n)}
    for e in restricted:
        names |= {n for n in free_symbols(e) if ctx.knows(n)}
    names = sorted(names)
    best = 0
    for trial in range(n_points):
        for _ in range(60):
            try:
                point = {k: float(v) for k, v in ctx.sample(rng, names).items()}
                uf = ctx.family_cycle(trial)
                mat = np.array([[eval_expr(g, point, uf) for g in row] for row in grads])
                break
            except EvalDomainError:
                continue
        else:
            continue
        if not np.all(np.isfinite(mat)):
            continue
        svals = np.linalg.svd(mat, compute_uv=False)
        if svals.size and svals[0] > 0:
            best = max(best, int(np.sum(svals > tol * svals[0])))
    return best


def pure_order_count(entry: CaseEntry, k: int, rng: random.Random | None = None) -> int:
    """Independent kinematic invariants of pure order k on the full system
    manifold (state substituted), from the invariant-derivative closure of
    the basis."""
    table, invs, derivs, bindings = basis_for(entry, "kinematic")
    case = CaseSpec(entry.zeta, entry.h, entry.lam_sign, bindings)
    rng = rng or random.Random(0)
    candidates = list(invs)
    for A, B in derivs:
        for J in invs:
            candidates.append(canonicalize(add_(
                mul_(A, total_derivative(J, "t", None)),
                mul_(B, total_derivative(J, "a", None)))))
    buckets = {}
    for c in candidates:
        buckets.setdefault(written_order(c), []).append(c)
    upto = lambda n: [c for o, cs in buckets.items() if o <= n for c in cs]
    sr = StateRestriction(case)
    hi = _state_rank(upto(k), sr, case, rng=rng)
    lo = _state_rank(upto(k - 1), sr, case, rng=rng)
    return hi - lo
