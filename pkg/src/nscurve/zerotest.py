"""Randomized zero-test with exact fast path.

An expression is ProvenZero when its canonical numerator is the zero
polynomial (exact, covers everything rational in the transcendental
atoms).  Otherwise it is evaluated at random rational points drawn under
the Context assumptions; unspecified functions rotate through a test
family.  The tolerance is relative to a cancellation scale (the sum of
the magnitudes of the numerator terms over the denominator), so that a
residual of 1e-16 surviving from terms of size 1e3 still counts as zero
while a flipped sign shows up at unit scale.  Soundness is of
Schwartz-Zippel type: a nonzero rational function of the atoms vanishes
at 25 independent random points with negligible probability.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field

from . import canonical
from .expr import Context, EvalDomainError, Expr, eval_expr, free_symbols

PROVEN_ZERO = "ProvenZero"
NUMERICALLY_ZERO = "NumericallyZero"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"
NO_STATE = "NoState"

ZERO_VERDICTS = (PROVEN_ZERO, NUMERICALLY_ZERO)

DEFAULT_TOL = 1e-9
DEFAULT_POINTS = 25


def zero_tolerance() -> float:
    env = os.environ.get("NSCURVE_TOL")
    return float(env) if env else DEFAULT_TOL


@dataclass(frozen=True)
class Verdict:
    status: str
    residual: float = 0.0
    witness: dict | None = None
    note: str = ""
    samples: int = 0

    @property
    def is_zero(self) -> bool:
        return self.status in ZERO_VERDICTS

    def __str__(self):
        extra = f" residual={self.residual:.3e}" if self.status != PROVEN_ZERO else ""
        return f"{self.status}{extra}"


def worst(verdicts) -> Verdict:
    """Combine: any refutation dominates, then inconclusive, then numeric."""
    rank = {REFUTED: 3, INCONCLUSIVE: 2, NUMERICALLY_ZERO: 1, PROVEN_ZERO: 0}
    out = None
    for v in verdicts:
        if out is None or rank[v.status] > rank[out.status] or (
                rank[v.status] == rank[out.status] and v.residual > out.residual):
            out = v
    return out if out is not None else Verdict(PROVEN_ZERO)


def is_zero(e: Expr, ctx: Context, rng: random.Random | None = None,
            n_points: int = DEFAULT_POINTS, tol: float | None = None) -> Verdict:
    rf = canonical.to_rf(e)
    if not rf.num:
        return Verdict(PROVEN_ZERO)
    if tol is None:
        tol = zero_tolerance()
    rng = rng or random.Random(0)

    names = sorted(free_symbols(e))
    unknown = [n for n in names if not (ctx.knows(n))]
    if unknown:
        raise EvalDomainError(f"symbols without context registration: {unknown}")

    num_expr = canonical._poly_expr(rf.num)
    den_expr = canonical.den_value_expr(rf)
    term_exprs = [canonical._poly_expr({m: c}) for m, c in rf.num.items()]

    max_resid = 0.0
    failures = 0
    for i in range(n_points):
        point = None
        for _ in range(100):
            try:
                cand = {k: float(v) for k, v in ctx.sample(rng, names).items()}
                uf = ctx.family_cycle(i)
                den_val = eval_expr(den_expr, cand, uf)
                if den_val == 0.0:
                    raise EvalDomainError("denominator vanished at sample")
                num_val = eval_expr(num_expr, cand, uf)
                scale = sum(abs(eval_expr(t, cand, uf)) for t in term_exprs) / abs(den_val)
                point = cand
                break
            except EvalDomainError:
                failures += 1
                continue
        if point is None:
            return Verdict(INCONCLUSIVE, note=f"sampling failed after {failures} domain errors",
                           samples=i)
        resid = abs(num_val / den_val) / (1.0 + scale)
        if resid > tol:
            return Verdict(REFUTED, residual=resid, witness=point, samples=i + 1)
        max_resid = max(max_resid, resid)
    return Verdict(NUMERICALLY_ZERO, residual=max_resid, samples=n_points)
