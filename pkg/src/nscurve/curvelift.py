"""Numeric verification of the lifting relations and generation of lifted
space curves.

A space curve is a plane curve (x(tau), y(tau)) plus a lifting function
z(tau).  Natural parameterization of the space curve forces
(dl/da)^2 + h'(a)^2 = 1 along the lift z = h(a), so the plane arclength is
l(a) = integral of sqrt(1 - h'(theta)^2).  For every lift shape there is a
closed form G with G(h(a)) = sign * c * l(a) + const; the relations are
verified against the quadrature oracle up to that additive constant (the
closed forms are stated without integration constants).

Numeric kernels are deliberately boring: adaptive Simpson quadrature with
interval bisection (1e-10 absolute) and bisection root-finding on the
monotone branch (1e-10), plus a direct Gauss series for the one
hypergeometric closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

QUAD_TOL = 1e-10
ROOT_TOL = 1e-10


class DomainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# quadrature and root finding
# ---------------------------------------------------------------------------

def _simpson(f, a, b, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = QUAD_TOL, max_depth: int = 48) -> float:
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(f, a, b, fa, fm, fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = _simpson(f, a, m, fa, flm, fm)
        right = _simpson(f, m, b, fm, frm, fb)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (rec(a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
                + rec(m, b, fm, frm, fb, right, tol / 2.0, depth + 1))

    return rec(a, b, fa, fm, fb, whole, tol, 0)


def bisect(f: Callable[[float], float], lo: float, hi: float,
           tol: float = ROOT_TOL, max_iter: int = 200) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise DomainError(f"root not bracketed on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# hypergeometric series
# ---------------------------------------------------------------------------

def hyp2f1(a: float, b: float, c: float, x: float, rtol: float = 1e-12,
           max_terms: int = 100000) -> float:
    """Gauss series with term-ratio recurrence; |x| < 1."""
    if abs(x) >= 1.0:
        raise DomainError(f"series domain |x| < 1, got {x}")
    total = 1.0
    term = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        total += term
        if abs(term) <= rtol * abs(total):
            return total
    raise DomainError("hypergeometric series did not converge")


# ---------------------------------------------------------------------------
# lift shapes
# ---------------------------------------------------------------------------

def h_funcs(shape: str, params: dict):
    """(h, h') callables for a lift shape."""
    lam = params.get("lam", 1.0)
    lam1 = params.get("lam1", 1.0)
    lam2 = params.get("lam2", 1.0)
    const = params.get("const", 0.0)
    if shape == "const":
        return (lambda a: const), (lambda a: 0.0)
    if shape == "linear":
        return (lambda a: lam * a), (lambda a: lam)
    if shape == "quadratic":
        return (lambda a: lam * a * a), (lambda a: 2.0 * lam * a)
    if shape == "power":
        return (lambda a: lam1 * a ** lam2), (lambda a: lam1 * lam2 * a ** (lam2 - 1.0))
    if shape == "exp":
        return (lambda a: lam1 * math.exp(lam2 * a)), \
               (lambda a: lam1 * lam2 * math.exp(lam2 * a))
    if shape == "log":
        return (lambda a: math.log(a)), (lambda a: 1.0 / a)
    raise DomainError(f"unknown lift shape {shape}")


def arclength_l_of_a(shape: str, params: dict, a: float, a0: float = 0.0) -> float:
    """Plane arclength from the natural parameterization constraint,
    l(a) = integral sqrt(1 - h'(theta)^2); requires |h'| <= 1 throughout."""
    _, hp = h_funcs(shape, params)
    lo, hi = min(a0, a), max(a0, a)
    for theta in (lo + (hi - lo) * i / 64.0 for i in range(65)):
        v = hp(theta)
        if abs(v) > 1.0 + 1e-12:
            raise DomainError(f"|h'({theta})| = {abs(v)} > 1: no natural parameterization")

    def f(theta):
        v = 1.0 - hp(theta) ** 2
        return math.sqrt(max(v, 0.0))

    sign = 1.0 if a >= a0 else -1.0
    return sign * adaptive_simpson(f, lo, hi)


@dataclass(frozen=True)
class LiftRelation:
    """Closed form G(z) = sign * c * l + const for one lift shape."""
    shape: str
    G: Callable[[float, dict], float]
    c: Callable[[dict], float]
    z_range: Callable[[dict], tuple]     # open/closed branch interval for z
    domain_note: str = ""

    def residual_scale(self, params: dict) -> float:
        return max(abs(self.c(params)), 1.0)


def _g_linear(z, params):
    return z


def _c_linear(params):
    lam = params["lam"]
    if lam * lam >= 1.0:
        raise DomainError("linear lift needs lam^2 < 1")
    return lam / math.sqrt(1.0 - lam * lam)


def _g_quadratic(z, params):
    lam = params["lam"]
    w = 4.0 * lam * z
    if w < -1e-14 or w > 1.0 + 1e-14:
        raise DomainError(f"4*lam*z = {w} outside [0, 1]")
    w = min(max(w, 0.0), 1.0)
    return math.sqrt(w * (1.0 - w)) - math.acos(math.sqrt(w))


def _g_power_11_3(z, params):
    # closed form for the exponent-11/3 unit-coefficient lift
    x = (121.0 / 9.0) * z ** (16.0 / 11.0)
    return z ** (3.0 / 11.0) * hyp2f1(-0.5, 3.0 / 16.0, 19.0 / 16.0, x)


def _g_exp(z, params):
    lam2 = params["lam2"]
    w = lam2 * lam2 * z * z
    if w > 1.0 or z == 0.0:
        raise DomainError(f"lam2^2 z^2 = {w} must stay in (0, 1]")
    q = math.sqrt(max(1.0 - w, 0.0))
    # (1+q)/(1-q) = (1+q)^2/(lam2 z)^2, stable as z -> 0 where G -> -inf
    return q - math.log((1.0 + q) / abs(lam2 * z))


def _g_log(z, params):
    w = math.exp(2.0 * z) - 1.0
    if w < 0:
        raise DomainError("log lift needs z >= 0")
    r = math.sqrt(w)
    return r - math.atan(r)


RELATIONS = {
    "const": LiftRelation("const", lambda z, p: 0.0, lambda p: 0.0,
                          lambda p: (-math.inf, math.inf),
                          "translation: z is constant"),
    "linear": LiftRelation("linear", _g_linear, _c_linear,
                           lambda p: (-math.inf, math.inf),
                           "lift proportional to plane length, lam^2 < 1"),
    "quadratic": LiftRelation("quadratic", _g_quadratic,
                              lambda p: 4.0 * p["lam"],
                              lambda p: (0.0, 1.0 / (4.0 * p["lam"])) if p["lam"] > 0
                              else (1.0 / (4.0 * p["lam"]), 0.0),
                              "4*lam*z in [0, 1]"),
    "power": LiftRelation("power", _g_power_11_3, lambda p: 1.0,
                          lambda p: (0.0, (9.0 / 121.0) ** (11.0 / 16.0)),
                          "closed form for lam1=1, lam2=11/3; general power "
                          "lifts go through the quadrature + root-finding path"),
    "exp": LiftRelation("exp", _g_exp, lambda p: p["lam2"],
                        lambda p: (0.0, 1.0 / abs(p["lam2"])),
                        "lam2^2 z^2 < 1; lower branch bound z = 0 is never attained"),
    "log": LiftRelation("log", _g_log, lambda p: 1.0,
                        lambda p: (0.0, math.inf),
                        "z >= 0, i.e. a >= 1"),
}


def relation_residual(shape: str, params: dict, a: float, a0: float,
                      sign: float = 1.0) -> float:
    """| [G(h(a)) - G(h(a0))] - sign*c*[l(a) - l(a0)] |, the constant-aligned
    form of the closed relation, with l from the quadrature oracle."""
    rel = RELATIONS[shape]
    h, _ = h_funcs(shape, params)
    dG = rel.G(h(a), params) - rel.G(h(a0), params)
    dl = arclength_l_of_a(shape, params, a, a0)
    return abs(dG - sign * rel.c(params) * dl)


def derivative_identity_residual(shape: str, params: dict, a: float,
                                 sign: float = 1.0, step: float = 1e-6) -> float:
    """|d/da G(h(a)) - sign*c*sqrt(1 - h'(a)^2)| via centered differences,
    the constant-free form of the relation."""
    rel = RELATIONS[shape]
    h, hp = h_funcs(shape, params)
    g = lambda x: rel.G(h(x), params)
    fd = (g(a + step) - g(a - step)) / (2.0 * step)
    return abs(fd - sign * rel.c(params) * math.sqrt(max(1.0 - hp(a) ** 2, 0.0)))


# ---------------------------------------------------------------------------
# plane curves and lifting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaneCurve:
    """Parametric plane curve with consistent derivative sampler."""
    point: Callable[[float], tuple]
    velocity: Callable[[float], tuple]
    t0: float
    t1: float
    name: str = ""

    def check_consistency(self, n: int = 17, tol: float = 1e-6) -> float:
        worst = 0.0
        h = 1e-7
        for i in range(1, n):
            tau = self.t0 + (self.t1 - self.t0) * i / n
            x1, y1 = self.point(tau - h)
            x2, y2 = self.point(tau + h)
            vx, vy = self.velocity(tau)
            worst = max(worst, abs((x2 - x1) / (2 * h) - vx), abs((y2 - y1) / (2 * h) - vy))
        if worst > tol:
            raise DomainError(f"velocity sampler off by {worst}")
        return worst

    def speed(self, tau: float) -> float:
        vx, vy = self.velocity(tau)
        return math.hypot(vx, vy)

    def arclength(self, tau: float) -> float:
        return adaptive_simpson(self.speed, self.t0, tau)


def unit_circle() -> PlaneCurve:
    return PlaneCurve(
        point=lambda t: (math.cos(t), math.sin(t)),
        velocity=lambda t: (-math.sin(t), math.cos(t)),
        t0=0.0, t1=2.0 * math.pi, name="circle")


def plane_curve(name: str) -> PlaneCurve:
    if name == "circle":
        return unit_circle()
    if name == "line":
        return PlaneCurve(point=lambda t: (t, 0.0), velocity=lambda t: (1.0, 0.0),
                          t0=0.0, t1=4.0, name="line")
    raise DomainError(f"unknown plane curve {name}")


def solve_z(shape: str, params: dict, target: float) -> float:
    """Invert G(z) = target by bisection on the monotone branch."""
    rel = RELATIONS[shape]
    zlo, zhi = rel.z_range(params)
    lo = zlo if math.isfinite(zlo) else None
    hi = zhi if math.isfinite(zhi) else None
    if hi is None:
        # grow until the target is bracketed (G monotone increasing)
        hi = (lo if lo is not None else 0.0) + 1.0
        for _ in range(200):
            if rel.G(hi, params) >= target:
                break
            hi *= 2.0
    if lo is None:
        lo = hi - 1.0
        for _ in range(200):
            if rel.G(lo, params) <= target:
                break
            lo -= 2.0 * abs(lo) + 1.0
    # move inward past open endpoints where G is singular
    glo = ghi = None
    for _ in range(300):
        try:
            glo = rel.G(lo, params)
            break
        except (DomainError, ValueError, OverflowError, ZeroDivisionError):
            lo = lo + (hi - lo) * 1e-3
    for _ in range(300):
        try:
            ghi = rel.G(hi, params)
            break
        except (DomainError, ValueError, OverflowError, ZeroDivisionError):
            hi = hi - (hi - lo) * 1e-3
    if glo is None or ghi is None:
        raise DomainError(f"cannot evaluate the {shape} relation near its branch ends")
    scale = max(1.0, abs(target))
    if glo - target >= 0:
        if glo - target <= 1e-8 * scale:
            return lo
        raise DomainError(f"target {target} below the branch of {shape}")
    if ghi - target <= 0:
        if target - ghi <= 1e-8 * scale:
            return hi
        raise DomainError(f"target {target} above the branch of {shape}")
    return bisect(lambda z: rel.G(z, params) - target, lo, hi, ROOT_TOL)


def lift_curve(plane: PlaneCurve, shape: str, params: dict, n_samples: int,
               sign: float = 1.0, z_start: float | None = None) -> list:
    """Sample the plane curve, accumulate its arclength and solve the lift
    relation for z; rows are (tau, x, y, z, l)."""
    plane.check_consistency()
    rel = RELATIONS[shape]
    if shape == "const":
        const = params.get("const", 0.0)
        rows = []
        for i in range(n_samples):
            tau = plane.t0 + (plane.t1 - plane.t0) * i / max(n_samples - 1, 1)
            x, y = plane.point(tau)
            rows.append((tau, x, y, const, plane.arclength(tau)))
        return rows
    if z_start is None:
        zlo, zhi = rel.z_range(params)
        if shape == "exp":
            z_start = params.get("lam1", 1.0)
        elif math.isfinite(zlo):
            z_start = zlo if shape != "quadratic" else 0.0
        else:
            z_start = 0.0
    g0 = rel.G(z_start, params) if shape != "log" or z_start > 0 else rel.G(0.0, params)
    rows = []
    total = 0.0
    prev_tau = plane.t0
    for i in range(n_samples):
        tau = plane.t0 + (plane.t1 - plane.t0) * i / max(n_samples - 1, 1)
        total += adaptive_simpson(plane.speed, prev_tau, tau)
        prev_tau = tau
        x, y = plane.point(tau)
        z = solve_z(shape, params, g0 + sign * rel.c(params) * total)
        rows.append((tau, x, y, z, total))
    return rows


def write_csv(rows, path: str) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["tau", "x", "y", "z", "l"])
        for r in rows:
            w.writerow([f"{v:.12g}" for v in r])
