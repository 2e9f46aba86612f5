"""Verification runners and machine-readable reports.

Each runner walks the case registry, performs the checks of one section of
the verification matrix and appends uniform records:
{id, case, kind, verdict, residual, runtime_ms}.  Per-check random streams
are derived from the global seed and the check id, so verdicts and
residuals are reproducible run to run; `Report.fingerprint()` is the
byte-stable view with the wall-clock fields zeroed.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .canonical import canonicalize
from .cases import CaseEntry, find_entries, kinematic_table, ns_table, NS_TABLES
from .expr import add_, mul_, render
from .invariants import (
    algebra_for, basis_for, check_annihilated, check_invariant_derivative,
    independence_rank, parse_in_case, pure_order_count, written_order, z_field,
)
from .jet import JetContext, PointVectorField
from .lie import (
    antisymmetry_holds, bracket, closure_holds, derived_series, is_solvable,
    jacobi_verdict, kernel_theta, span_equal, span_rank, theta,
    theta_homomorphism_verdict, THERMO_VARS,
)
from .ns_system import CaseSpec, is_symmetry, sign_variant_sweep
from .parser import parse
from .thermo import (
    NoState, chart_library, check_admissible, kappa_form, lagrangian_verdict,
    state_library, tangency, thermo_context,
)
from .zerotest import (
    INCONCLUSIVE, NO_STATE, NUMERICALLY_ZERO, PROVEN_ZERO, REFUTED, Verdict,
)
from . import curvelift

SOUNDNESS_NOTE = (
    "zero verdicts are exact when the canonical numerator vanishes; otherwise "
    "they are randomized polynomial-identity tests at 25 rational points with "
    "relative tolerance 1e-9, sound in the Schwartz-Zippel sense")


def _check_rng(seed: int, check_id: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{check_id}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


@dataclass
class Report:
    seed: int
    checks: list = field(default_factory=list)

    def add(self, check_id: str, case_id: str, kind: str, verdict,
            runtime_ms: float, note: str = "") -> None:
        if isinstance(verdict, Verdict):
            status = verdict.status
            residual = verdict.residual
            note = note or verdict.note
        else:
            status = verdict
            residual = 0.0
        self.checks.append({
            "id": check_id,
            "case": case_id,
            "kind": kind,
            "verdict": status,
            "residual": residual,
            "runtime_ms": int(round(runtime_ms)),
            **({"note": note} if note else {}),
        })

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def summary(self) -> dict:
        passing = sum(1 for c in self.checks
                      if c["verdict"] in (PROVEN_ZERO, NUMERICALLY_ZERO, NO_STATE))
        fail = sum(1 for c in self.checks if c["verdict"] == REFUTED)
        inconclusive = sum(1 for c in self.checks if c["verdict"] == INCONCLUSIVE)
        return {"pass": passing, "fail": fail, "inconclusive": inconclusive}

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "seed": self.seed,
            "soundness": SOUNDNESS_NOTE,
            "checks": self.checks,
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def fingerprint(self) -> str:
        """Stable digest of everything except wall-clock timings."""
        d = self.to_dict()
        for c in d["checks"]:
            c["runtime_ms"] = 0
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()

    @property
    def exit_code(self) -> int:
        s = self.summary
        return 0 if s["fail"] == 0 and s["inconclusive"] == 0 else 1


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1000.0


def _perturbed(entry: CaseEntry, fields) -> PointVectorField:
    """Deterministic negative control: nudge the last generator by a
    coefficient the cell's algebra cannot contain."""
    case = entry.case
    ctx = case.context(JetContext(2))
    base = fields[-1].as_dict()
    bump = parse("a", ctx) if entry.h != "any" else parse("u", ctx)
    comps = dict(base)
    comps["u"] = add_(comps.get("u", parse("0", ctx)), bump)
    return PointVectorField.make(comps, fields[-1].name + "+a*du")


def run_verify(zeta=None, h=None, lam_sign=None, bindings: tuple = (),
               seed: int = 0, n_points: int = 25,
               with_structure: bool = True) -> Report:
    """Symmetry verdicts, closure, derived series, solvability and the
    thermodynamic projection for every selected cell."""
    rep = Report(seed)
    for entry in find_entries(zeta, h, lam_sign):
        cid = entry.id
        case = CaseSpec(entry.zeta, entry.h, entry.lam_sign, bindings)
        fields = entry.fields(bindings)
        for X in fields:
            rng = _check_rng(seed, f"{cid}/sym/{X.name}")
            v, ms = _timed(lambda: is_symmetry(X, case, rng, n_points=n_points))
            rep.add(f"{cid}/sym/{X.name}", cid, "symmetry", v, ms)
        rng = _check_rng(seed, f"{cid}/control")
        Xbad = _perturbed(entry, fields)
        v, ms = _timed(lambda: is_symmetry(Xbad, case, rng, n_points=n_points))
        ok = REFUTED if v.status == REFUTED else REFUTED + "-missing"
        rep.add(f"{cid}/control", cid, "negative_control",
                Verdict(PROVEN_ZERO if v.status == REFUTED else REFUTED,
                        residual=v.residual,
                        note=f"perturbed {Xbad.name} is {v.status}"), ms)
        if not with_structure:
            continue
        v, ms = _timed(lambda: closure_holds(fields))
        rep.add(f"{cid}/closure", cid, "closure",
                PROVEN_ZERO if v else REFUTED, ms)
        dims, ms = _timed(lambda: derived_series(fields))
        expected = list(entry.series) if entry.series else None
        status = PROVEN_ZERO if (expected is None or dims == expected) else REFUTED
        rep.add(f"{cid}/derived", cid, "derived_series", status, ms,
                note=f"dims={dims}" + (f" expected={expected}" if expected else ""))
        rep.add(f"{cid}/solvable", cid, "solvable",
                PROVEN_ZERO if is_solvable(dims) else REFUTED, 0.0,
                note="solvable" if is_solvable(dims) else "series stabilized above 0")
        if entry.derived_basis:
            from .lie import derived_subalgebra
            def _basis_check():
                printed = entry.combo_fields(entry.derived_basis, fields, bindings)
                return span_equal(derived_subalgebra(fields), printed)
            v, ms = _timed(_basis_check)
            rep.add(f"{cid}/derived-basis", cid, "derived_basis",
                    PROVEN_ZERO if v else REFUTED, ms)
        def _theta_check():
            images = [theta(X) for X in fields]
            images = [im for im in images if not im.is_zero_field]
            return span_equal(images, entry.y_fields(bindings), THERMO_VARS)
        v, ms = _timed(_theta_check)
        rep.add(f"{cid}/theta-span", cid, "theta_span",
                PROVEN_ZERO if v else REFUTED, ms)
        ker, ms = _timed(lambda: kernel_theta(fields))
        rep.add(f"{cid}/kernel", cid, "kernel_dim", PROVEN_ZERO, ms,
                note=f"dim ker = {len(ker)}")
    return rep


def run_structure_properties(zeta=None, h=None, lam_sign=None,
                             seed: int = 0) -> Report:
    """Jacobi identity on every generator triple, bracket antisymmetry and
    the homomorphism property of the projection."""
    import itertools

    rep = Report(seed)
    for entry in find_entries(zeta, h, lam_sign):
        cid = entry.id
        fields = entry.fields()
        ctx = entry.case.context(JetContext(2))
        worst_j = Verdict(PROVEN_ZERO)
        t0 = time.perf_counter()
        for X, Y, Z in itertools.combinations(fields, 3):
            rng = _check_rng(seed, f"{cid}/jacobi/{X.name},{Y.name},{Z.name}")
            v = jacobi_verdict(X, Y, Z, ctx, rng)
            if not v.is_zero or v.residual > worst_j.residual:
                worst_j = v
        rep.add(f"{cid}/jacobi", cid, "jacobi", worst_j,
                (time.perf_counter() - t0) * 1000.0,
                note=f"{math.comb(len(fields), 3)} triples")
        ok, ms = _timed(lambda: all(antisymmetry_holds(X, Y) for X, Y in
                                    itertools.combinations(fields, 2)))
        rep.add(f"{cid}/antisymmetry", cid, "antisymmetry",
                PROVEN_ZERO if ok else REFUTED, ms)
        t0 = time.perf_counter()
        worst_h = Verdict(PROVEN_ZERO)
        for X, Y in itertools.combinations(fields, 2):
            rng = _check_rng(seed, f"{cid}/hom/{X.name},{Y.name}")
            v = theta_homomorphism_verdict(X, Y, ctx, rng)
            if not v.is_zero or v.residual > worst_h.residual:
                worst_h = v
        rep.add(f"{cid}/theta-hom", cid, "theta_homomorphism", worst_h,
                (time.perf_counter() - t0) * 1000.0)
    return rep


def run_thermo(zeta=None, h=None, f_family=None, seed: int = 0,
               n_points: int = 50) -> Report:
    """Lagrangian, tangency and admissibility checks for the selected
    cells' state charts, including the no-state declarations."""
    rep = Report(seed)
    seen = set()
    for entry in find_entries(zeta, h):
        cid = entry.id
        beta_specials = [None]
        ref = state_library(entry.zeta, entry.h)
        if isinstance(ref, NoState):
            rep.add(f"{cid}/state", cid, "state_chart", NO_STATE, 0.0,
                    note=ref.reason)
            continue
        if entry.zeta == "power" and entry.h == "quadratic":
            beta_specials.append(Fraction(1, 2))
        if entry.zeta == "power" and entry.h == "exp":
            beta_specials.extend([Fraction(1, 3), Fraction(-1)])
        for beta in beta_specials:
            chart = state_library(entry.zeta, entry.h, beta)
            key = (chart.name, entry.zeta, entry.h)
            if key in seen:
                rep.add(f"{cid}/state{'' if beta is None else '@beta=' + str(beta)}",
                        cid, "state_chart", PROVEN_ZERO, 0.0,
                        note=f"chart {chart.name} shared with an earlier cell")
                continue
            seen.add(key)
            tag = chart.name
            if f_family:
                chart = type(chart)(**{**chart.__dict__, "f_family": f_family})
            rng = _check_rng(seed, f"{cid}/{tag}/omega")
            v, ms = _timed(lambda: lagrangian_verdict(chart, rng=rng))
            rep.add(f"{cid}/{tag}/omega", cid, "lagrangian", v, ms)
            rng = _check_rng(seed, f"{cid}/{tag}/tangency")
            v, ms = _timed(lambda: tangency(chart.Z, chart, rng=rng))
            rep.add(f"{cid}/{tag}/tangency", cid, "tangency", v, ms)
            rng = _check_rng(seed, f"{cid}/{tag}/admissible")
            v, ms = _timed(lambda: check_admissible(chart, n_points=n_points, rng=rng))
            rep.add(f"{cid}/{tag}/admissible", cid, "admissibility", v, ms)
            rng = _check_rng(seed, f"{cid}/{tag}/admissible-out")
            v, ms = _timed(lambda: check_admissible(
                chart, n_points=max(10, n_points // 2), rng=rng,
                expect_definite=False, flip_region=len(chart.region) - 1))
            if v.status == INCONCLUSIVE:
                v = Verdict(NUMERICALLY_ZERO,
                            note="flipped region unsamplable; sanity direction skipped")
            rep.add(f"{cid}/{tag}/admissible-out", cid, "admissibility_sanity", v, ms)
    return rep


def run_invariants(zeta=None, h=None, seed: int = 0, n_points: int = 25,
                   with_pure_order: bool = False) -> Report:
    """Kinematic and flow invariant tables: annihilation, invariant
    derivatives and independence ranks."""
    rep = Report(seed)
    kin_done = set()
    for entry in find_entries(zeta, h):
        cid = entry.id
        # kinematic tables depend on the lift only; run once per lift class
        kin_key = (entry.h, entry.zeta)
        table, invs, derivs, binds = basis_for(entry, "kinematic")
        case = CaseSpec(entry.zeta, entry.h, entry.lam_sign, binds)
        alg = algebra_for(entry, "kinematic")
        rng = _check_rng(seed, f"{cid}/kin")
        t0 = time.perf_counter()
        worst_v = Verdict(PROVEN_ZERO)
        for J in invs:
            v = check_annihilated(J, alg, case, rng, n_points=n_points)
            if not v.is_zero or v.residual > worst_v.residual:
                worst_v = v
        rep.add(f"{cid}/kin/annihilated", cid, "kinematic_invariants", worst_v,
                (time.perf_counter() - t0) * 1000.0,
                note=f"{len(invs)} invariants vs {len(alg)} generators")
        t0 = time.perf_counter()
        worst_d = Verdict(PROVEN_ZERO)
        for pair in derivs:
            v = check_invariant_derivative(pair, invs, alg, case, rng,
                                           n_points=max(8, n_points // 3))
            if not v.is_zero or v.residual > worst_d.residual:
                worst_d = v
        rep.add(f"{cid}/kin/derivatives", cid, "kinematic_derivatives", worst_d,
                (time.perf_counter() - t0) * 1000.0)
        r, ms = _timed(lambda: independence_rank(invs, case, rng=rng))
        rep.add(f"{cid}/kin/rank", cid, "independence_rank",
                PROVEN_ZERO if r == len(invs) else REFUTED, ms,
                note=f"rank {r} of {len(invs)}")
        if with_pure_order and kin_key[0] not in kin_done:
            kin_done.add(kin_key[0])
            for k in (1, 2):
                rng = _check_rng(seed, f"{cid}/pure/{k}")
                c, ms = _timed(lambda: pure_order_count(entry, k, rng))
                rep.add(f"{cid}/pure-order/{k}", cid, "pure_order_count",
                        PROVEN_ZERO if c == 5 else REFUTED, ms,
                        note=f"count {c} at order {k}")
        # flow tables exist only where a state chart exists
        try:
            table = ns_table(entry.zeta, entry.h)
        except KeyError:
            continue
        specials = [t for t in NS_TABLES
                    if t.zeta == entry.zeta and t.h == entry.h]
        for t in specials:
            tb, invs, derivs, binds = basis_for(entry, "navier_stokes", beta=t.beta)
            if tb.key != t.key:
                continue
            case = CaseSpec(entry.zeta, entry.h, entry.lam_sign, binds)
            alg = algebra_for(entry, "navier_stokes", tb, binds)
            rng = _check_rng(seed, f"{cid}/{tb.key}")
            t0 = time.perf_counter()
            worst_v = Verdict(PROVEN_ZERO)
            for J in invs:
                v = check_annihilated(J, alg, case, rng, n_points=n_points)
                if not v.is_zero or v.residual > worst_v.residual:
                    worst_v = v
            rep.add(f"{cid}/{tb.key}/annihilated", cid, "ns_invariants", worst_v,
                    (time.perf_counter() - t0) * 1000.0,
                    note=f"{len(invs)} invariants")
            t0 = time.perf_counter()
            worst_d = Verdict(PROVEN_ZERO)
            for pair in derivs:
                v = check_invariant_derivative(pair, invs, alg, case, rng,
                                               n_points=max(8, n_points // 3))
                if not v.is_zero or v.residual > worst_d.residual:
                    worst_d = v
            rep.add(f"{cid}/{tb.key}/derivatives", cid, "ns_derivatives", worst_d,
                    (time.perf_counter() - t0) * 1000.0)
            r, ms = _timed(lambda: independence_rank(invs, case, rng=rng))
            rep.add(f"{cid}/{tb.key}/rank", cid, "independence_rank",
                    PROVEN_ZERO if r == len(invs) else REFUTED, ms,
                    note=f"rank {r} of {len(invs)}")
            for desc, printed in tb.errata:
                Jp = parse_in_case(case, printed)
                rng = _check_rng(seed, f"{cid}/{tb.key}/erratum")
                v, ms = _timed(lambda: check_annihilated(Jp, alg, case, rng,
                                                         n_points=n_points))
                rep.add(f"{cid}/{tb.key}/erratum", cid, "erratum_control",
                        PROVEN_ZERO if v.status == REFUTED else REFUTED, ms,
                        note=f"printed form refuted as expected: {desc}")
    return rep


_LIFT_DOMAINS = {
    # shape -> (params, list of (a0, a) sampling windows, sign)
    "linear": ({"lam": 0.6}, (0.0, 2.0), 1.0),
    "quadratic": ({"lam": 0.5}, (0.0, 0.9), 1.0),
    "power": ({"lam1": 1.0, "lam2": 11.0 / 3.0}, (0.02, 0.5), 1.0),
    "exp": ({"lam1": 1.0, "lam2": 1.0}, (-2.5, -0.1), 1.0),
    "log": ({}, (1.05, 4.0), 1.0),
}


def run_lift(shapes=None, seed: int = 0, n_points: int = 20,
             tol: float = 1e-8) -> Report:
    """Oracle equivalence of the closed-form lifting relations, the
    derivative-level identity, monotonicity, and the exponential-lift
    bound for the lifted unit circle."""
    rep = Report(seed)
    for shape in (shapes or ("linear", "quadratic", "power", "exp", "log")):
        params, (lo, hi), sign = _LIFT_DOMAINS[shape]
        rng = _check_rng(seed, f"lift/{shape}")
        t0 = time.perf_counter()
        worst = 0.0
        for _ in range(n_points):
            if shape == "quadratic":
                lam = rng.choice([1.0, -1.0]) * rng.uniform(0.2, 2.0)
                params = {"lam": lam}
                amax = 1.0 / (2.0 * abs(lam))
                a0, a = 0.0, rng.uniform(0.05, 0.9) * amax
                sgn = math.copysign(1.0, lam)
            elif shape == "linear":
                params = {"lam": rng.uniform(0.2, 0.9)}
                a0, a = 0.0, rng.uniform(lo, hi)
                sgn = 1.0
            elif shape == "power":
                zmax = (9.0 / 121.0) ** (11.0 / 16.0)
                # keep the series argument within the well-conditioned range
                atop = (0.9 ** (11.0 / 16.0)) * zmax ** (3.0 / 11.0)
                a = rng.uniform(0.3, 0.999) * atop
                a0 = rng.uniform(0.02, 0.8) * a
                sgn = 1.0
            elif shape == "exp":
                lam2 = rng.uniform(0.4, 2.0)
                params = {"lam1": 1.0, "lam2": lam2}
                atop = -math.log(lam2) / lam2 - 0.02
                a = atop - rng.uniform(0.0, 2.0)
                a0 = a - rng.uniform(0.1, 1.5)
                sgn = 1.0
            else:
                a0 = 1.0
                a = rng.uniform(1.05, 4.0)
                sgn = 1.0
            worst = max(worst, curvelift.relation_residual(shape, params, a, a0, sgn))
            worst = max(worst, curvelift.derivative_identity_residual(
                shape, params, 0.5 * (a + a0), sgn) * 1e-2)  # 1e-6 fd scale
        status = NUMERICALLY_ZERO if worst <= tol else REFUTED
        rep.add(f"lift/{shape}/oracle", f"lift:{shape}", "lift_relation",
                Verdict(status, residual=worst,
                        note=f"max constant-aligned residual over {n_points} points"),
                (time.perf_counter() - t0) * 1000.0)
        # monotone branch check
        rng2 = _check_rng(seed, f"lift/{shape}/monotone")
        rel = curvelift.RELATIONS[shape]
        p = params
        zlo, zhi = rel.z_range(p)
        zs = []
        lo_z = zlo if math.isfinite(zlo) else -3.0
        hi_z = zhi if math.isfinite(zhi) else 3.0
        vals = []
        mono_ok = True
        for i in range(1, 40):
            z = lo_z + (hi_z - lo_z) * i / 40.0
            try:
                vals.append(rel.G(z, p))
            except curvelift.DomainError:
                continue
        mono_ok = all(b > a for a, b in zip(vals, vals[1:]))
        rep.add(f"lift/{shape}/monotone", f"lift:{shape}", "lift_monotone",
                PROVEN_ZERO if mono_ok else REFUTED, 0.0)
    # lifted unit circle under the exponential shape never meets the plane
    t0 = time.perf_counter()
    rows = curvelift.lift_curve(curvelift.unit_circle(), "exp",
                                {"lam1": 1.0, "lam2": 1.0}, 80, sign=-1.0)
    zs = [r[3] for r in rows]
    ok = min(zs) > 0.0 and max(zs) <= 1.0 + 1e-9
    rep.add("lift/exp/circle-bound", "lift:exp", "lift_branch_bound",
            Verdict(NUMERICALLY_ZERO if ok else REFUTED,
                    residual=min(zs),
                    note=f"min z = {min(zs):.6f} stays above the plane"),
            (time.perf_counter() - t0) * 1000.0)
    return rep


def run_all(seed: int = 0) -> Report:
    rep = run_verify(seed=seed)
    rep.extend(run_structure_properties(seed=seed))
    rep.extend(run_thermo(seed=seed))
    rep.extend(run_invariants(seed=seed, with_pure_order=True))
    rep.extend(run_lift(seed=seed))
    return rep
