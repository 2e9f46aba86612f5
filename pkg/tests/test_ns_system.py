import random

import pytest

from nscurve import canonicalize, differentiate, render, sub_
from nscurve.canonical import is_zero_poly
from nscurve.jet import JetContext, PointVectorField
from nscurve.ns_system import (
    CaseSpec, build_system, hprime_expr, is_symmetry, sign_variant_sweep,
    solve_for_leading, solved_system, zeta_expr,
)
from nscurve.parser import parse
from nscurve.expr import ExprError


def pvf(case, name="", **comps):
    ctx = case.context(JetContext(2))
    return PointVectorField.make(
        {k: case.bind(parse(v, ctx)) for k, v in comps.items()}, name)


class TestCaseSpec:
    def test_parameter_exclusions(self):
        with pytest.raises(ExprError):
            CaseSpec("power", "const", bindings=(("beta", 1),))
        with pytest.raises(ExprError):
            CaseSpec("power", "power", bindings=(("lambda2", 2),))
        with pytest.raises(ExprError):
            CaseSpec("any", "linear", bindings=(("lambda", 0),))

    def test_ids_distinguish_quadratic_branches(self):
        a = CaseSpec("any", "quadratic", lam_sign=1)
        b = CaseSpec("any", "quadratic", lam_sign=-1)
        assert a.id != b.id


class TestBuildSystem:
    def test_flat_lift_drops_gravity(self):
        case = CaseSpec("any", "const")
        f1, _, _ = build_system(case)
        assert "g" not in render(f1)

    def test_power_viscosity_expansion(self):
        case = CaseSpec("power", "exp")
        f1, _, _ = build_system(case)
        ctx = case.context(JetContext(2))
        # divergence form: alpha*beta*T^(beta-1)*T_a*u_a + alpha*T^beta*u_aa
        expected = parse(
            "rho*(u_t+u*u_a) + p_a"
            " - (alpha*beta*T^(beta-1)*T_a*u_a + alpha*T^beta*u_aa)"
            " - g*lambda1*lambda2*exp(lambda2*a)*rho", ctx)
        assert is_zero_poly(sub_(f1, expected))

    def test_sloped_lift_gravity_term(self):
        case = CaseSpec("any", "linear")
        f1, _, _ = build_system(case)
        assert is_zero_poly(sub_(differentiate(f1, "g"),
                                 case.parse("-lambda*rho")))

    def test_shapes_of_h(self):
        expectations = {
            "any": "h'(a)", "const": "0", "linear": "lambda",
            "quadratic": "2*a*lambda", "log": "a^(-1)",
        }
        for h, text in expectations.items():
            case = CaseSpec("any", h)
            assert render(canonicalize(hprime_expr(case))) == text


class TestSolvedSystem:
    def test_back_substitution_vanishes(self):
        case = CaseSpec("any", "const")
        sys = solved_system(case)
        for f in sys.equations:
            assert is_zero_poly(sys.restrict(f))

    def test_continuity_solution(self):
        case = CaseSpec("any", "const")
        sys = solved_system(case)
        assert is_zero_poly(sub_(sys.rhs["rho"], case.parse("-u*rho_a - rho*u_a")))

    def test_energy_solution(self):
        case = CaseSpec("any", "const")
        sys = solved_system(case)
        expected = case.parse(
            "-u*s_a + (zeta(T)*u_a^2 - k*T_aa)/(rho*T)")
        assert is_zero_poly(sub_(sys.rhs["s"], expected))

    def test_restrict_is_idempotent(self):
        case = CaseSpec("any", "const")
        sys = solved_system(case)
        ctx = case.context(JetContext(4))
        e = parse("u_ta + rho_t*s_t + u_tt", ctx)
        r1 = sys.restrict(e)
        assert sys.restrict(r1) == r1

    def test_restrict_removes_all_time_derivatives(self):
        from nscurve.expr import free_symbols
        from nscurve.jet import parse_coord
        case = CaseSpec("power", "linear")
        sys = solved_system(case)
        ctx = case.context(JetContext(4))
        r = sys.restrict(parse("u_tt + s_ta", ctx))
        for n in free_symbols(r):
            pc = parse_coord(n)
            if pc and pc[0] in ("u", "rho", "s"):
                assert pc[1] == 0, n


class TestIsSymmetry:
    def test_entropy_shift_for_arbitrary_zeta_and_h(self, rng):
        case = CaseSpec("any", "any")
        assert is_symmetry(pvf(case, "X3", s="1"), case, rng).status == "ProvenZero"

    def test_temperature_scaling_for_linear_viscosity(self, rng):
        case = CaseSpec("linear", "any")
        W = pvf(case, "W", p="p", rho="rho", s="-s", T="T")
        assert is_symmetry(W, case, rng).is_zero

    def test_space_scaling_alone_is_refuted(self, rng):
        case = CaseSpec("any", "any")
        v = is_symmetry(pvf(case, "bad", a="a"), case, rng)
        assert v.status == "Refuted"
        assert v.residual > 1e-3

    def test_conduction_sign_cannot_matter(self, rng):
        # k is a free constant, so the determining equations split by k
        case = CaseSpec("any", "const")
        X6 = pvf(case, "X6", t="t", a="a", p="-p", rho="-rho")
        sweep = sign_variant_sweep(X6, case, rng)
        assert sweep["+kT_aa/div"] == "ProvenZero"
        assert sweep["-kT_aa/div"] == "ProvenZero"

    def test_divergence_form_matters_for_power_viscosity(self, rng):
        # the temperature-dependent viscous term distinguishes the forms
        case = CaseSpec("power", "const")
        X7 = pvf(case, "X7", a="a", u="u",
                 p="-(2*beta/(beta-1))*p", rho="-((4*beta-2)/(beta-1))*rho",
                 s="(2*beta/(beta-1))*s", T="-(2/(beta-1))*T")
        sweep = sign_variant_sweep(X7, case, rng)
        assert sweep["+kT_aa/div"] == "ProvenZero"
        assert sweep["+kT_aa/plain"] == "Refuted"

    def test_parabolic_branches(self, rng):
        # lambda < 0 与 g < 0: exponential pair with rate sqrt(2*lambda*g)
        case = CaseSpec("any", "quadratic", lam_sign=-1)
        X4 = pvf(case, "X4", a="exp((2*lambda*g)^(1/2)*t)",
                 u="(2*lambda*g)^(1/2)*exp((2*lambda*g)^(1/2)*t)")
        assert is_symmetry(X4, case, rng).status == "ProvenZero"
        # oscillatory pair with sqrt(2*lambda*g) on that branch is refuted
        Xw = pvf(case, "Xw", a="sin((2*lambda*g)^(1/2)*t)",
                 u="(2*lambda*g)^(1/2)*cos((2*lambda*g)^(1/2)*t)")
        assert is_symmetry(Xw, case, rng).status == "Refuted"
        # lambda > 0: oscillatory pair with frequency sqrt(-2*lambda*g)
        case2 = CaseSpec("any", "quadratic", lam_sign=1)
        Xt = pvf(case2, "Xt", a="sin((-2*lambda*g)^(1/2)*t)",
                 u="(-2*lambda*g)^(1/2)*cos((-2*lambda*g)^(1/2)*t)")
        assert is_symmetry(Xt, case2, rng).status == "ProvenZero"
