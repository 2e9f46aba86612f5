import math
import random

import pytest

from nscurve import (
    Rat, Sym, UFunc, add_, canonicalize, differentiate, eval_expr, is_zero,
    mul_, render, sub_, substitute,
)
from nscurve.canonical import CanonicalError, is_zero_poly
from nscurve.parser import ParseError, parse
from conftest import random_expr


def ceq(a, b):
    return canonicalize(a) == canonicalize(b)


class TestParse:
    def test_product_sum_tree(self, ctx):
        e = parse("rho*(u_t + u*u_a)", ctx.with_variables({"u_t", "u_a"}))
        assert ceq(e, mul_(Sym("rho"), add_(Sym("u_t"), mul_(Sym("u"), Sym("u_a")))))

    def test_exponential_shape(self, ctx):
        c = ctx.with_parameters({"lambda1", "lambda2"})
        e = parse("lambda1*exp(lambda2*a)", c)
        assert eval_expr(e, {"lambda1": 2.0, "lambda2": 0.5, "a": 2.0}) == pytest.approx(
            2.0 * math.exp(1.0))

    def test_unspecified_function_derivative(self, ctx):
        e = parse("F'(s - (gamma2/gamma3)*ln(rho))", ctx)
        found = [n for n in [e] if isinstance(n, UFunc)]
        assert found and found[0].order == 1

    def test_unknown_identifier_rejected(self, ctx):
        with pytest.raises(ParseError):
            parse("nosuch + 1", ctx)

    def test_syntax_error_carries_offset(self, ctx):
        with pytest.raises(ParseError) as ei:
            parse("x + * y", ctx)
        assert "offset" in str(ei.value)

    def test_roundtrip_through_render(self, ctx, rng):
        for _ in range(120):
            e = random_expr(rng)
            c = canonicalize(e)
            back = parse(render(c), ctx)
            assert canonicalize(back) == c


class TestDifferentiate:
    def test_chain_rule_exponential(self, ctx):
        c = ctx.with_parameters({"lambda1", "lambda2"})
        e = parse("lambda1*exp(lambda2*a)", c)
        d = differentiate(e, "a")
        assert ceq(d, parse("lambda1*lambda2*exp(lambda2*a)", c))

    def test_unspecified_function_chain_rule(self, ctx):
        # hand chain rule: d/drho F(s - (g2/g3) ln rho) = -(g2/g3) rho^-1 F'
        e = parse("F(s - (gamma2/gamma3)*ln(rho))", ctx)
        d = differentiate(e, "rho")
        expected = parse(
            "-(gamma2/gamma3)*(1/rho)*F'(s - (gamma2/gamma3)*ln(rho))", ctx)
        assert ceq(d, expected)

    def test_parameter_factors_pass_through(self, ctx):
        # d/ds of rho^2 e(rho,s)-style: rho is a constant for d/ds
        e = mul_(parse("rho^2", ctx), UFunc("F", 0, Sym("s")))
        d = differentiate(e, "s")
        assert ceq(d, mul_(parse("rho^2", ctx), UFunc("F", 1, Sym("s"))))

    def test_parameters_differentiate_to_zero(self, ctx):
        assert differentiate(parse("beta*gamma1", ctx), "x") == Rat(0)

    def test_mixed_partials_commute(self, ctx, rng):
        for _ in range(40):
            e = random_expr(rng, depth=3)
            d1 = differentiate(differentiate(e, "x"), "y")
            d2 = differentiate(differentiate(e, "y"), "x")
            v = is_zero(sub_(d1, d2), ctx, rng)
            assert v.is_zero, render(e)

    def test_finite_difference_agreement(self, ctx, rng):
        checked = 0
        attempts = 0
        while checked < 100 and attempts < 600:
            attempts += 1
            e = random_expr(rng, depth=3)
            d = differentiate(e, "x")
            point = {v: rng.uniform(0.3, 1.7) for v in ("x", "y", "z")}
            h = 1e-6
            try:
                up = eval_expr(e, {**point, "x": point["x"] + h})
                dn = eval_expr(e, {**point, "x": point["x"] - h})
                exact = eval_expr(d, point)
            except Exception:
                continue
            fd = (up - dn) / (2 * h)
            if abs(fd) > 1e6:
                continue
            assert abs(exact - fd) <= 1e-5 * (1 + abs(fd)), render(e)
            checked += 1
        assert checked == 100


class TestSubstitute:
    def test_simultaneous_not_sequential(self, ctx):
        e = parse("x + y", ctx)
        r = substitute(e, {"x": Rat(1), "y": Sym("x")})
        assert ceq(r, parse("1 + x", ctx))

    def test_function_template_binding(self, ctx):
        c = ctx.with_parameters({"alpha"})
        e = parse("zeta(T)", c)
        r = substitute(e, {"zeta": ("w", parse("alpha*w^2", c.with_variables({"w"})))})
        assert ceq(r, parse("alpha*T^2", c))

    def test_derivative_of_bound_function(self, ctx):
        e = parse("zeta'(T)", ctx)
        r = substitute(e, {"zeta": ("w", parse("3*w^2", ctx.with_variables({"w"})))})
        assert ceq(r, parse("6*T", ctx))


class TestCanonicalize:
    def test_collects_like_terms(self, ctx):
        assert render(canonicalize(parse("x + x", ctx))) == "2*x"

    def test_merges_exponents_on_common_base(self, ctx):
        assert render(canonicalize(parse("rho^beta * rho^(1-beta)", ctx))) == "rho"

    def test_polynomial_identity_collapses(self, ctx):
        assert is_zero_poly(parse("(x+1)^2 - x^2 - 2*x - 1", ctx))

    def test_trig_identity_stays_unreduced(self, ctx, rng):
        e = parse("sin(x)^2 + cos(x)^2 - 1", ctx)
        assert not is_zero_poly(e)            # the canonicalization boundary
        assert is_zero(e, ctx, rng).status == "NumericallyZero"

    def test_idempotent(self, ctx, rng):
        for _ in range(80):
            e = random_expr(rng)
            c = canonicalize(e)
            assert canonicalize(c) == c

    def test_difference_from_canonical_is_proven_zero(self, ctx, rng):
        for _ in range(80):
            e = random_expr(rng)
            assert is_zero_poly(sub_(e, canonicalize(e)))

    def test_division_by_zero_expression_rejected(self, ctx):
        with pytest.raises(CanonicalError):
            canonicalize(parse("1/(x - x)", ctx))

    def test_exp_factors_merge(self, ctx):
        assert render(canonicalize(parse("exp(x)*exp(-x)", ctx))) == "1"

    def test_sqrt_square_reduces(self, ctx):
        assert render(canonicalize(parse("((2*lam*g)^(1/2))^2", ctx))) == "2*g*lam"


class TestIsZero:
    def test_zero_is_proven(self, ctx, rng):
        assert is_zero(Rat(0), ctx, rng).status == "ProvenZero"

    def test_polynomial_square(self, ctx, rng):
        e = parse("(x+1)^2 - x^2 - 2*x - 1", ctx)
        assert is_zero(e, ctx, rng).status == "ProvenZero"

    def test_nonzero_is_refuted_with_witness(self, ctx, rng):
        v = is_zero(parse("x + 1/1000", ctx), ctx, rng)
        assert v.status == "Refuted"
        assert v.witness and "x" in v.witness

    def test_domain_errors_resample(self, ctx, rng):
        # ln(x) forces resampling away from negative x
        v = is_zero(parse("ln(x^2) - 2*ln(x)", ctx), ctx, rng)
        assert v.status == "NumericallyZero"


class TestEval:
    def test_arccos(self, ctx):
        assert eval_expr(parse("arccos(x)", ctx), {"x": 0.5}) == pytest.approx(
            1.0471975512, abs=1e-9)

    def test_closed_form_sqrt(self, ctx):
        e = parse("sqrt(4*lam*y*(1-4*lam*y))", ctx)
        assert eval_expr(e, {"lam": 0.5, "y": 0.125}) == pytest.approx(
            0.4330127019, abs=1e-9)

    def test_unspecified_function_binding(self, ctx):
        e = parse("F'(x)", ctx)
        assert eval_expr(e, {"x": 0.0}, {"F": lambda n, v: math.exp(v)}) == 1.0

    def test_unbound_symbol_raises(self, ctx):
        from nscurve import UnboundSymbolError
        with pytest.raises(UnboundSymbolError):
            eval_expr(parse("x + y", ctx), {"x": 1.0})
