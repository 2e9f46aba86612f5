import itertools
import random

import pytest

from nscurve import add_, canonicalize, is_zero, mul_, render, sub_
from nscurve.canonical import is_zero_poly
from nscurve.jet import (
    BASE_VARS, JetContext, OrderOverflowError, PointVectorField, apply_field,
    base_context, coord_name, parse_coord, prolong, total_derivative,
)
from nscurve.lie import bracket
from nscurve.parser import parse


@pytest.fixture
def jc():
    return JetContext(2)


@pytest.fixture
def jctx(jc):
    return jc.context(base_context().with_parameters({"lam", "g"})
                      .with_functions({"zeta", "h", "F"}))


def pvf(jctx, name="", **comps):
    return PointVectorField.make({k: parse(v, jctx) for k, v in comps.items()}, name)


class TestCoordinates:
    def test_naming_t_before_a(self):
        assert coord_name("u", 1, 1) == "u_ta"
        assert coord_name("rho", 0, 2) == "rho_aa"
        assert parse_coord("u_ta") == ("u", 1, 1)
        assert parse_coord("u_at") is None
        assert parse_coord("T_aa") == ("T", 0, 2)
        assert parse_coord("q_a") is None

    def test_every_order_exactly_once(self, jc):
        coords = jc.coords()
        assert len(coords) == len(set(coords))
        assert len(coords) == 5 * 6  # five dependents, orders 0..2


class TestTotalDerivative:
    def test_first_derivative(self, jc, jctx):
        assert render(total_derivative(parse("u", jctx), "a", jc)) == "u_a"

    def test_leibniz(self, jc, jctx):
        d = total_derivative(parse("u*u_a", jctx), "t", jc)
        assert canonicalize(d) == canonicalize(parse("u_t*u_a + u*u_ta", jctx))

    def test_viscous_expansion(self, jc, jctx):
        d = total_derivative(parse("zeta(T)*u_a", jctx), "a", jc)
        assert canonicalize(d) == canonicalize(
            parse("zeta'(T)*T_a*u_a + zeta(T)*u_aa", jctx))

    def test_order_overflow_reported(self, jc, jctx):
        with pytest.raises(OrderOverflowError):
            total_derivative(parse("u_aa", jctx), "a", jc)

    def test_total_derivatives_commute(self, jc, jctx, rng):
        for text in ("u*rho_a + T^2*s_a", "p_a*u_t", "zeta(T)*u_a^2"):
            e = parse(text, jctx)
            d1 = total_derivative(total_derivative(e, "t", None), "a", None)
            d2 = total_derivative(total_derivative(e, "a", None), "t", None)
            assert is_zero_poly(sub_(d1, d2))


class TestProlongation:
    def test_galilean_first_prolongation(self, jc, jctx):
        X5 = pvf(jctx, "X5", a="t", u="1")
        P = prolong(X5, 1, jc)
        assert render(P.coeff("u_t")) == "-u_a"
        assert P.coeff("u_a") == parse("0", jctx)

    def test_time_translation_prolongs_to_zero(self, jc, jctx):
        P = prolong(pvf(jctx, "X1", t="1"), 2, jc)
        zero = parse("0", jctx)
        assert all(e == zero for n, e in P.coeffs if n != "t")

    def test_scaling_weights(self, jc, jctx):
        P = prolong(pvf(jctx, a="a", u="u"), 1, jc)
        assert P.coeff("u_a") == parse("0", jctx)
        assert render(P.coeff("u_t")) == "u_t"

    def test_restriction_to_lower_order_is_stable(self, jc, jctx):
        X = pvf(jctx, "X6", t="t", a="a", p="-p", rho="-rho")
        P1 = prolong(X, 1, jc)
        P2 = prolong(X, 2, jc)
        for name, e in P1.coeffs:
            assert P2.coeff(name) == e

    def test_apply_annihilates_material_derivative(self, jc, jctx):
        X5 = pvf(jctx, "X5", a="t", u="1")
        out = apply_field(prolong(X5, 1, jc), parse("u_t + u*u_a", jctx))
        assert out == parse("0", jctx)

    def test_apply_base_coordinate(self, jc, jctx):
        out = apply_field(prolong(pvf(jctx, t="1"), 1, jc), parse("a", jctx))
        assert out == parse("0", jctx)

    def test_apply_density_scaling(self, jc, jctx):
        X6 = pvf(jctx, "X6", t="t", a="a", p="-p", rho="-rho")
        out = apply_field(prolong(X6, 1, jc), parse("rho", jctx))
        assert render(out) == "-rho"

    def test_order_overflow_in_apply(self, jc, jctx):
        P = prolong(pvf(jctx, a="t", u="1"), 1, jc)
        with pytest.raises(OrderOverflowError):
            apply_field(P, parse("u_aa", jctx))


class TestCommutation:
    def test_prolong_of_bracket_is_bracket_of_prolongs(self, jc, jctx, rng):
        """prolong([X,Y]) acts like [prolong X, prolong Y] on every
        coordinate of order <= 2."""
        fields = [
            pvf(jctx, "X1", t="1"),
            pvf(jctx, "X5", a="t", u="1"),
            pvf(jctx, "X6", t="t", a="a", p="-p", rho="-rho"),
            pvf(jctx, "B", t="t", a="lam*g*t^2/2 + a", u="lam*g*t",
                p="-p", rho="-rho"),
        ]
        jc3 = JetContext(3)
        ctx3 = jc3.context(base_context().with_parameters({"lam", "g"}))
        for X, Y in itertools.combinations(fields, 2):
            B = bracket(X, Y)
            PB = prolong(B, 2, jc)
            PX = prolong(X, 3, jc3)
            PY = prolong(Y, 3, jc3)
            for cname in jc.coords():
                c = parse(cname, ctx3)
                lhs = apply_field(PB, c)
                rhs = sub_(apply_field(PX, apply_field(PY, c)),
                           apply_field(PY, apply_field(PX, c)))
                assert is_zero(sub_(lhs, rhs), ctx3, rng).is_zero, (X.name, Y.name, cname)

    def test_coefficients_must_be_point_type(self, jctx):
        with pytest.raises(Exception):
            PointVectorField.make({"u": parse("u_a", jctx)})
