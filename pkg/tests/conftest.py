import random

import pytest

from nscurve import Context
from nscurve.expr import POSITIVE


@pytest.fixture
def ctx():
    return Context(
        parameters={"lam", "g", "beta", "gamma1", "gamma2", "gamma3", "gamma4", "C"},
        variables={"x", "y", "z", "t", "a", "u", "p", "rho", "s", "T"},
        assumptions={"rho": POSITIVE, "T": POSITIVE},
        functions={"F", "zeta", "h"},
    )


@pytest.fixture
def rng():
    return random.Random(20240811)


def random_expr(rng, depth=3, variables=("x", "y", "z")):
    """Random expression over +, *, integer powers and safe calls."""
    from nscurve.expr import Call, Rat, Sym, add_, mul_, pow_

    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.4:
            return Rat(rng.randint(-4, 4), rng.randint(1, 4))
        return Sym(rng.choice(variables))
    kind = rng.random()
    if kind < 0.35:
        return add_(*[random_expr(rng, depth - 1, variables)
                      for _ in range(rng.randint(2, 3))])
    if kind < 0.7:
        return mul_(*[random_expr(rng, depth - 1, variables)
                      for _ in range(rng.randint(2, 3))])
    if kind < 0.85:
        return pow_(random_expr(rng, depth - 1, variables), rng.randint(2, 3))
    fn = rng.choice(("sin", "cos", "exp"))
    return Call(fn, random_expr(rng, depth - 1, variables))
