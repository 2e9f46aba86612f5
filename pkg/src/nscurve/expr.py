"""Immutable symbolic expression trees over jet coordinates, parameters and
unspecified functions.

Node kinds: Rat (exact rational constant), Sym (named symbol), Add, Mul,
Pow, Call (a fixed set of transcendental functions) and UFunc (an
unspecified function such as F, zeta or h carrying an explicit derivative
order).  Trees are immutable and hashable; structural equality is used
everywhere.  `canonical.canonicalize` produces the normal form, this module
provides construction, differentiation, substitution, rendering and
floating-point evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping


class ExprError(Exception):
    pass


class EvalDomainError(ExprError):
    """Evaluation left the real domain (ln of a negative number etc.)."""


class UnboundSymbolError(ExprError):
    pass


CALL_KINDS = ("exp", "ln", "sin", "cos", "sqrt", "arccos", "arcsin", "arctan")


class Expr:
    __slots__ = ("_hash", "_key")

    def key(self):
        """Total-order key: a nested tuple, cached."""
        k = getattr(self, "_key", None)
        if k is None:
            k = self._make_key()
            object.__setattr__(self, "_key", k)
        return k

    def __hash__(self):
        h = getattr(self, "_hash", None)
        if h is None:
            h = hash(self.key())
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr):
            return NotImplemented
        return self.key() == other.key()

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return f"<{render(self)}>"

    def _make_key(self):
        raise NotImplementedError


class Rat(Expr):
    __slots__ = ("value",)

    def __init__(self, num, den=1):
        v = num if isinstance(num, Fraction) and den == 1 else Fraction(num, den)
        object.__setattr__(self, "value", v)

    def _make_key(self):
        return (0, self.value)


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def _make_key(self):
        return (1, self.name)


class Call(Expr):
    __slots__ = ("kind", "arg")

    def __init__(self, kind: str, arg: Expr):
        if kind not in CALL_KINDS:
            raise ExprError(f"unknown call kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "arg", arg)

    def _make_key(self):
        return (2, self.kind, self.arg.key())


class UFunc(Expr):
    __slots__ = ("name", "order", "arg")

    def __init__(self, name: str, order: int, arg: Expr):
        if order < 0:
            raise ExprError("derivative order must be non-negative")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "arg", arg)

    def _make_key(self):
        return (3, self.name, self.order, self.arg.key())


class Pow(Expr):
    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: Expr):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", exponent)

    def _make_key(self):
        return (4, self.base.key(), self.exponent.key())


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: tuple):
        object.__setattr__(self, "factors", factors)

    def _make_key(self):
        return (5, tuple(f.key() for f in self.factors))


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: tuple):
        object.__setattr__(self, "terms", terms)

    def _make_key(self):
        return (6, tuple(t.key() for t in self.terms))


ZERO = Rat(0)
ONE = Rat(1)
MINUS_ONE = Rat(-1)
HALF = Rat(1, 2)


# ---------------------------------------------------------------------------
# smart constructors: light local folding only, full normal form is the job
# of canonical.canonicalize
# ---------------------------------------------------------------------------

def num(n, d=1) -> Rat:
    return Rat(n, d)


def sym(name: str) -> Sym:
    return Sym(name)


def add_(*terms) -> Expr:
    flat = []
    const = Fraction(0)
    for t in terms:
        if isinstance(t, Add):
            items = t.terms
        else:
            items = (t,)
        for it in items:
            if isinstance(it, Rat):
                const += it.value
            else:
                flat.append(it)
    if const != 0:
        flat.append(Rat(const))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def mul_(*factors) -> Expr:
    flat = []
    const = Fraction(1)
    for f in factors:
        if isinstance(f, Mul):
            items = f.factors
        else:
            items = (f,)
        for it in items:
            if isinstance(it, Rat):
                const *= it.value
            else:
                flat.append(it)
    if const == 0:
        return ZERO
    if not flat:
        return Rat(const)
    if const != 1:
        flat.insert(0, Rat(const))
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def pow_(base: Expr, exponent) -> Expr:
    if isinstance(exponent, (int, Fraction)):
        exponent = Rat(exponent)
    if isinstance(exponent, Rat):
        if exponent.value == 1:
            return base
        if exponent.value == 0:
            return ONE
        if isinstance(base, Rat) and exponent.value.denominator == 1:
            e = exponent.value.numerator
            if base.value == 0 and e <= 0:
                raise ExprError("0 raised to a non-positive power")
            return Rat(base.value ** e)
    if isinstance(base, Rat) and base.value == 1:
        return ONE
    if isinstance(base, Pow):
        return Pow(base.base, mul_(base.exponent, exponent))
    return Pow(base, exponent)


def sub_(a: Expr, b: Expr) -> Expr:
    return add_(a, mul_(MINUS_ONE, b))


def div_(a: Expr, b: Expr) -> Expr:
    return mul_(a, pow_(b, MINUS_ONE))


def call(kind: str, arg: Expr) -> Expr:
    return Call(kind, arg)


def ufunc(name: str, order: int, arg: Expr) -> UFunc:
    return UFunc(name, order, arg)


def free_symbols(e: Expr) -> frozenset:
    out = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, Sym):
            out.add(n.name)
        elif isinstance(n, Add):
            stack.extend(n.terms)
        elif isinstance(n, Mul):
            stack.extend(n.factors)
        elif isinstance(n, Pow):
            stack.append(n.base)
            stack.append(n.exponent)
        elif isinstance(n, (Call, UFunc)):
            stack.append(n.arg)
    return frozenset(out)


def ufunc_names(e: Expr) -> frozenset:
    out = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, UFunc):
            out.add(n.name)
            stack.append(n.arg)
        elif isinstance(n, Add):
            stack.extend(n.terms)
        elif isinstance(n, Mul):
            stack.extend(n.factors)
        elif isinstance(n, Pow):
            stack.extend((n.base, n.exponent))
        elif isinstance(n, Call):
            stack.append(n.arg)
    return frozenset(out)


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------

_CALL_DERIV: dict[str, Callable[[Expr], Expr]] = {
    "exp": lambda x: Call("exp", x),
    "ln": lambda x: pow_(x, MINUS_ONE),
    "sin": lambda x: Call("cos", x),
    "cos": lambda x: mul_(MINUS_ONE, Call("sin", x)),
    "sqrt": lambda x: mul_(HALF, pow_(x, Rat(-1, 2))),
    "arccos": lambda x: mul_(MINUS_ONE, pow_(add_(ONE, mul_(MINUS_ONE, x, x)), Rat(-1, 2))),
    "arcsin": lambda x: pow_(add_(ONE, mul_(MINUS_ONE, x, x)), Rat(-1, 2)),
    "arctan": lambda x: pow_(add_(ONE, mul_(x, x)), MINUS_ONE),
}


def _diff(e: Expr, v: str) -> Expr:
    if isinstance(e, Rat):
        return ZERO
    if isinstance(e, Sym):
        return ONE if e.name == v else ZERO
    if isinstance(e, Add):
        return add_(*[_diff(t, v) for t in e.terms])
    if isinstance(e, Mul):
        terms = []
        fs = e.factors
        for i, f in enumerate(fs):
            df = _diff(f, v)
            if df is ZERO or (isinstance(df, Rat) and df.value == 0):
                continue
            terms.append(mul_(*fs[:i], df, *fs[i + 1:]))
        return add_(*terms)
    if isinstance(e, Pow):
        b, x = e.base, e.exponent
        db = _diff(b, v)
        dx = _diff(x, v)
        parts = []
        if not _is_zero_rat(db):
            # x * b^(x-1) * b'
            parts.append(mul_(x, pow_(b, add_(x, MINUS_ONE)), db))
        if not _is_zero_rat(dx):
            # b^x * ln(b) * x'
            parts.append(mul_(e, Call("ln", b), dx))
        return add_(*parts)
    if isinstance(e, Call):
        da = _diff(e.arg, v)
        if _is_zero_rat(da):
            return ZERO
        return mul_(_CALL_DERIV[e.kind](e.arg), da)
    if isinstance(e, UFunc):
        da = _diff(e.arg, v)
        if _is_zero_rat(da):
            return ZERO
        return mul_(UFunc(e.name, e.order + 1, e.arg), da)
    raise ExprError(f"cannot differentiate {e!r}")


def _is_zero_rat(e: Expr) -> bool:
    return isinstance(e, Rat) and e.value == 0


def differentiate(e: Expr, v: str, ctx=None) -> Expr:
    """Partial derivative with respect to the symbol `v`.

    Every other symbol (parameters included) is held constant; UFunc nodes
    follow the chain rule with derivative order incremented."""
    from . import canonical

    return canonical.canonicalize(_diff(e, v))


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

def substitute(e: Expr, bindings: Mapping) -> Expr:
    """Simultaneous substitution, canonicalized.

    Keys are symbol names mapped to Expr, or unspecified-function names
    mapped to a ``(parameter_name, body)`` template; UFunc(name, n, arg)
    is then replaced by the n-th derivative of the template evaluated at
    the (substituted) argument."""
    from . import canonical

    return canonical.canonicalize(_subst(e, bindings))


def _subst(e: Expr, b: Mapping) -> Expr:
    if isinstance(e, Rat):
        return e
    if isinstance(e, Sym):
        r = b.get(e.name)
        if r is None:
            return e
        if isinstance(r, tuple):
            raise ExprError(f"{e.name} bound as a function but used as a symbol")
        return r
    if isinstance(e, Add):
        return add_(*[_subst(t, b) for t in e.terms])
    if isinstance(e, Mul):
        return mul_(*[_subst(f, b) for f in e.factors])
    if isinstance(e, Pow):
        return pow_(_subst(e.base, b), _subst(e.exponent, b))
    if isinstance(e, Call):
        return Call(e.kind, _subst(e.arg, b))
    if isinstance(e, UFunc):
        arg = _subst(e.arg, b)
        r = b.get(e.name)
        if r is None:
            return UFunc(e.name, e.order, arg)
        if not isinstance(r, tuple):
            raise ExprError(f"{e.name} bound as a symbol but used as a function")
        param, body = r
        for _ in range(e.order):
            body = _diff(body, param)
        return _subst(body, {param: arg})
    raise ExprError(f"cannot substitute into {e!r}")


# ---------------------------------------------------------------------------
# rendering (inverse of parser.parse)
# ---------------------------------------------------------------------------

def render(e: Expr) -> str:
    return _render(e, 0)


# precedence levels: 0 sum, 1 product, 2 power operand, 3 atom
def _render(e: Expr, level: int) -> str:
    if isinstance(e, Rat):
        v = e.value
        s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        if (v < 0 or v.denominator != 1) and level >= 1:
            return f"({s})"
        return s
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Call):
        return f"{e.kind}({_render(e.arg, 0)})"
    if isinstance(e, UFunc):
        return f"{e.name}{'' if e.order == 0 else chr(39) * e.order}({_render(e.arg, 0)})"
    if isinstance(e, Pow):
        b = _render(e.base, 3)
        x = e.exponent
        if isinstance(x, Rat) and x.value.denominator == 1 and x.value > 0:
            xs = str(x.value.numerator)
        elif isinstance(x, Sym):
            xs = x.name
        else:
            xs = f"({_render(x, 0)})"
        s = f"{b}^{xs}"
        return s
    if isinstance(e, Mul):
        fs = e.factors
        neg = False
        if fs and isinstance(fs[0], Rat) and fs[0].value == -1:
            neg = True
            fs = fs[1:]
        s = "*".join(_render(f, 1) for f in fs) if fs else "1"
        if neg:
            s = f"-{s}"
        if (neg and level >= 1) or level >= 2:
            s = f"({s})"
        return s
    if isinstance(e, Add):
        parts = []
        for i, t in enumerate(e.terms):
            neg = False
            if isinstance(t, Rat) and t.value < 0:
                neg = True
                t = Rat(-t.value)
            elif isinstance(t, Mul) and t.factors and isinstance(t.factors[0], Rat) \
                    and t.factors[0].value < 0:
                neg = True
                first = Rat(-t.factors[0].value)
                rest = t.factors[1:]
                if first.value == 1 and rest:
                    t = rest[0] if len(rest) == 1 else Mul(rest)
                else:
                    t = Mul((first,) + rest)
            s = _render(t, 1 if i or neg else 0)
            if i == 0:
                parts.append(f"-{s}" if neg else s)
            else:
                parts.append((" - " if neg else " + ") + s)
        s = "".join(parts)
        if level >= 1:
            s = f"({s})"
        return s
    raise ExprError(f"cannot render {e!r}")


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

def _d_exp(n, x):
    return math.exp(x)


def _poly_family(coeffs_by_order):
    tables = coeffs_by_order

    def f(n, x):
        if n >= len(tables):
            return 0.0
        return tables[n](x)

    return f


UFUNC_FAMILIES: dict[str, Callable[[int, float], float]] = {
    "exp": _d_exp,
    "quartic": _poly_family([
        lambda x: x * x + x ** 4,
        lambda x: 2 * x + 4 * x ** 3,
        lambda x: 2 + 12 * x * x,
        lambda x: 24 * x,
        lambda x: 24.0,
    ]),
    "cosh": lambda n, x: math.cosh(x) if n % 2 == 0 else math.sinh(x),
    "cubic": _poly_family([
        lambda x: x + x ** 3 / 3,
        lambda x: 1 + x * x,
        lambda x: 2 * x,
        lambda x: 2.0,
    ]),
    "square": _poly_family([
        lambda x: x * x,
        lambda x: 2 * x,
        lambda x: 2.0,
    ]),
}

# rotation used by the numeric zero-test when a function is left unspecified
DEFAULT_FAMILY_CYCLE = ("exp", "quartic", "cosh")


def eval_expr(e: Expr, point: Mapping[str, float],
              ufuncs: Mapping[str, Callable[[int, float], float]] | None = None) -> float:
    """IEEE-double evaluation; raises EvalDomainError outside the real domain
    and UnboundSymbolError for unbound symbols."""
    uf = ufuncs or {}
    return _eval(e, point, uf)


def _eval(e, point, uf) -> float:
    if isinstance(e, Rat):
        return float(e.value)
    if isinstance(e, Sym):
        try:
            return float(point[e.name])
        except KeyError:
            raise UnboundSymbolError(e.name) from None
    if isinstance(e, Add):
        return sum(_eval(t, point, uf) for t in e.terms)
    if isinstance(e, Mul):
        r = 1.0
        for f in e.factors:
            r *= _eval(f, point, uf)
        return r
    if isinstance(e, Pow):
        b = _eval(e.base, point, uf)
        x = _eval(e.exponent, point, uf)
        if b < 0 and x != int(x):
            raise EvalDomainError(f"negative base {b} to power {x}")
        if b == 0 and x < 0:
            raise EvalDomainError("division by zero")
        try:
            return b ** x
        except OverflowError:
            raise EvalDomainError("overflow in power") from None
    if isinstance(e, Call):
        a = _eval(e.arg, point, uf)
        try:
            if e.kind == "exp":
                return math.exp(a)
            if e.kind == "ln":
                if a <= 0:
                    raise EvalDomainError(f"ln of {a}")
                return math.log(a)
            if e.kind == "sin":
                return math.sin(a)
            if e.kind == "cos":
                return math.cos(a)
            if e.kind == "sqrt":
                if a < 0:
                    raise EvalDomainError(f"sqrt of {a}")
                return math.sqrt(a)
            if e.kind == "arccos":
                if not -1.0 <= a <= 1.0:
                    raise EvalDomainError(f"arccos of {a}")
                return math.acos(a)
            if e.kind == "arcsin":
                if not -1.0 <= a <= 1.0:
                    raise EvalDomainError(f"arcsin of {a}")
                return math.asin(a)
            if e.kind == "arctan":
                return math.atan(a)
        except OverflowError:
            raise EvalDomainError("overflow") from None
    if isinstance(e, UFunc):
        a = _eval(e.arg, point, uf)
        fam = uf.get(e.name)
        if fam is None:
            raise UnboundSymbolError(f"unspecified function {e.name} not bound")
        try:
            return float(fam(e.order, a))
        except OverflowError:
            raise EvalDomainError("overflow in unspecified function") from None
    raise ExprError(f"cannot evaluate {e!r}")


# ---------------------------------------------------------------------------
# Context: symbol classification, domain assumptions, sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Assumption:
    """Sampling window (lo, hi) with punctured neighbourhoods."""
    lo: Fraction = Fraction(-5, 2)
    hi: Fraction = Fraction(5, 2)
    exclude: tuple = ()          # (center, radius) pairs
    avoid_zero: Fraction = Fraction(3, 20)

    def admits(self, x: Fraction) -> bool:
        if not (self.lo <= x <= self.hi):
            return False
        if self.avoid_zero and abs(x) < self.avoid_zero:
            return False
        for c, r in self.exclude:
            if abs(x - Fraction(c)) < Fraction(r):
                return False
        return True


POSITIVE = Assumption(lo=Fraction(1, 4), hi=Fraction(5, 2), avoid_zero=Fraction(0))
NEGATIVE = Assumption(lo=Fraction(-5, 2), hi=Fraction(-1, 4), avoid_zero=Fraction(0))


class Context:
    """Symbol registry: disjoint parameter and variable sets, unspecified
    function names, per-symbol sampling assumptions, default function
    bindings for numeric work."""

    def __init__(self, parameters=(), variables=(), assumptions=None,
                 functions=(), ufunc_families=None):
        self.parameters = frozenset(parameters)
        self.variables = frozenset(variables)
        if self.parameters & self.variables:
            raise ExprError("parameter and variable sets must be disjoint")
        self.assumptions = dict(assumptions or {})
        self.functions = frozenset(functions)
        self.ufunc_families = dict(ufunc_families or {})

    @property
    def symbols(self):
        return self.parameters | self.variables

    def knows(self, name: str) -> bool:
        return name in self.parameters or name in self.variables or name in self.functions

    def assumption(self, name: str) -> Assumption:
        return self.assumptions.get(name, Assumption())

    def with_variables(self, names: Iterable[str]) -> "Context":
        return Context(self.parameters, self.variables | set(names),
                       self.assumptions, self.functions, self.ufunc_families)

    def with_parameters(self, names, assumptions=None) -> "Context":
        a = dict(self.assumptions)
        a.update(assumptions or {})
        return Context(self.parameters | set(names), self.variables,
                       a, self.functions, self.ufunc_families)

    def with_functions(self, names) -> "Context":
        return Context(self.parameters, self.variables, self.assumptions,
                       self.functions | set(names), self.ufunc_families)

    def sample(self, rng, names=None) -> dict[str, Fraction]:
        """Random rational point satisfying every assumption; numerators and
        denominators stay below 10**6."""
        point = {}
        for name in sorted(names if names is not None else self.symbols):
            a = self.assumption(name)
            for _ in range(200):
                den = rng.randrange(7, 997)
                lonum = math.ceil(a.lo * den)
                hinum = math.floor(a.hi * den)
                x = Fraction(rng.randrange(lonum, hinum + 1), den)
                if a.admits(x):
                    point[name] = x
                    break
            else:
                raise ExprError(f"cannot sample {name} under {a}")
        return point

    def family_cycle(self, i: int) -> dict[str, Callable[[int, float], float]]:
        """Bindings for all registered unspecified functions, rotating through
        the default test family unless pinned."""
        out = {}
        for fn in self.functions:
            fam = self.ufunc_families.get(fn)
            if fam is None:
                fam = UFUNC_FAMILIES[DEFAULT_FAMILY_CYCLE[i % len(DEFAULT_FAMILY_CYCLE)]]
            elif isinstance(fam, str):
                fam = UFUNC_FAMILIES[fam]
            out[fn] = fam
        return out
