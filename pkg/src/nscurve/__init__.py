"""Symbolic/numeric verification engine for one-dimensional viscous flow on
a space curve: symmetry tables, Lie-algebra structure, thermodynamic state
charts, differential invariants and curve-lifting relations."""

from .expr import (
    Add, Assumption, Call, Context, EvalDomainError, Expr, ExprError,
    Mul, Pow, Rat, Sym, UFunc, UnboundSymbolError,
    add_, differentiate, div_, eval_expr, free_symbols, mul_, num, pow_,
    render, sub_, substitute, sym, ufunc,
)
from .canonical import CanonicalError, canonicalize, is_zero_poly
from .parser import ParseError, parse
from .zerotest import (
    INCONCLUSIVE, NO_STATE, NUMERICALLY_ZERO, PROVEN_ZERO, REFUTED,
    Verdict, is_zero, worst, zero_tolerance,
)

__version__ = "0.1.0"
