"""Infix expression parser for the engine's text grammar.

Grammar (precedence climbing):
    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?              # right associative
    atom   := NUMBER | IDENT primes? args? | '(' expr ')'
    primes := "'"+                           # derivative marks, e.g. F''
    args   := '(' expr ')'

Identifiers match [A-Za-z][A-Za-z0-9_]*.  Known call names (exp, ln, sin,
cos, sqrt, arccos, arcsin, arctan) parse to Call nodes; any other name
followed by an argument list parses to a UFunc and must be registered as a
function in the Context.  Bare identifiers must be registered as parameters
or variables.  Numbers are integers or decimals, kept exact.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .expr import (
    CALL_KINDS, Call, Context, Expr, MINUS_ONE, Rat, Sym, UFunc,
    add_, mul_, pow_,
)


class ParseError(Exception):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


_TOKEN = re.compile(r"""
    (?P<num>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<primes>'+)
  | (?P<op>[-+*/^()])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, ctx: Context | None):
        self.tokens = tokens
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", pos)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = add_(node, rhs if op == "+" else mul_(MINUS_ONE, rhs))
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            node = mul_(node, rhs if op == "*" else pow_(rhs, MINUS_ONE))
        return node

    def unary(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return mul_(MINUS_ONE, self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return pow_(base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            if "." in val:
                return Rat(Fraction(val))
            return Rat(int(val))
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "ident":
            order = 0
            if self.peek()[0] == "primes":
                order = len(self.take()[1])
            if self.peek()[1] == "(":
                self.take()
                arg = self.expr()
                self.expect(")")
                if val in CALL_KINDS:
                    if order:
                        raise ParseError(f"{val} takes no derivative marks", pos)
                    return Call(val, arg)
                if self.ctx is not None and not self.ctx.knows(val):
                    raise ParseError(f"unknown function {val!r}", pos)
                return UFunc(val, order, arg)
            if order:
                raise ParseError("derivative marks require an argument list", pos)
            if self.ctx is not None and not self.ctx.knows(val):
                raise ParseError(f"unknown identifier {val!r}", pos)
            return Sym(val)
        raise ParseError(f"unexpected token {val!r}", pos)


def parse(text: str, ctx: Context | None = None) -> Expr:
    """Parse `text` against `ctx`; pass ctx=None to skip identifier checks."""
    p = _Parser(_tokenize(text), ctx)
    node = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", pos)
    return node
