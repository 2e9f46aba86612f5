"""Canonical form: multivariate rational functions over Q in a set of
multiplicative generators, with factored denominators.

A generator is one of
  ("p", base)        -- plain base, contributes base**e
  ("s", base, core)  -- symbolic power, contributes base**(e*core)
  ("e", core)        -- exponential, contributes exp(e*core)
with e a Fraction.  Symbolic exponents and exp arguments are split per
numerator monomial over their common denominator, so exponent arithmetic is
additive: T^(2*beta) and (T^beta)^2 land on the same generator, exp(x+y)
equals exp(x)*exp(y), and rho^((g3+g4)/D) meets rho^(g3/D)*rho^(g4/D).
Transcendental atoms other than exp (sin, ln, arccos, unspecified
functions, ...) are opaque plain generators; their identities are left to
the numeric zero-test.

A monomial maps generators to positive Fraction exponents; a polynomial
maps monomials to nonzero Fraction coefficients.  An expression
canonicalizes to a numerator polynomial over a *factored* denominator (a
sorted tuple of (monic polynomial, multiplicity) pairs, never expanded), so
sums with structurally equal denominator factors do not swell.  Equal
values in the rational fragment over the generators reduce to an identical
tree up to uncancelled polynomial factors, and the zero class is decided
exactly by the numerator polynomial.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .expr import (
    Add, Call, Expr, ExprError, Mul, Pow, Rat, Sym, UFunc,
    ZERO, ONE, add_, mul_, pow_,
)


class CanonicalError(ExprError):
    pass


class RF(NamedTuple):
    num: dict    # monomial -> Fraction
    den: tuple   # ((poly, multiplicity), ...), each poly monic, sorted


def _one_poly():
    return {(): Fraction(1)}


_ONE_POLY = _one_poly()


# --- generators -------------------------------------------------------------

_gen_key_cache: dict = {}


def _gen_key(g):
    k = _gen_key_cache.get(g)
    if k is None:
        if g[0] == "p":
            k = (0, g[1].key())
        elif g[0] == "s":
            k = (1, g[1].key(), g[2].key())
        else:
            k = (2, g[1].key())
        _gen_key_cache[g] = k
    return k


def _gen_value(g, e: Fraction) -> Expr:
    if g[0] == "p":
        return g[1] if e == 1 else Pow(g[1], Rat(e))
    if g[0] == "s":
        exponent = g[2] if e == 1 else mul_(Rat(e), g[2])
        return Pow(g[1], exponent)
    return Call("exp", g[1] if e == 1 else mul_(Rat(e), g[1]))


def _compound_base(b: Expr) -> bool:
    # bases whose integer powers expand into polynomial arithmetic
    return isinstance(b, (Add, Mul, Rat))


# --- monomials ---------------------------------------------------------------

def _mono(pairs) -> tuple:
    return tuple(sorted(((g, e) for g, e in pairs if e != 0), key=lambda it: _gen_key(it[0])))


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 == g2:
            e = e1 + e2
            if e:
                out.append((g1, e))
            i += 1
            j += 1
        elif _gen_key(g1) < _gen_key(g2):
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_key(m: tuple):
    # graded order: total degree first, so that the rational-part split of
    # symbolic exponents (e.g. (beta*g4+g3)/D = 1 + g4/D) lands on the same
    # leading monomial in numerator and denominator
    return (sum(e for _, e in m), tuple((_gen_key(g), e) for g, e in m))


# --- polynomial arithmetic ---------------------------------------------------

def _p_add(p: dict, q: dict) -> dict:
    if not p:
        return dict(q)
    if not q:
        return dict(p)
    out = dict(p)
    for m, c in q.items():
        nc = out.get(m, Fraction(0)) + c
        if nc == 0:
            out.pop(m, None)
        else:
            out[m] = nc
    return out


def _p_scale(p: dict, c: Fraction) -> dict:
    if c == 0:
        return {}
    if c == 1:
        return dict(p)
    return {m: v * c for m, v in p.items()}


def _p_mul(p: dict, q: dict) -> dict:
    if not p or not q:
        return {}
    if p == _ONE_POLY:
        return dict(q)
    if q == _ONE_POLY:
        return dict(p)
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            nc = out.get(m, Fraction(0)) + c1 * c2
            if nc == 0:
                out.pop(m, None)
            else:
                out[m] = nc
    return out


def _p_pow(p: dict, n: int) -> dict:
    out = _one_poly()
    base = dict(p)
    k = n
    while k > 0:
        if k & 1:
            out = _p_mul(out, base)
        k >>= 1
        if k:
            base = _p_mul(base, base)
    return out


def _leading_mono(p: dict) -> tuple:
    return max(p.keys(), key=_mono_key)


def _poly_key(p: dict):
    return tuple(sorted((_mono_key(m), c) for m, c in p.items()))


# --- factored denominators -----------------------------------------------------

def _den_mul(d1: tuple, d2: tuple) -> tuple:
    if not d1:
        return d2
    if not d2:
        return d1
    acc: dict = {}
    for f, m in d1 + d2:
        k = _poly_key(f)
        if k in acc:
            acc[k] = (f, acc[k][1] + m)
        else:
            acc[k] = (f, m)
    return tuple(acc[k] for k in sorted(acc))


def _den_pow(d: tuple, n: int) -> tuple:
    return tuple((f, m * n) for f, m in d)


def _den_expand(d) -> dict:
    out = _one_poly()
    for f, m in d:
        out = _p_mul(out, _p_pow(f, m))
    return out


def _den_lcm_parts(d1: tuple, d2: tuple):
    """(lcm, complement-for-1, complement-for-2) by factor matching."""
    k1 = {_poly_key(f): (f, m) for f, m in d1}
    k2 = {_poly_key(f): (f, m) for f, m in d2}
    lcm = {}
    c1 = []
    c2 = []
    for k in set(k1) | set(k2):
        f = (k1.get(k) or k2.get(k))[0]
        m1 = k1.get(k, (f, 0))[1]
        m2 = k2.get(k, (f, 0))[1]
        m = max(m1, m2)
        lcm[k] = (f, m)
        if m > m1:
            c1.append((f, m - m1))
        if m > m2:
            c2.append((f, m - m2))
    return tuple(lcm[k] for k in sorted(lcm)), tuple(c1), tuple(c2)


# --- normalization -------------------------------------------------------------

def _common_gens(p: dict) -> dict:
    mins = None
    for m in p:
        md = dict(m)
        if mins is None:
            mins = md
        else:
            mins = {g: min(mins[g], md[g]) for g in mins if g in md}
        if not mins:
            return {}
    return mins or {}


def _has_reducible(p: dict) -> bool:
    for m in p:
        for g, e in m:
            if g[0] == "p" and e >= 1 and _compound_base(g[1]):
                return True
    return False


def _reduce_poly(p: dict) -> RF:
    """Expand integer powers of compound bases (e.g. (2*lam*g)^(1/2) squared
    becomes the polynomial 2*lam*g) so they rejoin polynomial arithmetic."""
    plain: dict = {}
    pending = []
    for m, c in p.items():
        irred = []
        red = []
        for g, e in m:
            if g[0] == "p" and e >= 1 and _compound_base(g[1]):
                k = math.floor(e)
                rem = e - k
                red.append((g[1], k))
                if rem:
                    irred.append((g, rem))
            else:
                irred.append((g, e))
        if red:
            pending.append((_mono(irred), c, red))
        else:
            nc = plain.get(m, Fraction(0)) + c
            if nc == 0:
                plain.pop(m, None)
            else:
                plain[m] = nc
    out = RF(plain, ())
    for m, c, red in pending:
        term = RF({m: c}, ())
        for base, k in red:
            term = _rf_mul(term, _rf_pow_int(to_rf(base), k))
        out = _rf_add(out, term)
    return out


def _normalize(num: dict, den: tuple) -> RF:
    if not num:
        return RF({}, ())
    guard = 0
    while _has_reducible(num):
        guard += 1
        if guard > 50:
            raise CanonicalError("runaway compound-power reduction")
        r = _reduce_poly(num)
        num = r.num
        den = _den_mul(den, r.den)
        if not num:
            return RF({}, ())
    # make factors monic, fold scalars into the numerator, merge duplicates
    acc: dict = {}
    scale = Fraction(1)
    for f, m in den:
        if not f:
            raise CanonicalError("division by an expression that is identically zero")
        lc = f[_leading_mono(f)]
        if lc != 1:
            f = _p_scale(f, 1 / lc)
            scale *= lc ** m
        if f == _ONE_POLY:
            continue
        k = _poly_key(f)
        if k in acc:
            acc[k] = (f, acc[k][1] + m)
        else:
            acc[k] = (f, m)
    if scale != 1:
        num = _p_scale(num, 1 / scale)

    def strip_num(p, amounts):
        return {_mono([(g, e - amounts.get(g, 0)) for g, e in mo]): c
                for mo, c in p.items()}

    # single-generator monomial factors pool their exponents (so 1/exp(x)^2
    # и 1/exp(2x) coincide) and cancel against powers common to the numerator
    ncommon = _common_gens(num)
    gen_pool: dict = {}
    others = []
    for k in sorted(acc):
        f, m = acc[k]
        if len(f) == 1:
            (fm, _), = f.items()
            if len(fm) == 1:
                g, e = fm[0]
                gen_pool[g] = gen_pool.get(g, Fraction(0)) + e * m
                continue
            if fm and ncommon:
                # multi-generator monomial: strip whole units only
                while m > 0 and all(ncommon.get(g, 0) >= e for g, e in fm):
                    amounts = dict(fm)
                    num = strip_num(num, amounts)
                    ncommon = {g: e - amounts.get(g, 0) for g, e in ncommon.items()}
                    ncommon = {g: e for g, e in ncommon.items() if e > 0}
                    m -= 1
        if m > 0:
            others.append((f, m))
    factors = others
    for g in sorted(gen_pool, key=_gen_key):
        tot = gen_pool[g]
        avail = ncommon.get(g, Fraction(0))
        cut = min(avail, tot)
        if cut > 0:
            num = strip_num(num, {g: cut})
            ncommon[g] = avail - cut
            tot -= cut
        if tot:
            factors.append(({_mono([(g, tot)]): Fraction(1)}, 1))
    factors.sort(key=lambda it: _poly_key(it[0]))
    return RF(num, tuple(factors))


# --- rational function layer -------------------------------------------------

def _rf_const(c: Fraction) -> RF:
    return RF({(): c} if c != 0 else {}, ())


def _rf_add(a: RF, b: RF) -> RF:
    if not a.num:
        return b
    if not b.num:
        return a
    if a.den == b.den:
        return _normalize(_p_add(a.num, b.num), a.den)
    lcm, ca, cb = _den_lcm_parts(a.den, b.den)
    na = _p_mul(a.num, _den_expand(ca)) if ca else a.num
    nb = _p_mul(b.num, _den_expand(cb)) if cb else b.num
    return _normalize(_p_add(na, nb), lcm)


def _rf_mul(a: RF, b: RF) -> RF:
    if not a.num or not b.num:
        return RF({}, ())
    return _normalize(_p_mul(a.num, b.num), _den_mul(a.den, b.den))


def _as_factor(p: dict) -> tuple:
    """(monic factor, scalar correction) for using poly p as a denominator."""
    lc = p[_leading_mono(p)]
    return (_p_scale(p, 1 / lc) if lc != 1 else p), lc


def _rf_div(a: RF, b: RF) -> RF:
    if not b.num:
        raise CanonicalError("division by an expression that is identically zero")
    if not a.num:
        return RF({}, ())
    num = _p_mul(a.num, _den_expand(b.den)) if b.den else a.num
    if b.num == _ONE_POLY:
        return _normalize(num, a.den)
    f, lc = _as_factor(b.num)
    num = _p_scale(num, 1 / lc)
    return _normalize(num, _den_mul(a.den, ((f, 1),)))


def _rf_pow_int(a: RF, n: int) -> RF:
    if n == 0:
        return _rf_const(Fraction(1))
    if n < 0:
        if not a.num:
            raise CanonicalError("division by an expression that is identically zero")
        inv_num = _den_expand(a.den) if a.den else _one_poly()
        if a.num == _ONE_POLY:
            return _normalize(_p_pow(inv_num, -n), ())
        f, lc = _as_factor(a.num)
        return _normalize(_p_scale(_p_pow(inv_num, -n), Fraction(1) / lc ** (-n)),
                          ((f, -n),))
    return _normalize(_p_pow(a.num, n), _den_pow(a.den, n))


# --- Expr -> RF ---------------------------------------------------------------

_to_rf_memo: dict = {}
_canon_memo: dict = {}


def clear_cache():
    _to_rf_memo.clear()
    _canon_memo.clear()


def to_rf(e: Expr) -> RF:
    r = _to_rf_memo.get(e)
    if r is None:
        r = _to_rf(e)
        _to_rf_memo[e] = r
    return r


def _atom_rf(atom: Expr) -> RF:
    return RF({_mono([(("p", atom), Fraction(1))]): Fraction(1)}, ())


def _to_rf(e: Expr) -> RF:
    if isinstance(e, Rat):
        return _rf_const(e.value)
    if isinstance(e, Sym):
        return _atom_rf(e)
    if isinstance(e, Add):
        out = _rf_const(Fraction(0))
        for t in e.terms:
            out = _rf_add(out, to_rf(t))
        return out
    if isinstance(e, Mul):
        out = _rf_const(Fraction(1))
        for f in e.factors:
            out = _rf_mul(out, to_rf(f))
        return out
    if isinstance(e, Pow):
        return _rf_pow(e.base, e.exponent)
    if isinstance(e, Call):
        if e.kind == "exp":
            return _rf_exp(canonicalize(e.arg))
        if e.kind == "sqrt":
            return _rf_pow(e.arg, Rat(1, 2))
        return _atom_rf(Call(e.kind, canonicalize(e.arg)))
    if isinstance(e, UFunc):
        return _atom_rf(UFunc(e.name, e.order, canonicalize(e.arg)))
    raise CanonicalError(f"cannot canonicalize {e!r}")


def _gen_rf(g, e: Fraction) -> RF:
    if e > 0:
        return RF({_mono([(g, e)]): Fraction(1)}, ())
    return RF(_ONE_POLY.copy(), (({_mono([(g, -e)]): Fraction(1)}, 1),))


def _rf_pow(base: Expr, exponent: Expr) -> RF:
    b = canonicalize(base)
    x = canonicalize(exponent)
    while isinstance(b, Pow):
        x = canonicalize(mul_(b.exponent, x))
        b = b.base
    if isinstance(b, Call) and b.kind == "exp":
        return _rf_exp(canonicalize(mul_(b.arg, x)))
    if isinstance(b, Rat):
        if b.value == 1:
            return _rf_const(Fraction(1))
        if b.value == 0:
            if isinstance(x, Rat) and x.value > 0:
                return _rf_const(Fraction(0))
            raise CanonicalError("zero base with non-positive exponent")
    if isinstance(x, Rat):
        return _rf_rational_power(b, x.value)
    # symbolic exponent: split off the rational part, then one generator per
    # numerator monomial over the common denominator, so exponent arithmetic
    # is additive (rho^((g3+g4)/D) meets rho^(g3/D) * rho^(g4/D))
    erf = to_rf(x)
    ed = _den_expand(erf.den) if erf.den else _one_poly()
    lead = _leading_mono(ed)
    q = erf.num.get(lead, Fraction(0)) / ed[lead]
    rnum = _p_add(erf.num, _p_scale(ed, -q))
    out = _rf_rational_power(b, q) if q else _rf_const(Fraction(1))
    for m, c in rnum.items():
        core = from_rf(RF({m: Fraction(1)}, erf.den))
        out = _rf_mul(out, _gen_rf(("s", b, core), c))
    return out


def _rf_rational_power(b: Expr, f: Fraction) -> RF:
    if f == 0:
        return _rf_const(Fraction(1))
    if isinstance(b, Rat) and f.denominator == 1:
        return _rf_const(b.value ** f.numerator)
    n = math.floor(f)
    rem = f - n
    out = _rf_pow_int(to_rf(b), n) if n else _rf_const(Fraction(1))
    if rem:
        out = _rf_mul(out, _gen_rf(("p", b), rem))
    return out


def _rf_exp(arg: Expr) -> RF:
    erf = to_rf(arg)
    if not erf.num:
        return _rf_const(Fraction(1))
    out = _rf_const(Fraction(1))
    for m, c in erf.num.items():
        core = from_rf(RF({m: Fraction(1)}, erf.den))
        out = _rf_mul(out, _gen_rf(("e", core), c))
    return out


# --- RF -> Expr ---------------------------------------------------------------

def _poly_expr(p: dict) -> Expr:
    if not p:
        return ZERO
    terms = []
    for m in sorted(p.keys(), key=_mono_key, reverse=True):
        c = p[m]
        factors = [_gen_value(g, e) for g, e in m]
        if c != 1 or not factors:
            factors.insert(0, Rat(c))
        terms.append(mul_(*factors) if len(factors) > 1 else factors[0])
    return add_(*terms) if len(terms) > 1 else terms[0]


def from_rf(rf: RF) -> Expr:
    n = _poly_expr(rf.num)
    if not rf.den:
        return n
    if isinstance(n, Rat) and n.value == 0:
        return ZERO
    parts = [n] if not (isinstance(n, Rat) and n.value == 1) else []
    for f, m in rf.den:
        parts.append(pow_(_poly_expr(f), Rat(-m)))
    return mul_(*parts)


def den_value_expr(rf: RF) -> Expr:
    """The (positive-power) denominator as an expression, for evaluation."""
    if not rf.den:
        return ONE
    parts = [pow_(_poly_expr(f), Rat(m)) for f, m in rf.den]
    return mul_(*parts)


def canonicalize(e: Expr) -> Expr:
    """Idempotent normal form; equal values in the rational fragment over
    the generators map to an identical tree (up to uncancelled common
    polynomial factors, which the zero-test clears exactly)."""
    r = _canon_memo.get(e)
    if r is None:
        r = from_rf(to_rf(e))
        _canon_memo[e] = r
        _canon_memo[r] = r
    return r


def is_zero_poly(e: Expr) -> bool:
    """Exact test: canonical numerator is the zero polynomial."""
    return not to_rf(e).num
