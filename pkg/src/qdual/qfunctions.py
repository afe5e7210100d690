"""q-integers, q-shifted factorials, Gaussian binomials, terminating basic
hypergeometric series and the q-derivative.

Gaussian binomials with integer arguments are Laurent polynomials in ``q``
over the base registry; they combine with values over any larger registry.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

from qdual.errors import DomainError
from qdual.exact import (
    BASE,
    LaurentPoly,
    RatFunc,
    WIDTH,
    as_ratfunc,
    decode,
    rf_sum,
)
from qdual.report import IdentityInstance, IdentityReport, settle

Q = LaurentPoly.var("q")
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly.const(0)


def binom2(n: int) -> int:
    """C(n, 2) = n(n-1)/2, valid for every integer n."""
    return n * (n - 1) // 2


def qpow(e: int) -> LaurentPoly:
    return LaurentPoly.qpow(e)


@lru_cache(maxsize=None)
def q_int(k: int) -> LaurentPoly:
    """[k]_q = (1 - q^k)/(1 - q); [-k]_q = -q^{-k} [k]_q."""
    if k >= 0:
        return LaurentPoly({i: 1 for i in range(k)}, BASE, max(k - 1, 0))
    return LaurentPoly({i: -1 for i in range(k, 0)}, BASE, -k)


@lru_cache(maxsize=None)
def q_factorial(n: int) -> LaurentPoly:
    """[n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1."""
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    if n == 0:
        return ONE
    return q_factorial(n - 1) * q_int(n)


def q_pochhammer(a, n: int):
    """(a; q)_n = (1 - a)(1 - aq)...(1 - aq^{n-1}).

    Returns a LaurentPoly for scalar/polynomial ``a`` and a RatFunc for a
    rational-function ``a``.
    """
    if n < 0:
        raise ValueError("q_pochhammer needs n >= 0")
    if not isinstance(a, (LaurentPoly, RatFunc)):
        a = LaurentPoly.const(a)
    if isinstance(a, LaurentPoly):
        out = LaurentPoly.const(1, a.reg)
        for i in range(n):
            out = out * (1 - a.mul_qpow(i))
        return out
    num = LaurentPoly.const(1, a.reg)
    for i in range(n):
        num = num * (a.den - a.num.mul_qpow(i))
    return RatFunc(num, a.den ** n)


@lru_cache(maxsize=None)
def q_pochhammer_q(n: int) -> LaurentPoly:
    """(q; q)_n."""
    if n == 0:
        return ONE
    return q_pochhammer_q(n - 1) * (1 - qpow(n))


@lru_cache(maxsize=None)
def gauss_binomial(n: int, k: int) -> LaurentPoly:
    """Gaussian binomial {n brack k} for integer n (negative allowed).

    Zero for k < 0 and for 0 <= n < k; otherwise the k-fold product
    (1-q^n)...(1-q^{n-k+1}) divided exactly by (q;q)_k.
    """
    if k < 0:
        return ZERO
    if k == 0:
        return ONE
    if 0 <= n < k:
        return ZERO
    num = ONE
    for i in range(k):
        num = num * (1 - qpow(n - i))
    return num.exact_div(q_pochhammer_q(k))


def gauss_binomial_symbolic(X, shift: int, k: int) -> RatFunc:
    """{alpha + shift brack k} with q^alpha represented by the variable ``X``.

    ``X`` is a variable name (in the standard registry) or a LaurentPoly /
    RatFunc standing for q^alpha.
    """
    if k < 0:
        raise ValueError("gauss_binomial_symbolic needs k >= 0")
    if isinstance(X, str):
        from qdual.exact import standard_registry
        X = LaurentPoly.var(X, standard_registry())
    Xr = as_ratfunc(X)
    num = LaurentPoly.const(1, Xr.reg)
    for i in range(k):
        num = num * (Xr.den - Xr.num.mul_qpow(shift - i))
    return RatFunc(num, q_pochhammer_q(k) * Xr.den ** k)


def qbinomial_theorem_expand(z, n: int):
    """sum_j {n brack j} (-1)^j z^j q^{C(j,2)}; equals (z; q)_n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    terms = []
    zp = as_ratfunc(z) ** 0
    for j in range(n + 1):
        terms.append(zp * gauss_binomial(n, j).mul_qpow(binom2(j), (-1) ** j))
        zp = zp * z
    return rf_sum(terms)


@dataclass(frozen=True)
class PhiSpec:
    """Parameters of a terminating series sum_{m=0}^{term_count}
    [prod (u;q)_m / prod (l;q)_m] argument^m / (q;q)_m.

    A lower parameter given as ``0`` contributes the factor 1.
    """

    uppers: tuple
    lowers: tuple
    argument: object
    term_count: int

    def __init__(self, uppers: Sequence, lowers: Sequence, argument, term_count: int):
        if term_count < 0:
            raise ValueError("term_count must be >= 0")
        object.__setattr__(self, "uppers", tuple(uppers))
        object.__setattr__(self, "lowers", tuple(lowers))
        object.__setattr__(self, "argument", argument)
        object.__setattr__(self, "term_count", term_count)


def phi_series(spec: PhiSpec):
    """Exact finite sum of the series described by ``spec``.

    Raises DomainError when a lower-parameter factor vanishes inside the
    summation range.
    """
    ups = [as_ratfunc(u) for u in spec.uppers]
    lows = [as_ratfunc(c) for c in spec.lowers]
    z = as_ratfunc(spec.argument)
    term = as_ratfunc(ONE)
    terms = [term]
    for m in range(1, spec.term_count + 1):
        num = z
        for u in ups:
            num = num * (1 - u.mul_qpow(m - 1))
        den = as_ratfunc(1 - qpow(m))
        for c in lows:
            f = 1 - c.mul_qpow(m - 1)
            if f.is_zero():
                raise DomainError(f"lower parameter factor vanishes at term {m}")
            den = den * f
        term = term * num / den
        if term.is_zero():
            break
        terms.append(term)
    return rf_sum(terms)


def q_derivative(f: LaurentPoly, t: Union[str, int]) -> LaurentPoly:
    """D_q f = (f(tq) - f(t)) / ((q - 1) t) for f polynomial in ``t``."""
    tv = f.reg.var_id(t)
    if tv == 0:
        raise ValueError("cannot differentiate with respect to q itself")
    for k in f.terms:
        if decode(k).get(tv, 0) < 0:
            raise DomainError("q_derivative needs f polynomial in t")
    tvar = LaurentPoly.var(tv, f.reg)
    shifted = f.substitute({tv: tvar * Q}).as_poly()
    return (shifted - f).exact_div((Q - 1) * tvar)


def q_derivative_termwise(f: LaurentPoly, t: Union[str, int]) -> LaurentPoly:
    """Same operator from D_q t^n = [n]_q t^{n-1}, applied term by term."""
    tv = f.reg.var_id(t)
    step = 1 << (WIDTH * tv)
    out: dict = {}
    for k, c in f.terms.items():
        e = decode(k).get(tv, 0)
        if e < 0:
            raise DomainError("q_derivative needs f polynomial in t")
        for j in range(e):
            kk = k - step + j
            v = out.get(kk, 0) + c
            if v:
                out[kk] = v
            else:
                del out[kk]
    return LaurentPoly(out, f.reg)


def lagrange_sides(k: int, l: int):
    """Partial-fraction identity at x = -q^{-k-1}, a_i = q^i."""
    lhs = []
    for j in range(l + 1):
        den = q_pochhammer_q(j) * q_pochhammer_q(l - j) * (1 - qpow(k + j + 1))
        lhs.append(RatFunc(qpow(binom2(j + 1) - l * (k + j + 1)) * (-1) ** j, den))
    rhs = [RatFunc(ONE, q_pochhammer(qpow(k + 1), l + 1))]
    return lhs, rhs


def verify_lagrange(k: int, l: int) -> IdentityReport:
    if k < 0 or l < 0:
        raise DomainError("verify_lagrange needs k, l >= 0")
    started = time.perf_counter()
    lhs, rhs = lagrange_sides(k, l)
    return settle(IdentityInstance.make("LAGRANGE", {"k": k, "l": l}), lhs, rhs, started)
