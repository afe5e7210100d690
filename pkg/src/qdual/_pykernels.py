"""Pure-Python term kernels.

A term map is a ``dict`` from packed exponent keys (see :mod:`qdual.exact`)
to nonzero ``int``/``Fraction`` coefficients.  Packed keys add under
monomial multiplication, so every kernel here works on plain integers.

``qdual._ckernels`` is a line-for-line Cython build of this module; keep
the two in step.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd

from qdual.errors import NonExactDivision

BACKEND = "python"


def _cdiv(x, y):
    if type(x) is int and type(y) is int:
        if x % y == 0:
            return x // y
        return Fraction(x, y)
    return x / y


def add(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            del out[k]
    return out


def sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) - c
        if v:
            out[k] = v
        else:
            del out[k]
    return out


def scale(a: dict, coeff, shift: int) -> dict:
    """Multiply every term by ``coeff`` times the monomial with key ``shift``."""
    if not coeff:
        return {}
    if coeff == 1:
        return {k + shift: c for k, c in a.items()}
    return {k + shift: c * coeff for k, c in a.items()}


def _clear(a: dict):
    """(integer term map, common denominator) with a == ints / den."""
    den = 1
    for c in a.values():
        if type(c) is not int:
            d = c.denominator
            den = den * d // gcd(den, d)
    if den == 1:
        return a, 1
    return {k: c.numerator * (den // c.denominator) if type(c) is not int else c * den
            for k, c in a.items()}, den


def sum_terms(maps: list) -> dict:
    """Sum of many term maps, accumulated over one common denominator."""
    den = 1
    for a in maps:
        for c in a.values():
            if type(c) is not int:
                d = c.denominator
                den = den * d // gcd(den, d)
    out: dict = {}
    get = out.get
    for a in maps:
        for k, c in a.items():
            out[k] = get(k, 0) + (c * den if type(c) is int
                                  else c.numerator * (den // c.denominator))
    if den == 1:
        return {k: c for k, c in out.items() if c}
    return {k: _cdiv(c, den) for k, c in out.items() if c}


def mul(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        for kb, cb in b.items():
            return scale(a, cb, kb)
    # integer products are much cheaper than Fraction products
    a, da = _clear(a)
    b, db = _clear(b)
    out: dict = {}
    get = out.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    den = da * db
    if den == 1:
        return {k: c for k, c in out.items() if c}
    return {k: _cdiv(c, den) for k, c in out.items() if c}


_WIDTH = 32
_HALF = 1 << (_WIDTH - 1)
_FULL = 1 << _WIDTH
_MASK = _FULL - 1


def _digits(key: int) -> list:
    """Balanced signed 32-bit digits of a packed key, lowest variable first."""
    out = []
    while key:
        r = key & _MASK
        if r >= _HALF:
            r -= _FULL
        out.append(r)
        key = (key - r) >> _WIDTH
    return out


def _quotient_box(a: dict, b: dict):
    """Per-variable exponent bounds any exact quotient a / b must obey
    (lowest and highest degrees in each variable are additive)."""
    da = [_digits(k) for k in a]
    db = [_digits(k) for k in b]
    nv = max(max(map(len, da)), max(map(len, db)))
    lo, hi = [], []
    for v in range(nv):
        ea = [d[v] if v < len(d) else 0 for d in da]
        eb = [d[v] if v < len(d) else 0 for d in db]
        lo.append(min(ea) - min(eb))
        hi.append(max(ea) - max(eb))
    return lo, hi


def _in_box(key: int, lo: list, hi: list) -> bool:
    d = _digits(key)
    if len(d) > len(lo):
        return False
    for v in range(len(lo)):
        e = d[v] if v < len(d) else 0
        if e < lo[v] or e > hi[v]:
            return False
    return True


def divide(a: dict, b: dict) -> dict:
    """Exact quotient ``a / b``; raises NonExactDivision if there is none.

    Leading-term division in the integer order of packed keys.  For q-only
    operands that order is the degree, and a required quotient key below
    ``lowest(a) - lowest(b)`` proves the division inexact.  With several
    variables every quotient key must lie in the per-variable degree box
    of ``_quotient_box``, which also bounds the descent.
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lead_b = max(b)
    lead_c = b[lead_b]
    if len(b) == 1:
        return {k - lead_b: _cdiv(c, lead_c) for k, c in a.items()}
    floor = min(a) - min(b)
    multi = not (-_HALF < min(a) and max(a) < _HALF and -_HALF < min(b) and max(b) < _HALF)
    if multi:
        lo, hi = _quotient_box(a, b)
        if any(l > h for l, h in zip(lo, hi)):
            raise NonExactDivision("divisor does not divide dividend")
    rem = dict(a)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot = {}
    while rem:
        top = -heapq.heappop(heap)
        if top not in rem:
            continue
        qk = top - lead_b
        if qk < floor or (multi and not _in_box(qk, lo, hi)):
            raise NonExactDivision("divisor does not divide dividend")
        c = _cdiv(rem[top], lead_c)
        quot[qk] = c
        for kb, cb in b.items():
            k = qk + kb
            if k in rem:
                v = rem[k] - c * cb
                if v:
                    rem[k] = v
                else:
                    del rem[k]
            else:
                rem[k] = -c * cb
                heapq.heappush(heap, -k)
    return quot


def _primitive(p: list) -> list:
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            return p
    return [c // g for c in p]


def dense_gcd(a: list, b: list) -> list:
    """Primitive gcd of two integer coefficient lists (constant term first),
    by the primitive pseudo-remainder sequence; leading coefficient > 0."""
    a = _primitive(list(a))
    b = _primitive(list(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        db = len(b) - 1
        lc = b[-1]
        while len(a) - 1 >= db and a:
            c = a[-1]
            shift = len(a) - 1 - db
            a = [x * lc for x in a]
            for i in range(db + 1):
                a[shift + i] -= c * b[i]
            a.pop()
            while a and not a[-1]:
                a.pop()
        a, b = b, (_primitive(a) if a else a)
    if a[-1] < 0:
        a = [-c for c in a]
    return a
