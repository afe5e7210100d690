# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled build of the term kernels in ``qdual._pykernels``.

Same algorithms, same contracts; only the loops are compiled.
"""

import heapq
from fractions import Fraction
from math import gcd

from qdual.errors import NonExactDivision

BACKEND = "cython"


cdef object _cdiv(object x, object y):
    if type(x) is int and type(y) is int:
        if x % y == 0:
            return x // y
        return Fraction(x, y)
    return x / y


def add(dict a, dict b):
    cdef dict out
    cdef object k, c, v
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            del out[k]
    return out


def sub(dict a, dict b):
    cdef dict out = a.copy()
    cdef object k, c, v
    for k, c in b.items():
        v = out.get(k, 0) - c
        if v:
            out[k] = v
        else:
            del out[k]
    return out


def scale(dict a, object coeff, object shift):
    cdef dict out = {}
    cdef object k, c
    if not coeff:
        return out
    if coeff == 1:
        for k, c in a.items():
            out[k + shift] = c
    else:
        for k, c in a.items():
            out[k + shift] = c * coeff
    return out


cdef tuple _clear(dict a):
    cdef object den = 1
    cdef object c, d, k
    for c in a.values():
        if type(c) is not int:
            d = c.denominator
            den = den * d // gcd(den, d)
    if den == 1:
        return a, 1
    cdef dict out = {}
    for k, c in a.items():
        if type(c) is int:
            out[k] = c * den
        else:
            out[k] = c.numerator * (den // c.denominator)
    return out, den


def sum_terms(list maps):
    cdef object den = 1
    cdef object c, d, k, v
    cdef dict a
    cdef dict out = {}
    cdef dict res = {}
    for a in maps:
        for c in a.values():
            if type(c) is not int:
                d = c.denominator
                den = den * d // gcd(den, d)
    for a in maps:
        for k, c in a.items():
            if type(c) is int:
                c = c * den
            else:
                c = c.numerator * (den // c.denominator)
            v = out.get(k)
            out[k] = c if v is None else v + c
    for k, c in out.items():
        if c:
            res[k] = c if den == 1 else _cdiv(c, den)
    return res


def mul(dict a, dict b):
    cdef dict out = {}
    cdef dict res = {}
    cdef list bitems, aitems
    cdef object ka, ca, kb, cb, k, c, da, db, den
    cdef Py_ssize_t i, j, na, nb
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        for kb, cb in b.items():
            return scale(a, cb, kb)
    a, da = _clear(a)
    b, db = _clear(b)
    aitems = list(a.items())
    bitems = list(b.items())
    na = len(aitems)
    nb = len(bitems)
    for i in range(nb):
        kb, cb = bitems[i]
        for j in range(na):
            ka, ca = aitems[j]
            k = ka + kb
            c = out.get(k)
            if c is None:
                out[k] = ca * cb
            else:
                out[k] = c + ca * cb
    den = da * db
    for k, c in out.items():
        if c:
            res[k] = c if den == 1 else _cdiv(c, den)
    return res


cdef int _WIDTH = 32
cdef object _HALF = 1 << 31
cdef object _FULL = 1 << 32
cdef object _MASK = (1 << 32) - 1


cdef list _digits(object key):
    cdef list out = []
    cdef object r
    while key:
        r = key & _MASK
        if r >= _HALF:
            r -= _FULL
        out.append(r)
        key = (key - r) >> _WIDTH
    return out


cdef tuple _quotient_box(dict a, dict b):
    cdef list da = [_digits(k) for k in a]
    cdef list db = [_digits(k) for k in b]
    cdef Py_ssize_t nv = max(max(map(len, da)), max(map(len, db)))
    cdef Py_ssize_t v
    cdef list lo = [], hi = [], ea, eb
    for v in range(nv):
        ea = [d[v] if v < len(d) else 0 for d in da]
        eb = [d[v] if v < len(d) else 0 for d in db]
        lo.append(min(ea) - min(eb))
        hi.append(max(ea) - max(eb))
    return lo, hi


cdef bint _in_box(object key, list lo, list hi):
    cdef list d = _digits(key)
    cdef Py_ssize_t v, nd = len(d)
    cdef object e
    if nd > len(lo):
        return False
    for v in range(len(lo)):
        e = d[v] if v < nd else 0
        if e < lo[v] or e > hi[v]:
            return False
    return True


def divide(dict a, dict b):
    cdef dict rem, quot
    cdef list heap, bitems, lo = None, hi = None
    cdef object lead_b, lead_c, floor, top, qk, c, kb, cb, k, v
    cdef bint multi
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
        for k in range(len(lo)):
            if lo[k] > hi[k]:
                raise NonExactDivision("divisor does not divide dividend")
    rem = a.copy()
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot = {}
    bitems = list(b.items())
    while rem:
        top = -heapq.heappop(heap)
        if top not in rem:
            continue
        qk = top - lead_b
        if qk < floor or (multi and not _in_box(qk, lo, hi)):
            raise NonExactDivision("divisor does not divide dividend")
        c = _cdiv(rem[top], lead_c)
        quot[qk] = c
        for kb, cb in bitems:
            k = qk + kb
            v = rem.get(k)
            if v is None:
                rem[k] = -c * cb
                heapq.heappush(heap, -k)
            else:
                v = v - c * cb
                if v:
                    rem[k] = v
                else:
                    del rem[k]
    return quot


cdef list _primitive(list p):
    cdef object g = 0
    cdef object c
    for c in p:
        g = gcd(g, c)
        if g == 1:
            return p
    return [c // g for c in p]


def dense_gcd(list a, list b):
    cdef Py_ssize_t db, shift, i
    cdef object lc, c
    a = _primitive(list(a))
    b = _primitive(list(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        db = len(b) - 1
        lc = b[db]
        while len(a) - 1 >= db and a:
            c = a[len(a) - 1]
            shift = len(a) - 1 - db
            if lc != 1:
                a = [x * lc for x in a]
            for i in range(db + 1):
                a[shift + i] = a[shift + i] - c * b[i]
            a.pop()
            while a and not a[len(a) - 1]:
                a.pop()
        a, b = b, (_primitive(a) if a else a)
    if a[len(a) - 1] < 0:
        a = [-c for c in a]
    return a
