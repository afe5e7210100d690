"""Independent reference computations used by the tests.

Nothing here calls into qdual: classical values come from math.comb and
plain Fraction recurrences, q-binomials from the q-Pascal rule on dense
coefficient lists.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb


@lru_cache(maxsize=None)
def bernoulli_classical(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{k<=n} C(n+1, k) B_k = 0."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, k) * bernoulli_classical(k) for k in range(n)) / (n + 1)


@lru_cache(maxsize=None)
def stirling2_classical(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2_classical(n - 1, k) + stirling2_classical(n - 1, k - 1)


def binomial_transform(a: list) -> list:
    """a*_n = sum_i C(n, i) (-1)^i a_i."""
    return [sum(comb(n, i) * (-1) ** i * a[i] for i in range(n + 1)) for n in range(len(a))]


@lru_cache(maxsize=None)
def gauss_pascal(n: int, k: int) -> tuple:
    """Coefficients (constant first) of {n brack k} by
    {n brack k} = {n-1 brack k-1} + q^k {n-1 brack k}."""
    if k < 0 or k > n:
        return ()
    if k == 0 or k == n:
        return (1,)
    a = list(gauss_pascal(n - 1, k - 1))
    b = gauss_pascal(n - 1, k)
    out = [0] * max(len(a), len(b) + k)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + k] += c
    return tuple(out)


def eval_dense(coeffs, q) -> Fraction:
    return sum((Fraction(c) * Fraction(q) ** i for i, c in enumerate(coeffs)), Fraction(0))


def gauss_numeric(n: int, k: int, q) -> Fraction:
    return eval_dense(gauss_pascal(n, k), q)


def qint_numeric(n: int, q) -> Fraction:
    return sum((Fraction(q) ** i for i in range(n)), Fraction(0))


def qpoch_numeric(a, n: int, q) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= 1 - Fraction(a) * Fraction(q) ** i
    return out


def sun_identities_q1(a: list, x, z, k: int, l: int):
    """The three q = 1 identities (classical dual a*_n = sum C(n,i)(-1)^i a_i,
    A_n(x) = sum C(n,i)(-1)^i a_i x^{n-i}, bracket -> ordinary binomial)
    evaluated exactly; returns three (lhs, rhs) pairs."""
    x, z = Fraction(x), Fraction(z)
    star = binomial_transform(a)

    def A(n, y):
        return sum(comb(n, i) * (-1) ** i * a[i] * y ** (n - i) for i in range(n + 1))

    def A_star(n, y):
        return sum(comb(n, i) * (-1) ** i * star[i] * y ** (n - i) for i in range(n + 1))

    w = 1 - z - x
    s1 = (-1) ** l * sum(Fraction(comb(l, j)) * x ** (l - j) * A_star(k + j + 1, z) / (k + j + 1)
                         for j in range(l + 1))
    s1 += (-1) ** k * sum(Fraction(comb(k, j)) * x ** (k - j) * A(l + j + 1, w) / (l + j + 1)
                          for j in range(k + 1))
    r1 = a[0] * (-x) ** (k + l + 1) / ((k + l + 1) * comb(k + l, k))
    s2 = (-1) ** l * sum(comb(l, j) * x ** (l - j) * A_star(k + j, z) for j in range(l + 1))
    r2 = (-1) ** k * sum(comb(k, j) * x ** (k - j) * A(l + j, w) for j in range(k + 1))
    s3 = (-1) ** (l + 1) * sum(comb(l + 1, j) * x ** (l + 1 - j) * (k + j + 1) * A_star(k + j, z)
                               for j in range(l + 2))
    r3 = (-1) ** k * sum(comb(k + 1, j) * x ** (k + 1 - j) * (l + j + 1) * A(l + j, w)
                         for j in range(k + 2))
    return [(s1, r1), (s2, r2), (s3, r3)]
