"""Catalog of the q-dual identities and the checker that verifies them.

Every entry builds its two sides as lists of summands over free
indeterminates (sequence entries ``a_i``, and ``x``, ``z``, ``t``, ``X``,
``Y`` where needed).  Symbolic mode sums the sides exactly and compares by
cross-multiplication; point mode evaluates the summands at random rational
points.  Entries whose printed form is suspect carry a ``corrected`` variant
next to ``as-printed``; the suite accepts, per identity, the variant that
holds on every instance.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import time
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

from qdual.errors import DomainError
from qdual.exact import LaurentPoly, RatFunc, as_ratfunc, rf_sum
from qdual.qfunctions import (
    PhiSpec,
    binom2 as C2,
    gauss_binomial as G,
    gauss_binomial_symbolic,
    lagrange_sides,
    phi_series,
    q_factorial,
    q_int as qi,
    q_pochhammer,
    qpow,
)
from qdual.report import IdentityInstance, IdentityReport, settle
from qdual.sequences import (
    A_at_bracket,
    A_poly,
    A_star_poly,
    bracket_powers,
    q_bernoulli,
    q_bernoulli_dual,
    q_stirling2,
    sym,
    symbolic_sequence,
)

PRINTED = ("as-printed",)
BOTH = ("as-printed", "corrected")


@dataclass(frozen=True)
class Identity:
    id: str
    title: str
    params: tuple
    build: Callable
    ranges: dict
    variants: tuple = PRINTED
    at_q1: bool = False
    domain: Optional[Callable[[dict], bool]] = None

    def in_domain(self, p: dict) -> bool:
        if any(p.get(n, -1) < 0 for n in self.params):
            return False
        return self.domain(p) if self.domain else True


def _t(v, e: int, sign: int = 1):
    """v * sign * q^e."""
    if not isinstance(v, (LaurentPoly, RatFunc)):
        v = LaurentPoly.const(v)
    return v.mul_qpow(e, sign)


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


# --------------------------------------------------------------------------
# Sum identities over a sequence and its dual, plus the partial-fraction lemma
# --------------------------------------------------------------------------

def _thm1_1(p, variant):
    k, l = p["k"], p["l"]
    a = symbolic_sequence()
    st = a.star
    lhs = [_t(G(l, j) * st[k + j + 1], C2(j + 1) - l * (k + j + 1), _sgn(j)) / qi(k + j + 1)
           for j in range(l + 1)]
    lhs += [_t(G(k, j) * a[l + j + 1], C2(j + 1), _sgn(j)) / qi(l + j + 1) for j in range(k + 1)]
    rhs = [a[0] / (qi(k + l + 1) * G(k + l, k))]
    return lhs, rhs


def _thm1_2(p, variant):
    k, l = p["k"], p["l"]
    a = symbolic_sequence()
    st = a.star
    lhs = [_t(G(l, j) * st[k + j], C2(j + 1) - l * (k + j), _sgn(j)) for j in range(l + 1)]
    rhs = [_t(G(k, j) * a[l + j], C2(j), _sgn(j)) for j in range(k + 1)]
    return lhs, rhs


def _thm1_3(p, variant):
    k, l = p["k"], p["l"]
    a = symbolic_sequence()
    st = a.star
    lhs = [_t(G(l + 1, j) * qi(k + j + 1) * st[k + j], C2(j) - l * (k + j) - k, _sgn(j + 1))
           for j in range(l + 2)]
    rhs = [_t(G(k + 1, j) * qi(l + j + 1) * a[l + j], C2(j - 1), _sgn(j)) for j in range(k + 2)]
    return lhs, rhs


def _lagrange(p, variant):
    return lagrange_sides(p["k"], p["l"])


# --------------------------------------------------------------------------
# Bracket identities and the expansions they are built from
# --------------------------------------------------------------------------

class _Family:
    """Lazily computed A_n^*(z) and A_n([1, -z, -x]) (or their q-Bernoulli
    counterparts) shared by the summands of one instance."""

    def __init__(self, star_at, bracket_at):
        self._star_at = star_at
        self._bracket_at = bracket_at
        self._s: dict = {}
        self._b: dict = {}

    def star(self, n):
        if n not in self._s:
            self._s[n] = self._star_at(n)
        return self._s[n]

    def bracket(self, n):
        if n not in self._b:
            self._b[n] = self._bracket_at(n)
        return self._b[n]


def _sequence_family(top: int):
    a = symbolic_sequence()
    x, z = sym("x"), sym("z")
    bp = bracket_powers((1, -z, -x), top)
    fam = _Family(lambda n: A_star_poly(a, n, z), lambda n: A_at_bracket(a, n, (1, -z, -x), bp))
    return a[0], x, fam


def _bernoulli_family(top: int, variant: str):
    x, z = sym("x"), sym("z")
    bp = bracket_powers((1, -x, -z), top)
    coeff = q_bernoulli_dual if variant == "corrected" else q_bernoulli

    def star(n):
        zp = [LaurentPoly.const(1)]
        for _ in range(n):
            zp.append(zp[-1] * z)
        return _sum(_t(G(n, i) * coeff(i) * zp[n - i], 0, _sgn(i)) for i in range(n + 1))

    def at_bracket(n):
        return _sum(G(n, i) * q_bernoulli(i) * bp[n - i] for i in range(n + 1))

    return LaurentPoly.const(1), x, _Family(star, at_bracket)


def _sum(terms):
    return rf_sum(terms)


def _x_pow(x, n):
    return x ** n


def _thm2_1_sides(k, l, a0, x, fam):
    lhs = [_t(G(l, j) * _x_pow(x, l - j) * fam.star(k + j + 1), -k * j - C2(k + 1), _sgn(l))
           / qi(k + j + 1) for j in range(l + 1)]
    lhs += [_t(G(k, j) * _x_pow(x, k - j) * fam.bracket(l + j + 1), C2(j + 1) - k * (l + j + 1),
               _sgn(k)) / qi(l + j + 1) for j in range(k + 1)]
    rhs = [_t(a0 * (-x) ** (k + l + 1), 0) / (qi(k + l + 1) * G(k + l, k))]
    return lhs, rhs


def _thm2_2_sides(k, l, x, fam):
    lhs = [_t(G(l, j) * _x_pow(x, l - j) * fam.star(k + j), k * (l - j), _sgn(l))
           for j in range(l + 1)]
    rhs = [_t(G(k, j) * _x_pow(x, k - j) * fam.bracket(l + j), C2(k - j), _sgn(k))
           for j in range(k + 1)]
    return lhs, rhs


def _thm2_3_sides(k, l, x, fam):
    lhs = [_t(G(l + 1, j) * _x_pow(x, l + 1 - j) * qi(k + j + 1) * fam.star(k + j),
              (k + 1) * (l - j) + 1, _sgn(l + 1)) for j in range(l + 2)]
    rhs = [_t(G(k + 1, j) * _x_pow(x, k + 1 - j) * qi(l + j + 1) * fam.bracket(l + j),
              C2(k - j) - j, _sgn(k)) for j in range(k + 2)]
    return lhs, rhs


def _thm2_1(p, variant):
    k, l = p["k"], p["l"]
    a0, x, fam = _sequence_family(k + l + 1)
    return _thm2_1_sides(k, l, a0, x, fam)


def _thm2_2(p, variant):
    k, l = p["k"], p["l"]
    _, x, fam = _sequence_family(k + l)
    return _thm2_2_sides(k, l, x, fam)


def _thm2_3(p, variant):
    k, l = p["k"], p["l"]
    _, x, fam = _sequence_family(k + l + 1)
    return _thm2_3_sides(k, l, x, fam)


def _qax(p, variant):
    n = p["n"]
    a = symbolic_sequence()
    x = sym("x")
    return [A_at_bracket(a, n, (1, -x))], [_t(A_star_poly(a, n, x), 0, _sgn(n))]


def _qinver(p, variant):
    n = p["n"]
    a = symbolic_sequence()
    x, z = sym("x"), sym("z")
    rhs = [_t(G(n, j) * x ** j * A_star_poly(a, n - j, z), 0, _sgn(n)) for j in range(n + 1)]
    return [A_at_bracket(a, n, (1, -z, -x))], rhs


def _qlem_q1(p, variant):
    n = p["n"]
    a = symbolic_sequence()
    x = sym("x")
    return [_t(A_star_poly(a, n, 1 - x), 0, _sgn(n))], [A_poly(a, n, x)]


# --------------------------------------------------------------------------
# Applications
# --------------------------------------------------------------------------

def _ex1_qprop(p, variant):
    i, k, l = p["i"], p["k"], p["l"]
    t = sym("t")
    lhs = [_t(G(l, j) * G(k + j, i) * q_pochhammer(-t.mul_qpow(i), k + j - i),
              C2(j + 1) - l * j + C2(i), _sgn(l - j))
           for j in range(l + 1) if k + j >= i]
    rhs = [_t(G(k, j) * G(l + j, i) * t ** (l + j - i), k * l + C2(j))
           for j in range(k + 1) if l + j >= i]
    return lhs, rhs


def _ex1_basic(p, variant):
    i, k, l = p["i"], p["k"], p["l"]
    t = sym("t")
    phi32 = phi_series(PhiSpec([qpow(-l), qpow(k + 1), -t.mul_qpow(k)], [qpow(k - i + 1), 0],
                               qpow(1), l))
    phi21 = phi_series(PhiSpec([qpow(-k), qpow(l + 1)], [qpow(l - i + 1)], -t.mul_qpow(k), k))
    lhs = [_t(G(k, i) * q_pochhammer(-t.mul_qpow(i), k - i), C2(i), _sgn(l)) * phi32]
    rhs = [_t(G(l, i) * t ** (l - i), k * l) * phi21]
    return lhs, rhs


def _ex2(p, variant):
    m, k, l = p["m"], p["k"], p["l"]
    X = sym("X")
    fixed = variant == "corrected"
    lexp = (lambda j: C2(j + 1)) if fixed else (lambda j: C2(j))
    rl = (lambda j: l * j) if fixed else (lambda j: l * (j - 1))
    lhs = [_t(G(k, j) * gauss_binomial_symbolic(X, l + j + 1, m), -m * (l + j + 1) + lexp(j),
              _sgn(j)) / qi(l + j + 1) for j in range(k + 1)]
    rhs = [_t(G(l, j - k - 1) * gauss_binomial_symbolic(X, 0, m - j),
              C2(j - k) + C2(j) - rl(j) - m * j, _sgn(k)) / qi(j)
           for j in range(max(k, 1), m + 1) if 0 <= j - k - 1 <= l]
    rhs.append(gauss_binomial_symbolic(X, 0, m) / (qi(k + l + 1) * G(k + l, k)))
    return lhs, rhs


def _ex3_pieces():
    X, Y = sym("X"), sym("Y")
    xy = RatFunc(X, Y)
    by = lambda n: gauss_binomial_symbolic(Y, 0, n)
    bx = lambda n: gauss_binomial_symbolic(X, 0, n)
    bx1 = lambda n: gauss_binomial_symbolic(X, -1, n)
    bxy = lambda n: gauss_binomial_symbolic(xy, 0, n)
    return X, Y, by, bx, bx1, bxy


def _ex3_1(p, variant):
    k, l = p["k"], p["l"]
    X, Y, by, bx, bx1, bxy = _ex3_pieces()
    top = (lambda j: G(l, j)) if variant == "corrected" else (lambda j: 1)
    lhs = [_t(G(k, j) * by(l + j + 1) / bx1(l + j), C2(j + 1), _sgn(j)) for j in range(k + 1)]
    lhs += [_t(top(j) * bxy(k + j + 1) * Y ** (k + j + 1) / bx1(k + j),
               C2(j + 1) - l * (k + j + 1), _sgn(j)) for j in range(l + 1)]
    rhs = [RatFunc(1 - X, 1 - qpow(1)) / (qi(k + l + 1) * G(k + l, k))]
    return lhs, rhs


def _ex3_2(p, variant):
    k, l = p["k"], p["l"]
    X, Y, by, bx, bx1, bxy = _ex3_pieces()
    top = (lambda j: G(l, j)) if variant == "corrected" else (lambda j: 1)
    lhs = [_t(G(k, j) * by(l + j) / bx(l + j), C2(j), _sgn(j)) for j in range(k + 1)]
    rhs = [_t(top(j) * bxy(k + j) * Y ** (k + j) / bx(k + j), C2(j + 1) - l * (k + j), _sgn(j))
           for j in range(l + 1)]
    return lhs, rhs


def _ex4_noncentral(p, variant):
    m, k, l = p["m"], p["k"], p["l"]
    lhs = [_t(G(l, j) * qi(k + j) ** m, C2(j + 1) - l * (k + j), _sgn(l - j)) / q_factorial(l)
           for j in range(l + 1)]
    rhs = [_t(G(l + j, j) * q_factorial(k).exact_div(q_factorial(k - j)) * q_stirling2(m, l + j),
              C2(j)) for j in range(k + 1)]
    return lhs, rhs


def _prop1_1(p, variant):
    k, l = p["k"], p["l"]
    fixed = variant == "corrected"
    Bd = q_bernoulli_dual if fixed else q_bernoulli
    n1, n2 = (l, k) if fixed else (k, l)
    lhs = [_t(G(l, j) * Bd(k + j + 1), C2(j + 1) - l * (k + j + 1), _sgn(j)) / qi(k + j + 1)
           for j in range(n1 + 1)]
    lhs += [_t(G(k, j) * q_bernoulli(l + j + 1), -C2(l + 1) - l * j, _sgn(l + 1)) / qi(l + j + 1)
            for j in range(n2 + 1)]
    rhs = [LaurentPoly.const(1) / (qi(k + l + 1) * G(k + l, k))]
    return lhs, rhs


def _prop1_2(p, variant):
    k, l = p["k"], p["l"]
    Bd = q_bernoulli_dual if variant == "corrected" else q_bernoulli
    lhs = [_t(G(l, j) * Bd(k + j), C2(l - j), _sgn(j)) for j in range(l + 1)]
    rhs = [_t(G(k, j) * q_bernoulli(l + j), l * (k - j), _sgn(l)) for j in range(k + 1)]
    return lhs, rhs


def _prop1_3(p, variant):
    k, l = p["k"], p["l"]
    Bd = q_bernoulli_dual if variant == "corrected" else q_bernoulli
    lhs = [_t(G(l + 1, j) * qi(k + j + 1) * Bd(k + j), C2(l - j) - j, _sgn(j + 1))
           for j in range(l + 2)]
    rhs = [_t(G(k + 1, j) * qi(l + j + 1) * q_bernoulli(l + j), (k - j) * (l + 1) + 1, _sgn(l))
           for j in range(k + 2)]
    return lhs, rhs


def _prop2_1(p, variant):
    k, l = p["k"], p["l"]
    a0, x, fam = _bernoulli_family(k + l + 1, variant)
    return _thm2_1_sides(k, l, a0, x, fam)


def _prop2_2(p, variant):
    k, l = p["k"], p["l"]
    _, x, fam = _bernoulli_family(k + l, variant)
    return _thm2_2_sides(k, l, x, fam)


def _prop2_3(p, variant):
    k, l = p["k"], p["l"]
    _, x, fam = _bernoulli_family(k + l + 1, variant)
    return _thm2_3_sides(k, l, x, fam)


KL = ("k", "l")


def _r(**kw):
    return {n: (0, hi) for n, hi in kw.items()}


CATALOG: dict[str, Identity] = {e.id: e for e in [
    Identity("THM1_1", "sum identity, reciprocal q-integer form", KL, _thm1_1, _r(k=5, l=5)),
    Identity("THM1_2", "sum identity, plain form", KL, _thm1_2, _r(k=5, l=5)),
    Identity("THM1_3", "sum identity, q-integer weighted form", KL, _thm1_3, _r(k=5, l=5)),
    Identity("LAGRANGE", "partial fractions at x=-q^{-k-1}, a_i=q^i", KL, _lagrange, _r(k=8, l=8)),
    Identity("THM2_1", "bracket identity, reciprocal form", KL, _thm2_1, _r(k=3, l=3)),
    Identity("THM2_2", "bracket identity, plain form", KL, _thm2_2, _r(k=3, l=3)),
    Identity("THM2_3", "bracket identity, weighted form", KL, _thm2_3, _r(k=3, l=3)),
    Identity("QAX", "A_n([1,-x]) = (-1)^n A_n^*(x)", ("n",), _qax, _r(n=6)),
    Identity("QINVER", "A_n([1,-z,-x]) expansion", ("n",), _qinver, _r(n=6)),
    Identity("QLEM_Q1", "(-1)^n A_n^*(1-x) = A_n(x) at q=1", ("n",), _qlem_q1, _r(n=8), at_q1=True),
    Identity("EX1_QPROP", "Example 1 binomial identity", ("i", "k", "l"), _ex1_qprop,
             _r(i=4, k=4, l=4)),
    Identity("EX1_BASIC", "Example 1 in 3phi2 / 2phi1 form", ("i", "k", "l"), _ex1_basic,
             _r(i=3, k=3, l=3), domain=lambda p: p["i"] <= min(p["k"], p["l"])),
    Identity("EX2", "Example 2 shifted-binomial identity", ("m", "k", "l"), _ex2,
             _r(m=5, k=3, l=3), variants=BOTH),
    Identity("EX3_1", "Example 3 first identity", KL, _ex3_1, _r(k=3, l=3), variants=BOTH),
    Identity("EX3_2", "Example 3 second identity", KL, _ex3_2, _r(k=3, l=3), variants=BOTH),
    Identity("EX4_NONCENTRAL", "non-central q-Stirling identity", ("m", "k", "l"),
             _ex4_noncentral, _r(m=6, k=3, l=3)),
    Identity("PROP1_1", "q-Kaneko/Momiyama, reciprocal form", KL, _prop1_1, _r(k=5, l=5),
             variants=BOTH),
    Identity("PROP1_2", "q-Kaneko/Momiyama, plain form", KL, _prop1_2, _r(k=5, l=5),
             variants=BOTH),
    Identity("PROP1_3", "q-Kaneko/Momiyama, weighted form", KL, _prop1_3, _r(k=5, l=5),
             variants=BOTH),
    Identity("PROP2_1", "q-Bernoulli polynomials, reciprocal form", KL, _prop2_1, _r(k=3, l=3),
             variants=BOTH),
    Identity("PROP2_2", "q-Bernoulli polynomials, plain form", KL, _prop2_2, _r(k=3, l=3),
             variants=BOTH),
    Identity("PROP2_3", "q-Bernoulli polynomials, weighted form", KL, _prop2_3, _r(k=3, l=3),
             variants=BOTH),
]}

IDENTITY_IDS = tuple(CATALOG)


# --------------------------------------------------------------------------
# Checking
# --------------------------------------------------------------------------

def build_sides(instance: IdentityInstance):
    """The (lhs, rhs) summand lists of an instance, mutation applied and
    q = 1 specialization done where the identity lives at q = 1."""
    entry = CATALOG.get(instance.id)
    if entry is None:
        raise DomainError(f"unknown identity {instance.id!r}")
    p = instance.p
    if set(p) != set(entry.params):
        raise DomainError(f"{instance.id} takes parameters {entry.params}, got {sorted(p)}")
    if not entry.in_domain(p):
        raise DomainError(f"parameters {p} outside the domain of {instance.id}")
    if instance.variant not in entry.variants:
        raise DomainError(f"{instance.id} has no variant {instance.variant!r}")
    lhs, rhs = entry.build(p, instance.variant)
    lhs, rhs = list(lhs), list(rhs)
    if instance.mutation:
        _mutate(lhs, rhs, instance.mutation, entry.at_q1)
    if entry.at_q1:
        lhs = [as_ratfunc(v).substitute({"q": 1}) for v in lhs]
        rhs = [as_ratfunc(v).substitute({"q": 1}) for v in rhs]
    return lhs, rhs


def _mutate(lhs: list, rhs: list, kind: str, at_q1: bool) -> None:
    if kind == "auto":
        kind = "sign" if at_q1 else "qpow"
    if kind not in ("qpow", "sign"):
        raise DomainError(f"unknown mutation {kind!r}")
    for side in (lhs, rhs):
        for idx, v in enumerate(side):
            if as_ratfunc(v):
                side[idx] = _t(v, 1) if kind == "qpow" else _t(v, 0, -1)
                return
    raise DomainError("nothing to mutate: both sides vanish identically")


def check(instance: IdentityInstance) -> IdentityReport:
    """Verify one instance; the verdict is 'holds' iff the sides agree."""
    started = time.perf_counter()
    lhs, rhs = build_sides(instance)
    if instance.mode == "symbolic":
        return settle(instance, lhs, rhs, started)
    if instance.mode == "point":
        return _point_check(instance, lhs, rhs, started)
    raise DomainError(f"unknown mode {instance.mode!r}")


def check_theorem2(instance: IdentityInstance) -> IdentityReport:
    if not instance.id.startswith("THM2_"):
        raise DomainError(f"{instance.id} is not one of THM2_1..THM2_3")
    return check(instance)


def specialized_witness(values_lhs, values_rhs, bindings: dict) -> LaurentPoly:
    """Primitive witness of the two sides after substituting ``bindings``."""
    from qdual.exact import diff_witness
    left = rf_sum([as_ratfunc(v).substitute(bindings) for v in values_lhs])
    right = rf_sum([as_ratfunc(v).substitute(bindings) for v in values_rhs])
    w = diff_witness(left, right)
    return w if w.is_zero() else w.primitive()


def prop2_at_x1_z0(which: int, k: int, l: int, variant: str):
    """(witness of PROP2_which at x=1, z=0, witness of PROP1_which) for the
    same (k, l, variant); the two agree when the first family specializes
    to the second."""
    p = {"k": k, "l": l}
    l2, r2 = build_sides(IdentityInstance.make(f"PROP2_{which}", p, variant=variant))
    l1, r1 = build_sides(IdentityInstance.make(f"PROP1_{which}", p, variant=variant))
    at = {"x": 1, "z": 0}
    return specialized_witness(l2, r2, at), specialized_witness(l1, r1, {})


POINT_SAMPLES = 3
POINT_RETRIES = 50


def _free_names(values) -> list[str]:
    names: set[str] = set()
    for v in values:
        r = as_ratfunc(v)
        names |= r.num.variables() | r.den.variables()
    return sorted(names)


def _point_check(instance, lhs, rhs, started):
    """Evaluate both sides at random rationals with numerator and
    denominator in [2, 97], rejecting points that hit a pole."""
    rng = random.Random(zlib.crc32(repr(instance.sort_key()).encode()))
    names = _free_names(lhs + rhs)
    for _ in range(POINT_SAMPLES):
        for _attempt in range(POINT_RETRIES):
            vals: set = set()
            point = {}
            for n in names:
                while True:
                    v = Fraction(rng.randint(2, 97), rng.randint(2, 97))
                    if v != 1 and v not in vals:
                        break
                vals.add(v)
                point[n] = v
            try:
                left = sum((Fraction(as_ratfunc(v).evaluate(point)) for v in lhs), Fraction(0))
                right = sum((Fraction(as_ratfunc(v).evaluate(point)) for v in rhs), Fraction(0))
            except DomainError:
                continue
            break
        else:
            raise DomainError(f"no pole-free sample point found for {instance.id} "
                              f"after {POINT_RETRIES} attempts")
        if left != right:
            witness = {"point": {n: str(v) for n, v in point.items()},
                       "residual": str(left - right)}
            return IdentityReport(instance, "fails", witness, time.perf_counter() - started)
    return IdentityReport(instance, "holds", None, time.perf_counter() - started)


# --------------------------------------------------------------------------
# Suites
# --------------------------------------------------------------------------

@dataclass
class SuiteEntry:
    id: str
    ranges: dict = field(default_factory=dict)
    mode: str = "symbolic"
    variants: Optional[tuple] = None
    mutation: Optional[str] = None

    def instances(self) -> list[IdentityInstance]:
        entry = CATALOG.get(self.id)
        if entry is None:
            raise DomainError(f"unknown identity {self.id!r}")
        ranges = {n: self.ranges.get(n, entry.ranges[n]) for n in entry.params}
        for n, (lo, hi) in ranges.items():
            if lo < 0 or hi < lo:
                raise DomainError(f"bad range for {self.id}.{n}: {lo}..{hi}")
        variants = self.variants or entry.variants
        for v in variants:
            if v not in entry.variants:
                raise DomainError(f"{self.id} has no variant {v!r}")
        out = []
        names = entry.params
        for combo in itertools.product(*(range(lo, hi + 1) for lo, hi in ranges.values())):
            p = dict(zip(names, combo))
            if not entry.in_domain(p):
                continue
            for v in variants:
                out.append(IdentityInstance.make(self.id, p, mode=self.mode, variant=v,
                                                 mutation=self.mutation))
        return out


@dataclass
class SuiteConfig:
    entries: list

    @classmethod
    def default(cls, mode: str = "symbolic") -> "SuiteConfig":
        return cls([SuiteEntry(i, mode=mode) for i in IDENTITY_IDS])

    @classmethod
    def from_json(cls, data) -> "SuiteConfig":
        if not isinstance(data, dict) or not isinstance(data.get("identities", None), list):
            raise ValueError("suite config must be an object with an 'identities' list")
        entries = []
        for item in data["identities"]:
            if not isinstance(item, dict) or "id" not in item:
                raise ValueError("each identity entry needs an 'id'")
            iid = item["id"]
            if iid not in CATALOG:
                raise ValueError(f"unknown identity {iid!r}")
            ident = CATALOG[iid]
            ranges = {}
            for n in ident.params:
                lo = item.get(f"{n}_min", 0)
                hi = item.get(f"{n}_max", ident.ranges[n][1])
                if not all(isinstance(v, int) and not isinstance(v, bool) for v in (lo, hi)):
                    raise ValueError(f"{iid}: range bounds must be integers")
                ranges[n] = (lo, hi)
            known = {"id", "mode", "variant", "mutation"} | {
                f"{n}_{s}" for n in ident.params for s in ("min", "max")}
            unknown = set(item) - known
            if unknown:
                raise ValueError(f"{iid}: unknown keys {sorted(unknown)}")
            mode = item.get("mode", "symbolic")
            if mode not in ("symbolic", "point"):
                raise ValueError(f"{iid}: mode must be 'symbolic' or 'point'")
            variant = item.get("variant")
            variants = None if variant in (None, "all") else (variant,)
            entries.append(SuiteEntry(iid, ranges, mode, variants, item.get("mutation")))
        return cls(entries)

    @classmethod
    def load(cls, path: str) -> "SuiteConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def instances(self) -> list[IdentityInstance]:
        seen = set()
        out = []
        for e in self.entries:
            for inst in e.instances():
                if inst not in seen:
                    seen.add(inst)
                    out.append(inst)
        return sorted(out, key=IdentityInstance.sort_key)


def _warm_caches(instances) -> None:
    top = 0
    for inst in instances:
        if inst.id.startswith("PROP"):
            p = inst.p
            top = max(top, p["k"] + p["l"] + 2)
    if top:
        q_bernoulli(top)


def default_jobs() -> int:
    env = os.environ.get("QDUAL_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def iter_suite(config: SuiteConfig, jobs: int | None = None) -> Iterator[IdentityReport]:
    """Check every instance of ``config``, yielding reports in sorted order."""
    instances = config.instances()
    if not instances:
        return
    jobs = default_jobs() if jobs is None else jobs
    _warm_caches(instances)
    if jobs <= 1 or len(instances) == 1:
        for inst in instances:
            yield check(inst)
        return
    from concurrent.futures import ProcessPoolExecutor
    # heavy instances first keeps workers busy; results are re-sorted on merge
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(check, instances, chunksize=1)


def run_suite(config: SuiteConfig, jobs: int | None = None) -> list[IdentityReport]:
    return list(iter_suite(config, jobs))


def accepted_variants(reports: Iterable[IdentityReport]) -> dict[str, Optional[str]]:
    """Per identity, the variant holding on every (unmutated) instance.

    ``as-printed`` wins when both hold; None when no variant holds uniformly.
    """
    by_id: dict[str, dict[str, bool]] = {}
    for r in reports:
        v = by_id.setdefault(r.instance.id, {})
        v[r.instance.variant] = v.get(r.instance.variant, True) and r.holds
    out = {}
    for iid, vs in by_id.items():
        ok = [v for v in ("as-printed", "corrected") if vs.get(v)]
        out[iid] = ok[0] if ok else None
    return out


def summarize(reports: list[IdentityReport]) -> dict:
    acc = accepted_variants(reports)
    holds = sum(r.holds for r in reports)
    return {
        "type": "summary",
        "total": len(reports),
        "holds": holds,
        "fails": len(reports) - holds,
        "accepted_variants": dict(sorted(acc.items())),
        "ok": all(v is not None for v in acc.values()),
    }
