"""q-dual sequences, bracket powers, the A_n / A_n^* families, q-Stirling
and q-Bernoulli numbers, and the builtin example sequences.

Sequence values are LaurentPoly or RatFunc.  The symbols x, y, z, t and the
exponential symbols X = q^x, Y = q^y live in the standard registry; the free
sequence entries of a symbolic sequence are the variables ``a_0, a_1, ...``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence as Seq

from qdual.errors import DomainError
from qdual.exact import (
    LaurentPoly,
    RatFunc,
    Value,
    as_ratfunc,
    rf_sum,
    standard_registry,
    value_from_json,
    value_to_json,
)
from qdual.qfunctions import (
    ONE,
    ZERO,
    binom2,
    gauss_binomial,
    gauss_binomial_symbolic,
    q_factorial,
    q_int,
    q_pochhammer,
    qpow,
)

STD = standard_registry()


def sym(name: str) -> LaurentPoly:
    """One of the standard symbols q, x, y, z, t, X, Y, or ``a_<i>``."""
    if name.startswith("a_"):
        return LaurentPoly.var(name, standard_registry(int(name[2:]) + 1))
    return LaurentPoly.var(name, STD)


def _value(v) -> Value:
    if isinstance(v, (LaurentPoly, RatFunc)):
        return v
    return LaurentPoly.const(v)


def _signed_qpow(v, e: int, sign: int):
    """v * sign * q^e for LaurentPoly/RatFunc v."""
    return v.mul_qpow(e, sign)


# --------------------------------------------------------------------------
# Sequences
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceSpec:
    """``{"kind": ..., "params": {...}}`` description of a sequence."""

    kind: str
    params: dict = field(default_factory=dict, hash=False)

    KINDS = ("symbolic", "constant", "explicit-list", "binom-t", "shifted-binom",
             "binom-ratio", "stirling-dual", "q-bernoulli", "q-bernoulli-poly")

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params}

    @classmethod
    def from_json(cls, data) -> "SequenceSpec":
        if not isinstance(data, dict) or "kind" not in data:
            raise ValueError("sequence spec must be an object with a 'kind'")
        kind = data["kind"]
        if kind not in cls.KINDS:
            raise ValueError(f"unknown sequence kind {kind!r}")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise ValueError("'params' must be an object")
        return cls(kind, params)


class Sequence:
    """Indexed family n -> value, memoized.

    ``closed_dual`` / ``closed_inverse`` are optional independent closed
    forms of the dual (resp. inverse dual) sequence, used for cross-checks.
    """

    def __init__(self, generator: Callable[[int], Value], spec: SequenceSpec | None = None,
                 closed_dual: Optional[Callable[[int], Value]] = None,
                 closed_inverse: Optional[Callable[[int], Value]] = None,
                 length: Optional[int] = None):
        self._gen = generator
        self.spec = spec
        self.closed_dual = closed_dual
        self.closed_inverse = closed_inverse
        self.length = length
        self._memo: dict[int, Value] = {}
        self._lock = threading.Lock()
        self._star: Optional[Sequence] = None

    def __getitem__(self, n: int) -> Value:
        if n < 0:
            raise IndexError("sequence index must be >= 0")
        if self.length is not None and n >= self.length:
            raise DomainError(f"sequence has only {self.length} entries")
        v = self._memo.get(n)
        if v is None:
            v = _value(self._gen(n))
            with self._lock:
                self._memo.setdefault(n, v)
        return v

    def take(self, n: int) -> list:
        return [self[i] for i in range(n)]

    @property
    def star(self) -> "Sequence":
        """The q-dual sequence, memoized."""
        if self._star is None:
            self._star = dual_sequence(self)
        return self._star


def symbolic_sequence(name: str = "a") -> Sequence:
    if name != "a":
        raise ValueError("symbolic sequences use the variables a_0, a_1, ...")
    return Sequence(lambda n: sym(f"a_{n}"), SequenceSpec("symbolic"))


def explicit_sequence(values: Seq) -> Sequence:
    vals = [_value(v) for v in values]
    return Sequence(lambda n: vals[n],
                    SequenceSpec("explicit-list", {"values": [value_to_json(v) for v in vals]}),
                    length=len(vals))


# --------------------------------------------------------------------------
# Dual transform
# --------------------------------------------------------------------------

def dual(s: Sequence, n: int) -> Value:
    """a_n^* = sum_i {n brack i} (-1)^i a_i q^{C(i,2)}."""
    return rf_sum(_signed_qpow(gauss_binomial(n, i) * s[i], binom2(i), (-1) ** i)
                  for i in range(n + 1))


def dual_inverse(s_star: Sequence, n: int) -> Value:
    """a_n = sum_r {n brack r} (-1)^r a_r^* q^{C(r+1,2) - nr}."""
    return rf_sum(_signed_qpow(gauss_binomial(n, r) * s_star[r], binom2(r + 1) - n * r, (-1) ** r)
                  for r in range(n + 1))


def dual_sequence(s: Sequence) -> Sequence:
    return Sequence(lambda n: dual(s, n), None, length=s.length)


def inverse_dual_sequence(s_star: Sequence) -> Sequence:
    return Sequence(lambda n: dual_inverse(s_star, n), None, length=s_star.length)


def delta_q(s: Sequence) -> Sequence:
    """delta_q(a_n) = -q^{1-n} [n]_q a_{n-1}; delta_q(a_0) = 0."""
    def gen(n):
        if n == 0:
            return ZERO
        return _signed_qpow(q_int(n) * s[n - 1], 1 - n, -1)
    return Sequence(gen, None, length=None if s.length is None else s.length + 1)


# --------------------------------------------------------------------------
# Bracket powers and the A-polynomials
# --------------------------------------------------------------------------

def _powers(x, n: int) -> list:
    out = [ONE]
    x = _value(x)
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def bracket2_powers(x, y, n: int) -> list:
    """[x, y]^p for p = 0..n."""
    xp = _powers(x, n)
    yp = _powers(y, n)
    return [rf_sum(gauss_binomial(p, i) * xp[i] * yp[p - i] for i in range(p + 1))
            for p in range(n + 1)]


def bracket_powers(args: Seq, n: int) -> list:
    """[args]^p for p = 0..n; [x, y, z]^p = [x, [y, z]]^p."""
    if len(args) == 2:
        return bracket2_powers(args[0], args[1], n)
    if len(args) == 3:
        inner = bracket2_powers(args[1], args[2], n)
        xp = _powers(args[0], n)
        return [rf_sum(gauss_binomial(p, i) * xp[i] * inner[p - i] for i in range(p + 1))
                for p in range(n + 1)]
    raise ValueError(f"bracket powers take 2 or 3 arguments, got {len(args)}")


def bracket2(x, y, n: int) -> Value:
    """[x, y]^n = sum_i {n brack i} x^i y^{n-i}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return bracket2_powers(x, y, n)[n]


def bracket3(x, y, z, n: int) -> Value:
    """[x, y, z]^n = [x, [y, z]]^n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return bracket_powers((x, y, z), n)[n]


def bracket3_multinomial(x, y, z, n: int) -> Value:
    """Trinomial form sum [n]!/([i]![j]![k]!) x^i y^j z^k over i+j+k = n."""
    xp, yp, zp = _powers(x, n), _powers(y, n), _powers(z, n)
    fn = q_factorial(n)
    terms = []
    for i in range(n + 1):
        for j in range(n - i + 1):
            k = n - i - j
            c = fn.exact_div(q_factorial(i) * q_factorial(j) * q_factorial(k))
            terms.append(c * xp[i] * yp[j] * zp[k])
    return rf_sum(terms)


def A_poly(s: Sequence, n: int, x) -> Value:
    """A_n(x) = sum_i (-1)^i {n brack i} a_i q^{C(i,2)} x^{n-i}."""
    xp = _powers(x, n)
    return rf_sum(_signed_qpow(gauss_binomial(n, i) * s[i] * xp[n - i], binom2(i), (-1) ** i)
                  for i in range(n + 1))


def A_star_poly(s: Sequence, n: int, x) -> Value:
    """A_n^*(x) = sum_i (-1)^i {n brack i} a_i^* x^{n-i}."""
    xp = _powers(x, n)
    star = s.star
    return rf_sum(_signed_qpow(gauss_binomial(n, i) * star[i] * xp[n - i], 0, (-1) ** i)
                  for i in range(n + 1))


def A_at_bracket(s: Sequence, n: int, args: Seq, powers: list | None = None) -> Value:
    """A_n evaluated at a bracket argument: sum_i (-1)^i {n brack i} a_i
    q^{C(i,2)} [args]^{n-i}.  ``powers`` may carry precomputed
    bracket powers of at least degree n."""
    if len(args) not in (2, 3):
        raise ValueError(f"A_at_bracket takes 2 or 3 bracket arguments, got {len(args)}")
    bp = powers if powers is not None else bracket_powers(args, n)
    return rf_sum(_signed_qpow(gauss_binomial(n, i) * s[i] * bp[n - i], binom2(i), (-1) ** i)
                  for i in range(n + 1))


# --------------------------------------------------------------------------
# q-Stirling and q-Bernoulli numbers
# --------------------------------------------------------------------------

class _Memo:
    """Grow-only cache with a single-writer lock; reads need no lock."""

    def __init__(self, compute):
        self._compute = compute
        self._data: dict = {}
        self._lock = threading.Lock()

    def __call__(self, *key):
        v = self._data.get(key)
        if v is None:
            with self._lock:
                v = self._data.get(key)
                if v is None:
                    v = self._data[key] = self._compute(*key)
        return v


def _q_stirling2(m: int, n: int) -> LaurentPoly:
    if m < 0 or n < 0:
        raise ValueError("q_stirling2 needs m, n >= 0")
    total = rf_sum(gauss_binomial(n, i).mul_qpow(binom2(i), (-1) ** i) * q_int(n - i) ** m
                   for i in range(n + 1))
    return total.exact_div(q_factorial(n)).mul_qpow(-binom2(n))


q_stirling2 = _Memo(_q_stirling2)
q_stirling2.__doc__ = """Carlitz q-Stirling number of the second kind {m brace n}_q.

q^{-C(n,2)}/[n]_q! * sum_i (-1)^i q^{C(i,2)} {n brack i} [n-i]_q^m, with the
division by [n]_q! certified exact."""


class BernoulliCache:
    """B_0, B_1, ... from sum_{i=0}^{n} {n+1 brack i} B_i = 0 (n >= 1).

    Values are rational functions of q in lowest terms.  Grow-only; the
    lock serializes extension, reads of computed entries are lock-free.
    """

    def __init__(self):
        self._values: list[RatFunc] = [as_ratfunc(ONE)]
        self._lock = threading.Lock()

    def warm(self, n: int) -> None:
        with self._lock:
            vals = self._values
            while len(vals) <= n:
                m = len(vals)
                acc = rf_sum(gauss_binomial(m + 1, i) * vals[i] for i in range(m))
                vals.append((-as_ratfunc(acc) / q_int(m + 1)).reduced())

    def __getitem__(self, n: int) -> RatFunc:
        if n < 0:
            raise IndexError("Bernoulli index must be >= 0")
        if n >= len(self._values):
            self.warm(n)
        return self._values[n]


BERNOULLI = BernoulliCache()


def q_bernoulli(n: int) -> RatFunc:
    """Al-Salam q-Bernoulli number B_n."""
    return BERNOULLI[n]


def q_bernoulli_poly(n: int, x) -> Value:
    """B_n(x) = sum_k {n brack k} B_k x^{n-k}."""
    xp = _powers(x, n)
    return rf_sum(gauss_binomial(n, k) * q_bernoulli(k) * xp[n - k] for k in range(n + 1))


def q_bernoulli_star_poly(n: int, x) -> Value:
    """B_n^*(x) = sum_k (-1)^k {n brack k} B_k x^{n-k}."""
    xp = _powers(x, n)
    return rf_sum((gauss_binomial(n, k) * q_bernoulli(k) * xp[n - k]).mul_qpow(0, (-1) ** k)
                  for k in range(n + 1))


def q_bernoulli_poly_at_bracket(n: int, args: Seq, powers: list | None = None) -> Value:
    """B_n at a bracket argument: sum_k {n brack k} B_k [args]^{n-k}."""
    bp = powers if powers is not None else bracket_powers(args, n)
    return rf_sum(gauss_binomial(n, k) * q_bernoulli(k) * bp[n - k] for k in range(n + 1))


# --------------------------------------------------------------------------
# Builtin sequences
# --------------------------------------------------------------------------

def _int_param(params: dict, name: str, lo: int = 0) -> int:
    if name not in params:
        raise ValueError(f"missing parameter {name!r}")
    v = params[name]
    if not isinstance(v, int) or isinstance(v, bool) or v < lo:
        raise ValueError(f"parameter {name!r} must be an integer >= {lo}")
    return v


def binom_t_sequence(i: int) -> Sequence:
    """a_n = (-1)^n {n brack i} t^{n-i} q^{C(i,2)}, with its closed-form dual
    {n brack i} (-t q^i; q)_{n-i} q^{i^2-i}."""
    t = sym("t")

    def gen(n):
        if n < i:
            return ZERO
        return (gauss_binomial(n, i) * t ** (n - i)).mul_qpow(binom2(i), (-1) ** n)

    def closed(n):
        if n < i:
            return ZERO
        return (gauss_binomial(n, i) * q_pochhammer(-t.mul_qpow(i), n - i)).mul_qpow(i * i - i)

    return Sequence(gen, SequenceSpec("binom-t", {"i": i}), closed_dual=closed)


def shifted_binom_sequence(m: int) -> Sequence:
    """a_n = {x+n brack m} q^{-mn}; dual (-1)^n {x brack m-n} q^{-mn+C(n,2)}
    for n <= m and 0 otherwise."""
    X = sym("X")

    def gen(n):
        return gauss_binomial_symbolic(X, n, m).mul_qpow(-m * n)

    def closed(n):
        if n > m:
            return ZERO
        return gauss_binomial_symbolic(X, 0, m - n).mul_qpow(-m * n + binom2(n), (-1) ** n)

    return Sequence(gen, SequenceSpec("shifted-binom", {"m": m}), closed_dual=closed)


def binom_ratio_sequence() -> Sequence:
    """c_n = {y brack n}/{x brack n}; dual {x-y brack n} q^{ny}/{x brack n}."""
    X, Y = sym("X"), sym("Y")

    def gen(n):
        return gauss_binomial_symbolic(Y, 0, n) / gauss_binomial_symbolic(X, 0, n)

    def closed(n):
        xy = RatFunc(X, Y)
        return gauss_binomial_symbolic(xy, 0, n) * Y ** n / gauss_binomial_symbolic(X, 0, n)

    return Sequence(gen, SequenceSpec("binom-ratio", {}), closed_dual=closed)


def stirling_dual_sequence(m: int) -> Sequence:
    """a_n = (-1)^n [n]_q! {m brace n}_q with dual a_n^* = [n]_q^m."""
    return Sequence(lambda n: (q_factorial(n) * q_stirling2(m, n)).mul_qpow(0, (-1) ** n),
                    SequenceSpec("stirling-dual", {"m": m}),
                    closed_dual=lambda n: q_int(n) ** m)


def q_bernoulli_dual(n: int) -> RatFunc:
    """[1, B]^n = sum_i {n brack i} B_i: B_n for n != 1 and 1 + B_1 for n = 1."""
    return q_bernoulli(n) + 1 if n == 1 else q_bernoulli(n)


def q_bernoulli_sequence() -> Sequence:
    """(B_n).  Its inverse dual is (-1)^n B_n q^{-C(n,2)} + [n]_q q^{1-n};
    the extra term is the inverse image of the n = 1 defect of [1, B]^n."""
    return Sequence(q_bernoulli, SequenceSpec("q-bernoulli", {}),
                    closed_inverse=lambda n: q_bernoulli(n).mul_qpow(-binom2(n), (-1) ** n)
                    + q_int(n).mul_qpow(1 - n))


def bernoulli_dual_pair_sequence() -> Sequence:
    """a_n = (-1)^n B_n q^{-C(n,2)}, whose dual is [1, B]^n."""
    return Sequence(lambda n: q_bernoulli(n).mul_qpow(-binom2(n), (-1) ** n),
                    SequenceSpec("q-bernoulli", {"form": "dual-pair"}),
                    closed_dual=q_bernoulli_dual)


def builtin_sequence(spec: SequenceSpec) -> Sequence:
    kind, params = spec.kind, spec.params
    if kind == "symbolic":
        return symbolic_sequence()
    if kind == "constant":
        v = value_from_json(params.get("value", "1"))
        return Sequence(lambda n: v, spec)
    if kind == "explicit-list":
        vals = params.get("values")
        if not isinstance(vals, list):
            raise ValueError("explicit-list needs a 'values' list")
        s = explicit_sequence([value_from_json(v) for v in vals])
        return s
    if kind == "binom-t":
        return binom_t_sequence(_int_param(params, "i"))
    if kind == "shifted-binom":
        return shifted_binom_sequence(_int_param(params, "m"))
    if kind == "binom-ratio":
        return binom_ratio_sequence()
    if kind == "stirling-dual":
        return stirling_dual_sequence(_int_param(params, "m"))
    if kind == "q-bernoulli":
        form = params.get("form", "numbers")
        if form == "numbers":
            return q_bernoulli_sequence()
        if form == "dual-pair":
            return bernoulli_dual_pair_sequence()
        raise ValueError("q-bernoulli 'form' must be 'numbers' or 'dual-pair'")
    if kind == "q-bernoulli-poly":
        x = value_from_json(params["x"]) if "x" in params else sym("x")
        return Sequence(lambda n: q_bernoulli_poly(n, x), spec)
    raise ValueError(f"unknown sequence kind {kind!r}")
