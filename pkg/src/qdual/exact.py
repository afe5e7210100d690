"""Exact sparse multivariate Laurent polynomials and rational functions.

Monomials are packed into a single Python integer, one signed 32-bit field
per variable::

    key = sum(e_v << (32 * v))          # balanced digits, e_v may be < 0

so monomial multiplication is integer addition, the monomial ``1`` has key
``0``, and integer order on keys is a monomial order (lexicographic, most
significant variable = highest id).  Because missing variables contribute
zero, keys built over a registry remain valid in any registry extending it;
in particular every value in ``q`` alone is usable everywhere, and for such
a value the key *is* the exponent of ``q``.

Coefficients are ``int`` or :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

from qdual import _kernels as K
from qdual.errors import DomainError, ExponentOverflow, NonExactDivision, RegistryMismatch

WIDTH = 32
HALF = 1 << (WIDTH - 1)
FULL = 1 << WIDTH
MASK = FULL - 1
MAX_EXP = HALF - 1

Scalar = Union[int, Fraction]

STANDARD_NAMES = ("q", "x", "y", "z", "t", "X", "Y")


# --------------------------------------------------------------------------
# Variable registries
# --------------------------------------------------------------------------

class Registry:
    """Immutable ordered list of variable names; variable 0 is always ``q``."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names or names[0] != "q":
            raise ValueError("variable 0 of every registry must be 'q'")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, Registry) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Registry({list(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self!r}") from None

    def var_id(self, var: Union[str, int]) -> int:
        if isinstance(var, int):
            if not 0 <= var < len(self.names):
                raise KeyError(f"variable id {var} out of range")
            return var
        return self.index(var)

    def extend(self, *names: str) -> "Registry":
        new = [n for n in names if n not in self._index]
        return Registry(self.names + tuple(new)) if new else self

    def extends(self, other: "Registry") -> bool:
        n = len(other.names)
        return len(self.names) >= n and self.names[:n] == other.names


BASE = Registry(("q",))


def standard_registry(n_seq: int = 0) -> Registry:
    """``q, x, y, z, t, X, Y`` followed by ``a_0 .. a_{n_seq-1}``."""
    return Registry(STANDARD_NAMES + tuple(f"a_{i}" for i in range(n_seq)))


def registry_for(names: Iterable[str]) -> Registry:
    """Smallest standard registry holding ``names``, extended by any others."""
    names = list(names)
    n_seq = 0
    extra = []
    for n in names:
        if n.startswith("a_") and n[2:].isdigit():
            n_seq = max(n_seq, int(n[2:]) + 1)
        elif n not in STANDARD_NAMES:
            extra.append(n)
    return standard_registry(n_seq).extend(*sorted(set(extra)))


def unify(r1: Registry, r2: Registry) -> Registry:
    if r1 is r2:
        return r1
    if r1.extends(r2):
        return r1
    if r2.extends(r1):
        return r2
    raise RegistryMismatch(f"{r1!r} and {r2!r} are not compatible")


# --------------------------------------------------------------------------
# Packed exponent keys
# --------------------------------------------------------------------------

def encode(exps: Mapping[int, int]) -> int:
    key = 0
    for v, e in exps.items():
        if not -MAX_EXP <= e <= MAX_EXP:
            raise ExponentOverflow(f"exponent {e} out of range")
        key += e << (WIDTH * v)
    return key


def decode(key: int) -> dict[int, int]:
    """Exponent map of a packed key (zero exponents omitted)."""
    out = {}
    v = 0
    while key:
        r = key & MASK
        if r >= HALF:
            r -= FULL
        if r:
            out[v] = r
        key = (key - r) >> WIDTH
        v += 1
    return out


def _max_abs_exp(terms) -> int:
    m = 0
    for k in terms:
        if -HALF < k < HALF:
            a = k if k >= 0 else -k
        else:
            a = max((abs(e) for e in decode(k).values()), default=0)
        if a > m:
            m = a
    return m


def _check_bound(eb: int) -> int:
    if eb > MAX_EXP:
        raise ExponentOverflow("exponent bound exceeds 32-bit field")
    return eb


def _as_scalar(c) -> Scalar:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int) and not isinstance(c, bool):
        return c
    if isinstance(c, str):
        f = Fraction(c)
        return f.numerator if f.denominator == 1 else f
    raise TypeError(f"not an exact scalar: {c!r}")


# --------------------------------------------------------------------------
# Laurent polynomials
# --------------------------------------------------------------------------

class LaurentPoly:
    """Sparse Laurent polynomial with exact rational coefficients.

    Immutable.  ``terms`` maps packed keys to nonzero coefficients; two
    polynomials are equal iff their term maps are equal, which makes the
    representation canonical.
    """

    __slots__ = ("reg", "terms", "_eb")

    def __init__(self, terms: dict | None = None, reg: Registry = BASE, _eb: int | None = None):
        self.reg = reg
        self.terms = {} if terms is None else terms
        self._eb = _max_abs_exp(self.terms) if _eb is None else _check_bound(_eb)

    # -- construction -----------------------------------------------------

    @classmethod
    def const(cls, c, reg: Registry = BASE) -> "LaurentPoly":
        c = _as_scalar(c)
        return cls({0: c} if c else {}, reg, 0)

    @classmethod
    def monomial(cls, coeff=1, exps: Mapping | None = None, reg: Registry = BASE) -> "LaurentPoly":
        coeff = _as_scalar(coeff)
        exps = {reg.var_id(v): e for v, e in (exps or {}).items()}
        if not coeff:
            return cls({}, reg, 0)
        return cls({encode(exps): coeff}, reg,
                   max((abs(e) for e in exps.values()), default=0))

    @classmethod
    def var(cls, name: Union[str, int], reg: Registry = BASE) -> "LaurentPoly":
        return cls.monomial(1, {name: 1}, reg)

    @classmethod
    def qpow(cls, e: int, coeff=1) -> "LaurentPoly":
        """``coeff * q**e`` over the base registry."""
        coeff = _as_scalar(coeff)
        if not coeff:
            return cls({}, BASE, 0)
        if not -MAX_EXP <= e <= MAX_EXP:
            raise ExponentOverflow(f"exponent {e} out of range")
        return cls({e: coeff}, BASE, abs(e))

    @classmethod
    def from_exponent_terms(cls, items: Iterable, reg: Registry = BASE) -> "LaurentPoly":
        """Build from ``(coeff, {var: exp})`` pairs, combining like terms."""
        terms: dict = {}
        for coeff, exps in items:
            coeff = _as_scalar(coeff)
            k = encode({reg.var_id(v): e for v, e in exps.items()})
            v = terms.get(k, 0) + coeff
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return cls(terms, reg)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentPoly.const(other, self.reg)
        return None

    # -- inspection -------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self) -> Scalar:
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.terms[0]

    def in_q_only(self) -> bool:
        return all(-HALF < k < HALF for k in self.terms)

    def items(self):
        """``(coeff, {name: exp})`` pairs in canonical (key) order."""
        names = self.reg.names
        for k in sorted(self.terms):
            yield self.terms[k], {names[v]: e for v, e in sorted(decode(k).items())}

    def variables(self) -> set[str]:
        names = self.reg.names
        seen: set[int] = set()
        for k in self.terms:
            seen.update(decode(k))
        return {names[v] for v in seen}

    def exponent_range(self, var: Union[str, int]) -> tuple[int, int]:
        """(min, max) exponent of ``var`` over all terms; (0, 0) for zero."""
        v = self.reg.var_id(var)
        exps = [decode(k).get(v, 0) for k in self.terms]
        return (min(exps), max(exps)) if exps else (0, 0)

    # -- arithmetic -------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.terms.items()}, self.reg, self._eb)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o if o.reg is self.reg else LaurentPoly(o.terms, unify(self.reg, o.reg), o._eb)
        return LaurentPoly(K.add(self.terms, o.terms), unify(self.reg, o.reg), max(self._eb, o._eb))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LaurentPoly(K.sub(self.terms, o.terms), unify(self.reg, o.reg), max(self._eb, o._eb))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        reg = unify(self.reg, o.reg)
        if not self.terms or not o.terms:
            return LaurentPoly({}, reg, 0)
        return LaurentPoly(K.mul(self.terms, o.terms), reg, _check_bound(self._eb + o._eb))

    __rmul__ = __mul__

    def mul_qpow(self, e: int, coeff=1) -> "LaurentPoly":
        """``self * coeff * q**e`` without building the monomial."""
        return LaurentPoly(K.scale(self.terms, coeff, e), self.reg, _check_bound(self._eb + abs(e)))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (k, c), = self.terms.items()
            return LaurentPoly({k * n: _as_scalar(Fraction(c) ** n)}, self.reg,
                               _check_bound(self._eb * -n))
        if self.is_monomial():
            (k, c), = self.terms.items()
            return LaurentPoly({k * n: c ** n}, self.reg, _check_bound(self._eb * n))
        result = LaurentPoly.const(1, self.reg)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div(self, other) -> "LaurentPoly":
        """Quotient ``c`` with ``c * other == self``.

        Raises ``ZeroDivisionError`` for a zero divisor and
        :class:`NonExactDivision` when ``other`` does not divide ``self``.
        """
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot divide by {other!r}")
        reg = unify(self.reg, o.reg)
        return LaurentPoly(K.divide(self.terms, o.terms), reg, self._eb + o._eb)

    def __truediv__(self, other):
        from_rf = isinstance(other, RatFunc)
        if from_rf:
            return NotImplemented
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if o.is_monomial():
            return self.exact_div(o)
        return RatFunc(self, o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    # -- substitution -----------------------------------------------------

    def substitute(self, bindings: Mapping) -> "RatFunc":
        """Simultaneous substitution ``var -> value``; unbound vars pass through.

        Values may be scalars, LaurentPoly or RatFunc.  Names absent from the
        registry cannot occur and are skipped.  Binding zero to a variable
        that occurs with a negative exponent raises DomainError.
        """
        reg = self.reg
        binds: dict[int, tuple[LaurentPoly, LaurentPoly]] = {}
        for var, val in bindings.items():
            if isinstance(var, str) and var not in reg._index:
                continue
            v = reg.var_id(var)
            rf = as_ratfunc(val, reg)
            reg = unify(reg, rf.num.reg)
            binds[v] = (rf.num, rf.den)
        if not binds or not self.terms:
            return RatFunc(LaurentPoly(self.terms, reg, self._eb), LaurentPoly.const(1, reg))

        decoded = {k: decode(k) for k in self.terms}
        lo = {v: 0 for v in binds}
        hi = {v: 0 for v in binds}
        for exps in decoded.values():
            for v in binds:
                e = exps.get(v, 0)
                if e < lo[v]:
                    lo[v] = e
                elif e > hi[v]:
                    hi[v] = e

        # value^e = n^e / d^e; non-monomial n (resp. d) cannot take negative
        # powers, so clear them with a common denominator n^N d^D.
        clear_n, clear_d = {}, {}
        den = LaurentPoly.const(1, reg)
        for v, (n, d) in binds.items():
            if lo[v] < 0 and n.is_zero():
                raise DomainError(f"zero substituted for {self.reg.names[v]} "
                                  "which occurs with a negative exponent")
            clear_n[v] = 0 if n.is_monomial() else max(0, -lo[v])
            clear_d[v] = 0 if d.is_monomial() else max(0, hi[v])
            if clear_n[v]:
                den = den * n ** clear_n[v]
            if clear_d[v]:
                den = den * d ** clear_d[v]

        cache: dict = {}

        def power(p, e):
            key = (id(p), e)
            r = cache.get(key)
            if r is None:
                r = cache[key] = p ** e
            return r

        out: dict = {}
        eb = 0
        for k, c in self.terms.items():
            exps = decoded[k]
            rest = {v: e for v, e in exps.items() if v not in binds}
            term = LaurentPoly({encode(rest): c}, reg, max(map(abs, rest.values()), default=0))
            for v, (n, d) in binds.items():
                e = exps.get(v, 0)
                ne = e + clear_n[v]
                de = clear_d[v] - e
                if ne:
                    term = term * power(n, ne)
                if de:
                    term = term * power(d, de)
            out = K.add(out, term.terms)
            eb = max(eb, term._eb)
        return RatFunc(LaurentPoly(out, reg, eb), den)

    def evaluate(self, point: Mapping) -> Scalar:
        """Exact value with every occurring variable bound to a scalar.

        Bindings for names outside the registry are ignored."""
        idx = self.reg._index
        vals = {(v if isinstance(v, int) else idx[v]): _as_scalar(x)
                for v, x in point.items() if isinstance(v, int) or v in idx}
        total = 0
        for k, c in self.terms.items():
            t = c
            if k:
                for v, e in decode(k).items():
                    try:
                        x = vals[v]
                    except KeyError:
                        raise KeyError(f"no value for {self.reg.names[v]}") from None
                    if e < 0:
                        if not x:
                            raise DomainError(f"zero substituted for {self.reg.names[v]} "
                                              "which occurs with a negative exponent")
                        t = t / Fraction(x) ** -e
                    else:
                        t = t * x ** e
            total = total + t
        return _as_scalar(total)

    # -- content ------------------------------------------------------------

    def content(self) -> tuple[Scalar, "LaurentPoly"]:
        """(positive scalar content, monomial content) of a nonzero polynomial.

        The monomial content is the monomial of per-variable minimum
        exponents, so ``self / (c * m)`` has integer coprime coefficients
        and no common monomial factor.
        """
        if not self.terms:
            return 1, LaurentPoly.const(1, self.reg)
        from math import gcd, lcm
        nums = 0
        dens = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                nums = gcd(nums, c.numerator)
                dens = lcm(dens, c.denominator)
            else:
                nums = gcd(nums, c)
        content = Fraction(nums, dens)
        if all(-HALF < k < HALF for k in self.terms):
            mono_key = min(self.terms)
        else:
            decoded = [decode(k) for k in self.terms]
            seen = set().union(*decoded)
            lows = {v: min(ex.get(v, 0) for ex in decoded) for v in seen}
            mono_key = encode({v: e for v, e in lows.items() if e})
        return _as_scalar(content), LaurentPoly({mono_key: 1}, self.reg)

    def primitive(self) -> "LaurentPoly":
        """Divide out scalar and monomial content; leading coefficient > 0."""
        if not self.terms:
            return self
        c, m = self.content()
        if self.terms[max(self.terms)] < 0:
            c = -c
        return self.exact_div(m * c) if c != 1 or m.terms != {0: 1} else self

    # -- serialization ------------------------------------------------------

    def to_json(self) -> list:
        return [{"coeff": str(c), "exps": exps} for c, exps in self.items()]

    @classmethod
    def from_json(cls, data, reg: Registry | None = None) -> "LaurentPoly":
        if isinstance(data, (str, int)) and not isinstance(data, bool):
            return cls.const(data, reg or BASE)
        if not isinstance(data, list):
            raise ValueError(f"expected a list of terms, got {type(data).__name__}")
        if reg is None:
            names = set()
            for t in data:
                names.update(t.get("exps", {}))
            reg = registry_for(names) if names - {"q"} else BASE
        return cls.from_exponent_terms(
            ((t["coeff"], {n: int(e) for n, e in t.get("exps", {}).items()}) for t in data), reg)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, exps in self.items():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in exps.items())
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


# --------------------------------------------------------------------------
# Univariate gcd in q (used to keep q-only denominators small)
# --------------------------------------------------------------------------

def _dense_int(p: LaurentPoly) -> list:
    """Integer coefficient list of p / q^{min exponent}, denominators cleared."""
    lo = min(p.terms)
    den = 1
    for c in p.terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    coeffs = [0] * (max(p.terms) - lo + 1)
    for k, c in p.terms.items():
        coeffs[k - lo] = int(c * den)
    return coeffs


def q_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd (lowest exponent 0) of two nonzero polynomials in q alone."""
    g = K.dense_gcd(_dense_int(a), _dense_int(b))
    lead = g[-1]
    return LaurentPoly({i: (c // lead if c % lead == 0 else Fraction(c, lead)) for i, c in enumerate(g) if c}, BASE)


# --------------------------------------------------------------------------
# Rational functions
# --------------------------------------------------------------------------

def _one_like(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({0: 1}, p.reg, 0)


class RatFunc:
    """Quotient ``num / den`` of Laurent polynomials, ``den != 0``.

    Not kept in lowest terms.  Equality is ``num1 * den2 == num2 * den1``.
    Addition keeps denominators small: equal denominators add directly,
    q-only denominators combine through their lcm, and otherwise the
    larger denominator is tried as a multiple of the smaller before
    falling back to the product.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den, num.reg)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        reg = unify(num.reg, den.reg)
        if num.reg is not reg:
            num = LaurentPoly(num.terms, reg, num._eb)
        if den.reg is not reg:
            den = LaurentPoly(den.terms, reg, den._eb)
        self.num = num
        self.den = den

    @property
    def reg(self) -> Registry:
        return self.num.reg

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, LaurentPoly):
            return RatFunc(other, _one_like(other))
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatFunc(LaurentPoly.const(other, self.reg), _one_like(self.num))
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return rf_eq(self, o)

    __hash__ = None

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        d1, d2 = self.den, o.den
        if d1.terms == d2.terms:
            return RatFunc(self.num + o.num, d1)
        if d2.is_constant() or d2.is_monomial():
            return RatFunc(self.num + (o.num * d1).exact_div(d2), d1)
        if d1.is_constant() or d1.is_monomial():
            return RatFunc((self.num * d2).exact_div(d1) + o.num, d2)
        if d1.in_q_only() and d2.in_q_only():
            g = q_gcd(d1, d2)
            c1 = d2.exact_div(g)
            c2 = d1.exact_div(g)
            return RatFunc(self.num * c1 + o.num * c2, d1 * c1)
        big, small = (d1, d2) if len(d1) >= len(d2) else (d2, d1)
        try:
            cof = big.exact_div(small)
        except NonExactDivision:
            cof = None
        if cof is not None:
            if big is d1:
                return RatFunc(self.num + o.num * cof, d1)
            return RatFunc(self.num * cof + o.num, d2)
        return RatFunc(self.num * d2 + o.num * d1, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if n1.is_zero() or n2.is_zero():
            return RatFunc(LaurentPoly({}, unify(n1.reg, n2.reg)), _one_like(d1))
        # cheap cancellations
        if d1.terms == n2.terms:
            return RatFunc(n1, d2)
        if d2.terms == n1.terms:
            return RatFunc(n2, d1)
        return RatFunc(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self * RatFunc(o.den, o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.num.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RatFunc(self.den ** -n, self.num ** -n)
        return RatFunc(self.num ** n, self.den ** n)

    def mul_qpow(self, e: int, coeff=1) -> "RatFunc":
        return RatFunc(self.num.mul_qpow(e, coeff), self.den)

    # -- normal forms ---------------------------------------------------------

    def reduce_by_content(self) -> "RatFunc":
        """Divide out the denominator's monomial content and scale it to
        leading coefficient 1."""
        if self.num.is_zero():
            return RatFunc(self.num, _one_like(self.den))
        _, mono = self.den.content()
        lead = self.den.terms[max(self.den.terms)]
        m = mono * lead
        return RatFunc(self.num.exact_div(m), self.den.exact_div(m))

    def reduced(self) -> "RatFunc":
        """A normal form: exact quotient when den divides num, full gcd
        reduction when both parts are in q alone, content reduction otherwise.
        The denominator is normalized to leading coefficient 1 with the
        monomial content moved into the numerator.
        """
        if self.num.is_zero():
            return RatFunc(self.num, _one_like(self.den))
        if self.den.is_monomial():
            return RatFunc(self.num.exact_div(self.den), _one_like(self.den))
        if self.num.in_q_only() and self.den.in_q_only():
            g = q_gcd(self.num, self.den)
            num, den = self.num.exact_div(g), self.den.exact_div(g)
            if den.is_monomial():
                return RatFunc(num.exact_div(den), _one_like(den))
            return RatFunc(num, den).reduce_by_content()
        try:
            return RatFunc(self.num.exact_div(self.den), _one_like(self.den))
        except NonExactDivision:
            return self.reduce_by_content()

    def as_poly(self) -> LaurentPoly:
        """Exact polynomial value; NonExactDivision if den does not divide num."""
        return self.num.exact_div(self.den)

    # -- substitution ---------------------------------------------------------

    def substitute(self, bindings: Mapping) -> "RatFunc":
        n = self.num.substitute(bindings)
        d = self.den.substitute(bindings)
        if d.num.is_zero():
            raise DomainError("substitution annihilates the denominator")
        return n / d

    def evaluate(self, point: Mapping) -> Scalar:
        d = self.den.evaluate(point)
        if not d:
            raise DomainError("evaluation point annihilates the denominator")
        return _as_scalar(Fraction(self.num.evaluate(point)) / d)

    # -- serialization ----------------------------------------------------------

    def to_json(self):
        r = self.reduced()
        if r.den.terms == {0: 1}:
            return r.num.to_json()
        return {"num": r.num.to_json(), "den": r.den.to_json()}

    @classmethod
    def from_json(cls, data, reg: Registry | None = None) -> "RatFunc":
        if isinstance(data, dict):
            num = LaurentPoly.from_json(data["num"], reg)
            den = LaurentPoly.from_json(data["den"], reg)
            return cls(num, den)
        return cls(LaurentPoly.from_json(data, reg))

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.terms == {0: 1}:
            return str(self.num)
        return f"({self.num}) / ({self.den})"


Value = Union[Scalar, LaurentPoly, RatFunc]


def as_ratfunc(v, reg: Registry = BASE) -> RatFunc:
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, LaurentPoly):
        return RatFunc(v, _one_like(v))
    return RatFunc(LaurentPoly.const(v, reg), LaurentPoly.const(1, reg))


def as_poly(v, reg: Registry = BASE) -> LaurentPoly:
    """Coerce to LaurentPoly, dividing exactly if ``v`` is a RatFunc."""
    if isinstance(v, LaurentPoly):
        return v
    if isinstance(v, RatFunc):
        return v.as_poly()
    return LaurentPoly.const(v, reg)


def rf_eq(a: RatFunc, b: RatFunc) -> bool:
    if a.den.terms == b.den.terms:
        return a.num.terms == b.num.terms
    return (a.num * b.den).terms == (b.num * a.den).terms


def diff_witness(lhs, rhs, normalize: bool = False) -> LaurentPoly:
    """Cross-multiplied difference ``lhs.num*rhs.den - rhs.num*lhs.den``.

    Zero iff ``lhs == rhs``.  With ``normalize`` a nonzero witness is made
    primitive (scalar and monomial content removed, leading coefficient > 0).
    """
    a = as_ratfunc(lhs)
    b = as_ratfunc(rhs)
    if a.den.terms == b.den.terms:
        w = a.num - b.num
    else:
        w = a.num * b.den - b.num * a.den
    return w.primitive() if normalize else w


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def exact_div(a, b) -> LaurentPoly:
    return as_poly(a).exact_div(as_poly(b))


def substitute(p, bindings: Mapping) -> RatFunc:
    return p.substitute(bindings)


def rf_sum(values: Iterable) -> Value:
    """Sum keeping denominators small: numerators sharing a denominator are
    added first, then the groups are combined."""
    polys: list = []
    groups: dict = {}
    for v in values:
        if isinstance(v, RatFunc):
            if v.den.terms == {0: 1}:
                polys.append(v.num)
                continue
            key = frozenset(v.den.terms.items())
            g = groups.get(key)
            if g is None:
                groups[key] = [v.den, [v.num]]
            else:
                g[1].append(v.num)
        else:
            polys.append(v)
    total = _poly_sum(polys)
    if not groups:
        return total
    acc = None
    for den, nums in groups.values():
        part = RatFunc(_poly_sum(nums), den)
        acc = part if acc is None else acc + part
    return acc + total if total else acc


def _poly_sum(polys: list):
    if not polys:
        return LaurentPoly.const(0)
    maps: list = []
    reg = None
    eb = 0
    for p in polys:
        if not isinstance(p, LaurentPoly):
            p = LaurentPoly.const(p)
        reg = p.reg if reg is None else unify(reg, p.reg)
        maps.append(p.terms)
        eb = max(eb, p._eb)
    return LaurentPoly(K.sum_terms(maps), reg, eb)


def value_from_json(data, reg: Registry | None = None) -> Value:
    """Parse a serialized scalar, polynomial, or rational function."""
    if isinstance(data, dict):
        return RatFunc.from_json(data, reg).reduced()
    if isinstance(data, (int, str)) and not isinstance(data, bool):
        return LaurentPoly.const(data, reg or BASE)
    return LaurentPoly.from_json(data, reg)


def value_to_json(v):
    if isinstance(v, RatFunc):
        return v.to_json()
    if isinstance(v, LaurentPoly):
        return v.to_json()
    return LaurentPoly.const(v).to_json()
