"""Text renderings of exact values for tables: JSON-ready, CSV cells, LaTeX."""

from __future__ import annotations

from fractions import Fraction

from qdual.exact import LaurentPoly, RatFunc, as_ratfunc, value_to_json


def _reduced(v) -> RatFunc:
    return as_ratfunc(v).reduced()


def constant_of(v):
    """The scalar value of ``v`` if it is constant, else None."""
    r = _reduced(v)
    if r.num.is_constant() and r.den.is_constant():
        return Fraction(r.num.constant_value()) / Fraction(r.den.constant_value())
    return None


def _scalar_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else str(c)


def json_value(v):
    """A constant becomes its rational string; anything else the exact-core
    term list (or num/den object)."""
    c = constant_of(v)
    if c is not None:
        return _scalar_str(c)
    return value_to_json(_reduced(v))


def text_value(v) -> str:
    c = constant_of(v)
    if c is not None:
        return _scalar_str(c)
    return str(_reduced(v))


def _latex_scalar(c: Fraction, bare_one: bool) -> str:
    """LaTeX of |c|; empty for 1 when it multiplies a monomial."""
    c = abs(c)
    if c == 1 and bare_one:
        return ""
    if c.denominator == 1:
        return str(c.numerator)
    return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"


def _latex_name(n: str) -> str:
    if "_" in n:
        base, sub = n.split("_", 1)
        return f"{base}_{{{sub}}}"
    return n


def latex_poly(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for c, exps in p.items():
        c = Fraction(c)
        mono = " ".join(_latex_name(n) if e == 1 else f"{_latex_name(n)}^{{{e}}}"
                        for n, e in exps.items())
        body = _latex_scalar(c, bool(mono)) + mono
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def latex_value(v) -> str:
    c = constant_of(v)
    if c is not None:
        s = _latex_scalar(c, False)
        return "-" + s if c < 0 else s
    r = _reduced(v)
    if r.den.is_constant() and r.den.constant_value() == 1:
        return latex_poly(r.num)
    num, sign = r.num, ""
    if all(c < 0 for c in num.terms.values()):
        num, sign = -num, "-"
    return rf"{sign}\frac{{{latex_poly(num)}}}{{{latex_poly(r.den)}}}"
