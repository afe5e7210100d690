from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bernoulli_classical, binomial_transform, stirling2_classical
from qdual.exact import LaurentPoly, RatFunc, as_ratfunc, rf_eq
from qdual.qfunctions import binom2, gauss_binomial, q_factorial, q_int
from qdual.sequences import (
    A_at_bracket,
    A_poly,
    A_star_poly,
    SequenceSpec,
    bernoulli_dual_pair_sequence,
    bracket3,
    bracket3_multinomial,
    builtin_sequence,
    delta_q,
    dual,
    dual_inverse,
    dual_sequence,
    explicit_sequence,
    inverse_dual_sequence,
    q_bernoulli,
    q_bernoulli_dual,
    q_bernoulli_poly,
    q_bernoulli_sequence,
    q_stirling2,
    sym,
    symbolic_sequence,
)

Q = LaurentPoly.var("q")
N = 12


def at_q1(v):
    r = as_ratfunc(v).reduced().substitute({"q": 1}).reduced()
    return r


def scalar_at_q1(v) -> Fraction:
    r = at_q1(v)
    return Fraction(r.num.constant_value()) / Fraction(r.den.constant_value())


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)


@given(st.lists(rationals, min_size=N + 1, max_size=N + 1))
@settings(max_examples=25, deadline=None)
def test_round_trip_random(vals):
    s = explicit_sequence(vals)
    back = inverse_dual_sequence(dual_sequence(s))
    assert [back[n] for n in range(N + 1)] == [s[n] for n in range(N + 1)]
    fwd = dual_sequence(inverse_dual_sequence(s))
    assert [fwd[n] for n in range(N + 1)] == [s[n] for n in range(N + 1)]


def test_round_trip_symbolic():
    s = symbolic_sequence()
    back = inverse_dual_sequence(s.star)
    for n in range(N + 1):
        assert back[n] == s[n]
        assert dual(inverse_dual_sequence(s), n) == s[n]


@pytest.mark.parametrize("i", range(0, 5))
def test_example1_closed_dual(i):
    s = builtin_sequence(SequenceSpec("binom-t", {"i": i}))
    for n in range(9):
        assert rf_eq(as_ratfunc(dual(s, n)), as_ratfunc(s.closed_dual(n)))


@pytest.mark.parametrize("m", range(0, 6))
def test_example2_closed_dual_with_zero_branch(m):
    s = builtin_sequence(SequenceSpec("shifted-binom", {"m": m}))
    for n in range(7):
        d = as_ratfunc(dual(s, n))
        assert rf_eq(d, as_ratfunc(s.closed_dual(n)))
        if n > m:
            assert d.is_zero()


def test_example2_m3_n4_is_zero():
    s = builtin_sequence(SequenceSpec("shifted-binom", {"m": 3}))
    assert as_ratfunc(dual(s, 4)).is_zero()


def test_example3_closed_dual():
    s = builtin_sequence(SequenceSpec("binom-ratio", {}))
    assert rf_eq(as_ratfunc(s[0]), RatFunc(1)) and rf_eq(as_ratfunc(dual(s, 0)), RatFunc(1))
    for n in range(7):
        assert rf_eq(as_ratfunc(dual(s, n)), as_ratfunc(s.closed_dual(n)))


@pytest.mark.parametrize("m", range(0, 6))
def test_example4_dual_pair(m):
    s = builtin_sequence(SequenceSpec("stirling-dual", {"m": m}))
    for n in range(9):
        assert dual(s, n) == q_int(n) ** m


def test_bernoulli_values():
    assert rf_eq(q_bernoulli(1), RatFunc(-1, 1 + Q))
    assert rf_eq(q_bernoulli(2), RatFunc(Q ** 2, (1 + Q) * (1 + Q + Q ** 2)))
    assert [scalar_at_q1(q_bernoulli(n)) for n in range(5)] == [1, Fraction(-1, 2),
                                                                Fraction(1, 6), 0,
                                                                Fraction(-1, 30)]
    for n in range(13):
        assert scalar_at_q1(q_bernoulli(n)) == bernoulli_classical(n)


def test_bernoulli_recurrence():
    for n in range(1, 13):
        total = sum((gauss_binomial(n + 1, i) * q_bernoulli(i) for i in range(n + 1)),
                    RatFunc(0))
        assert total.is_zero() or rf_eq(total, RatFunc(0))


def test_bernoulli_dual_pair_true_relation():
    pair = bernoulli_dual_pair_sequence()
    for n in range(9):
        assert rf_eq(as_ratfunc(dual(pair, n)), as_ratfunc(q_bernoulli_dual(n)))
        lhs = sum((gauss_binomial(n, i) * q_bernoulli(i) for i in range(n + 1)), RatFunc(0))
        assert rf_eq(lhs, as_ratfunc(q_bernoulli_dual(n)))


def test_bernoulli_printed_dual_claim_fails_only_at_one():
    pair = bernoulli_dual_pair_sequence()
    for n in range(9):
        same = rf_eq(as_ratfunc(dual(pair, n)), as_ratfunc(q_bernoulli(n)))
        assert same == (n != 1)


def test_bernoulli_inverse_dual():
    s = q_bernoulli_sequence()
    for n in range(9):
        got = as_ratfunc(dual_inverse(s, n))
        assert rf_eq(got, as_ratfunc(s.closed_inverse(n)))
        printed = as_ratfunc(q_bernoulli(n).mul_qpow(-binom2(n), (-1) ** n))
        assert rf_eq(got, printed) == (n == 0)


def test_bernoulli_polynomials():
    x = sym("x")
    assert rf_eq(as_ratfunc(q_bernoulli_poly(0, x)), RatFunc(1))
    X = sympy.Symbol("x")
    for n in range(7):
        assert rf_eq(as_ratfunc(q_bernoulli_poly(n, 0)), q_bernoulli(n))
        got = at_q1(q_bernoulli_poly(n, x))
        want = sympy.Poly(sympy.bernoulli(n, X), X)
        coeffs = {}
        for c, exps in got.num.items():
            coeffs[exps.get("x", 0)] = Fraction(c) / Fraction(got.den.constant_value())
        assert coeffs == {m[0]: Fraction(int(c.p), int(c.q)) for m, c in want.terms() if c}
    pair = bernoulli_dual_pair_sequence()
    for n in range(6):
        assert rf_eq(as_ratfunc(A_poly(pair, n, x)), as_ratfunc(q_bernoulli_poly(n, x)))


def test_bernoulli_poly_n2_at_q1():
    got = at_q1(q_bernoulli_poly(2, sym("x")))
    x = sym("x")
    assert rf_eq(got, RatFunc(x * x - x + Fraction(1, 6)))


def test_stirling_values():
    assert all(q_stirling2(m, 1) == LaurentPoly.const(1) for m in range(1, 9))
    assert q_stirling2(2, 2) == LaurentPoly.const(1)
    assert q_stirling2(4, 2) == 3 + 3 * Q + Q ** 2
    for m in range(9):
        for n in range(9):
            s = q_stirling2(m, n)
            assert s.evaluate({"q": 1}) == stirling2_classical(m, n)
            if m >= n and not s.is_zero():
                assert min(s.terms) >= 0


def test_carlitz_relation():
    for m in range(9):
        for n in range(9):
            rhs = sum((q_stirling2(m, i) * q_factorial(i) * gauss_binomial(n, i)).mul_qpow(
                binom2(i)) for i in range(n + 1))
            assert q_int(n) ** m == rhs + 0 * Q


def test_delta_q_intertwines():
    s = symbolic_sequence()
    d = delta_q(s)
    for n in range(1, 9):
        assert dual(d, n) == q_int(n) * s.star[n - 1]
    assert dual(d, 0).is_zero()


def test_q1_dual_is_classical_binomial_transform():
    rng = random.Random(11)
    for _ in range(20):
        vals = [Fraction(rng.randint(-30, 30), rng.randint(1, 12)) for _ in range(11)]
        s = explicit_sequence(vals)
        classical = binomial_transform(vals)
        assert [scalar_at_q1(dual(s, n)) for n in range(11)] == classical


def test_classical_bernoulli_self_dual():
    a = [(-1) ** n * bernoulli_classical(n) for n in range(11)]
    assert binomial_transform(a) == a
    ours = [(-1) ** n * scalar_at_q1(q_bernoulli(n)) for n in range(11)]
    s = explicit_sequence(ours)
    assert [scalar_at_q1(dual(s, n)) for n in range(11)] == ours


def test_brackets():
    x, y, z = sym("x"), sym("y"), sym("z")
    for n in range(6):
        assert rf_eq(as_ratfunc(bracket3(x, y, z, n)), as_ratfunc(bracket3_multinomial(x, y, z, n)))


def test_a_polynomials():
    s = symbolic_sequence()
    x = sym("x")
    assert A_at_bracket(s, 0, (1, -x)) == s[0]
    for n in range(6):
        assert rf_eq(as_ratfunc(A_at_bracket(s, n, (1, -x))),
                     as_ratfunc(A_star_poly(s, n, x).mul_qpow(0, (-1) ** n)))
    with pytest.raises(ValueError):
        A_at_bracket(s, 2, (1,))


def test_sequence_spec_errors():
    with pytest.raises(ValueError):
        SequenceSpec.from_json({"kind": "nope"})
    with pytest.raises(ValueError):
        SequenceSpec.from_json([1, 2])
    with pytest.raises(ValueError):
        builtin_sequence(SequenceSpec("binom-t", {"i": -1}))
    assert SequenceSpec.from_json({"kind": "symbolic"}).to_json() == {"kind": "symbolic",
                                                                    "params": {}}
