from __future__ import annotations

import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import qdual._pykernels as P
from qdual.errors import NonExactDivision

try:
    import qdual._ckernels as C
except ImportError:  # extension not built
    C = None

needs_c = pytest.mark.skipif(C is None, reason="compiled kernels not built")

keys = st.integers(-(1 << 40), 1 << 40)
vals = st.one_of(st.integers(-50, 50).filter(bool), st.fractions(max_denominator=7).filter(bool))
term_dicts = st.dictionaries(keys, vals, max_size=12)
small_dicts = st.dictionaries(st.integers(-8, 8), st.integers(-9, 9).filter(bool), min_size=1,
                              max_size=6)


@needs_c
@given(term_dicts, term_dicts)
def test_backends_agree_on_ring_ops(a, b):
    assert C.add(a, b) == P.add(a, b)
    assert C.sub(a, b) == P.sub(a, b)
    assert C.mul(a, b) == P.mul(a, b)
    assert C.scale(a, Fraction(3, 2), 5) == P.scale(a, Fraction(3, 2), 5)


@given(st.lists(term_dicts, max_size=5))
def test_sum_terms_is_repeated_add(maps):
    want: dict = {}
    for m in maps:
        want = P.add(want, m)
    assert P.sum_terms(maps) == want
    if C is not None:
        assert C.sum_terms(maps) == want


@given(term_dicts, term_dicts)
def test_mul_matches_schoolbook(a, b):
    want: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            want = P.add(want, {ka + kb: ca * cb})
    got = P.mul(a, b)
    assert got == want


@needs_c
@given(small_dicts, small_dicts)
def test_backends_agree_on_division(a, b):
    prod = P.mul(a, b)
    assert C.divide(prod, b) == P.divide(prod, b) == a


@needs_c
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6).filter(lambda l: l[-1] and l[0]),
       st.lists(st.integers(-5, 5), min_size=1, max_size=6).filter(lambda l: l[-1] and l[0]))
def test_backends_agree_on_gcd(a, b):
    assert C.dense_gcd(a, b) == P.dense_gcd(a, b)


@pytest.mark.parametrize("K", [P] + ([C] if C else []), ids=lambda k: k.BACKEND)
def test_kernel_contracts(K):
    assert K.add({1: 2}, {1: -2}) == {}
    with pytest.raises(NonExactDivision):
        K.divide({0: 1}, {0: 1, 1: 1})
    with pytest.raises(ZeroDivisionError):
        K.divide({0: 1}, {})
    # (1 - q)(1 + q), (1 + q)(2 - q) -> 1 + q
    assert K.dense_gcd([1, 0, -1], [2, 1, -1]) == [1, 1]
    assert K.dense_gcd([3, 6], [2, 4]) == [1, 2]


def _backend_with(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("QDUAL_PURE_PYTHON", None)
    else:
        env["QDUAL_PURE_PYTHON"] = env_value
    out = subprocess.run([sys.executable, "-c", "import qdual; print(qdual.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    return out.stdout.strip()


def test_backend_selection():
    assert _backend_with("1") == "python"
    assert _backend_with(None) == ("cython" if C else "python")
