import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dgqs import _rref_py, kernels
from dgqs.field import Field
from dgqs.linalg import Span, kernel, pivot_columns, rank, rref, transpose
from oracles import naive_rank, naive_rref

try:
    from dgqs import _rref
except ImportError:
    _rref = None

QQ = Field(0)

small_rows = st.lists(
    st.dictionaries(st.integers(0, 7), st.integers(-4, 4).filter(bool), max_size=6),
    max_size=8,
)


def _dense(rows, ncols):
    return [[r.get(c, 0) for c in range(ncols)] for r in rows]


@given(small_rows)
def test_rref_matches_naive_over_q(rows):
    got = rref([{k: Fraction(v) for k, v in r.items()} for r in rows], QQ)
    want = naive_rref(rows, 8)
    assert [c for c, _ in got] == [c for c, _ in want]
    for (_, row), (_, ref) in zip(got, want):
        assert [row.get(c, 0) for c in range(8)] == ref


@given(small_rows, st.sampled_from([2, 3, 7, 101]))
def test_rref_matches_naive_over_fp(rows, p):
    F = Field(p)
    got = rref([{k: v % p for k, v in r.items() if v % p} for r in rows], F)
    want = naive_rref(rows, 8, p)
    assert [c for c, _ in got] == [c for c, _ in want]
    for (_, row), (_, ref) in zip(got, want):
        assert [row.get(c, 0) for c in range(8)] == ref


@given(small_rows)
def test_span_kernel_and_express(rows):
    vecs = [{k: Fraction(v) for k, v in r.items()} for r in rows]
    S = Span(vecs, 8, QQ)
    assert S.rank == naive_rank(rows, 8)
    assert len(S.kernel()) == len(rows) - S.rank
    for rel in S.kernel():
        total = {}
        for k, c in rel.items():
            for i, v in vecs[k].items():
                total[i] = total.get(i, 0) + c * v
        assert not any(total.values())
    # every input vector is expressible, and the coefficients reproduce it
    for v in vecs:
        coeffs = S.express(v)
        assert coeffs is not None
        total = {}
        for k, c in coeffs.items():
            for i, x in vecs[k].items():
                total[i] = total.get(i, 0) + c * x
        assert {i: x for i, x in total.items() if x} == v


def test_pivot_columns_are_first_come():
    cols = [{0: Fraction(1)}, {0: Fraction(2)}, {1: Fraction(1)}, {0: Fraction(1), 1: Fraction(1)}]
    assert pivot_columns(cols, QQ) == [0, 2]
    assert rank(transpose(cols), QQ) == 2
    assert len(kernel(cols, QQ)) == 2


def test_fraction_free_rows_are_primitive():
    out = _rref_py.rref_int([{0: 4, 1: 6}, {1: 9, 2: -3}])
    for c, row in out:
        assert row[c] > 0
        from math import gcd
        g = 0
        for v in row.values():
            g = gcd(g, v)
        assert g == 1


# -- compiled kernel parity ---------------------------------------------------

needs_compiled = pytest.mark.skipif(_rref is None, reason="compiled kernel not built")

wide_rows = st.lists(
    st.dictionaries(st.integers(-2, 20), st.integers(-10**3, 10**3), max_size=10),
    max_size=14,
)


@needs_compiled
@given(wide_rows)
def test_compiled_int_kernel_matches_python(rows):
    assert _rref.rref_int([dict(r) for r in rows]) == _rref_py.rref_int([dict(r) for r in rows])


@needs_compiled
@given(wide_rows, st.sampled_from([2, 3, 32003, 2147483647]))
def test_compiled_mod_kernel_matches_python(rows, p):
    assert _rref.rref_mod([dict(r) for r in rows], p) == _rref_py.rref_mod([dict(r) for r in rows], p)


@needs_compiled
def test_compiled_kernel_falls_back_on_overflow():
    rng = random.Random(5)
    rows = [{c: rng.randint(-10**30, 10**30) for c in range(6)} for _ in range(6)]
    assert _rref.rref_int([dict(r) for r in rows]) == _rref_py.rref_int([dict(r) for r in rows])
    dense = [{c: rng.randint(-9, 9) for c in range(40)} for _ in range(40)]
    assert _rref.rref_int([dict(r) for r in dense]) == _rref_py.rref_int([dict(r) for r in dense])


def test_pure_python_switch():
    env = dict(os.environ, DGQS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from dgqs import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("python", "compiled")
