from __future__ import annotations

import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnastore import kernels
from dnastore.kernels import compiled_backend, python_backend

compiled = compiled_backend()
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")

seq = st.binary(min_size=0, max_size=30).map(lambda b: bytes(b"ACGT"[x % 4] for x in b))
nonempty = seq.filter(bool)


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    if compiled is not None:
        assert kernels.BACKEND == "cython"


def test_env_var_forces_fallback():
    env = dict(os.environ, DNASTORE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import dnastore; print(dnastore.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_compiled
@given(seq, seq, st.integers(1, 5), st.integers(0, 3))
def test_parity_correlation(x, y, k, start):
    assert compiled.correlated(x, y, k, start) == python_backend.correlated(x, y, k, start)
    if x and y:
        assert compiled.correlation(x, y) == python_backend.correlation(x, y)


@needs_compiled
@given(st.integers(0, 30).flatmap(lambda n: st.tuples(*[st.text("ACGT", min_size=n, max_size=n)] * 2)))
def test_parity_hamming(t):
    a, b = (s.encode() for s in t)
    assert compiled.hamming(a, b) == python_backend.hamming(a, b)


@needs_compiled
@given(seq, st.integers(0, 8), st.integers(3, 8))
def test_parity_profile_kernels(s, start, h):
    assert compiled.rds_max(s, start) == python_backend.rds_max(s, start)
    assert compiled.gc_count(s) == python_backend.gc_count(s)
    assert compiled.stem_free(s, h) == python_backend.stem_free(s, h)


@needs_compiled
@given(nonempty, st.integers(0, 40), seq)
def test_parity_lcp(s, pos, p):
    pos = pos % (len(s) + 1)
    assert compiled.lcp(s, pos, p) == python_backend.lcp(s, pos, p)


@needs_compiled
@settings(deadline=None)
@given(
    st.text("ACGT", min_size=8, max_size=8),
    st.lists(st.text("ACGT", min_size=8, max_size=8), max_size=20),
    st.integers(0, 8),
    st.integers(1, 4),
)
def test_parity_compatible(x, acc, d, k):
    raw = [a.encode() for a in acc]
    assert compiled.compatible(x.encode(), raw, d, k) == python_backend.compatible(x.encode(), raw, d, k)


@needs_compiled
@settings(max_examples=20, deadline=None)
@given(st.lists(st.text("ACGT", min_size=1, max_size=3), min_size=1, max_size=3), st.integers(0, 5))
def test_parity_count_avoiders(pats, n):
    raw = [p.encode() for p in pats]
    assert compiled.count_avoiders(raw, n) == python_backend.count_avoiders(raw, n)
