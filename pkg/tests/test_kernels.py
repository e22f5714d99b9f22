"""The compiled and pure-Python kernels must agree bit for bit."""

import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padyn import _pykernels, kernels

try:
    from padyn import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
big = st.integers(-(2**200), 2**200)
primes = st.sampled_from([2, 3, 5, 7, 101])


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None and not os.environ.get("PADYN_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"


def test_forced_pure_python_backend():
    env = dict(os.environ, PADYN_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import padyn; print(padyn.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_python_kernel_examples():
    assert _pykernels.ival(48, 2) == 4
    assert _pykernels.ival(-81, 3) == 4
    assert _pykernels.ival_or_inf(0, 5) == _pykernels.INF_VAL
    assert _pykernels.min_val([0, 12, 18], 3) == 1
    zs, tail = _pykernels.series_mul([1, 2], [3, 4], 1, 2, 2**10)
    assert zs == [3, 10] and tail == 3  # dropped 8 = 2^3


@needs_c
@given(big.filter(bool), primes)
def test_ival_parity(n, p):
    assert _ckernels.ival(n, p) == _pykernels.ival(n, p)


@needs_c
@given(st.lists(big, max_size=20), primes)
def test_min_val_parity(xs, p):
    assert _ckernels.min_val(xs, p) == _pykernels.min_val(xs, p)


@needs_c
@given(st.lists(big, min_size=1, max_size=18), st.lists(big, min_size=1, max_size=18),
       st.integers(0, 20), primes, st.integers(1, 300))
def test_series_mul_parity(xs, ys, cap, p, e):
    m = p**e
    assert _ckernels.series_mul(xs, ys, cap, p, m) == _pykernels.series_mul(xs, ys, cap, p, m)
