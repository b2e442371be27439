from __future__ import annotations

import numpy as np
import pytest

from mixedwaring import _accel, kernels
from mixedwaring.smooth import primes_up_to

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def both(fn, *args):
    with _accel.use_backend("numba"):
        a = fn(*args)
    with _accel.use_backend("numpy"):
        b = fn(*args)
    return a, b


def test_lpf():
    a, b = both(kernels.largest_prime_factors, 5000)
    np.testing.assert_array_equal(a, b)
    assert a[1] == 1 and a[97] == 97 and a[96] == 3


def test_segment_mask():
    a, b = both(kernels.segment_smooth_mask, 10_000, 12_000, primes_up_to(30))
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("num, den, k", [(1, 3, 2), (12345, 99991, 3), (7, 1_000_000_000, 4)])
def test_weyl_rational(num, den, k):
    xs = np.arange(1, 3000, dtype=np.int64)
    (ar, ai), (br, bi) = both(kernels.weyl_sum_rational, xs, num, den, k)
    assert abs(ar - br) < 1e-9 and abs(ai - bi) < 1e-9


def test_weighted_expsum():
    betas = np.linspace(-0.01, 0.01, 37)
    w = np.arange(1, 2001, dtype=float) ** -0.5
    a, b = both(kernels.weighted_expsum, betas, w)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)


def test_shift_add():
    cur = np.zeros(500, dtype=np.int64)
    cur[0] = 1
    powers = np.arange(1, 23, dtype=np.int64) ** 2
    a, b = both(kernels.shift_add, cur, powers)
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("k, m", [(2, 8), (3, 27), (4, 125), (5, 1)])
def test_power_histogram(k, m):
    a, b = both(kernels.power_residue_histogram, k, m)
    np.testing.assert_array_equal(a, b)
    assert a.sum() == m


def test_cyclic_convolve():
    rng = np.random.default_rng(3)
    d = rng.integers(0, 50, 81).astype(np.int64)
    h = rng.integers(0, 5, 81).astype(np.int64)
    a, b = both(kernels.cyclic_convolve, d, h)
    np.testing.assert_array_equal(a, b)
    direct = np.array([sum(d[r] * h[(v - r) % 81] for r in range(81)) for v in range(81)])
    np.testing.assert_array_equal(a, direct)


def test_denominator_guard():
    with pytest.raises(ValueError):
        kernels.weyl_sum_rational(np.arange(3), 1, kernels.MAX_INT64_DENOMINATOR + 1, 2)


def test_backend_switch():
    before = _accel.backend()
    with _accel.use_backend("numpy"):
        assert _accel.backend() == "numpy"
    assert _accel.backend() == before
    with pytest.raises(ValueError):
        _accel.set_backend("fortran")
