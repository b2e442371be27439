from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixedwaring import representations as rp
from mixedwaring.errors import ResourceLimitError

FIVE_SQUARE_EXCEPTIONS = [1, 2, 3, 4, 6, 7, 9, 10, 12, 15, 18, 33]


def brute_zero_set(ks, N):
    reach = set()
    ranges = [range(1, int(N ** (1 / k)) + 2) for k in ks]
    for xs in itertools.product(*ranges):
        v = sum(x**k for x, k in zip(xs, ks))
        if v <= N:
            reach.add(v)
    return [n for n in range(1, N + 1) if n not in reach]


@pytest.mark.parametrize("ks, n, expected", [((2, 2), 2, 1), ((2, 3), 9, 1), ((2, 3), 1, 0), ((2, 2), 25, 2)])
@pytest.mark.parametrize("method", rp.METHODS)
def test_small_counts(ks, n, expected, method):
    assert rp.count_representations(ks, n, method=method).count == expected


def test_methods_agree_exhaustive():
    ks = (2, 3, 4)
    window = rp.count_window(ks, 1, 2001)
    for n in range(1, 2001):
        a = rp.count_representations(ks, n, method="naive").count
        b = rp.count_representations(ks, n, method="mitm").count
        assert a == b == window.count(n)


def test_five_squares_zero_set():
    assert brute_zero_set((2,) * 5, 40) == FIVE_SQUARE_EXCEPTIONS
    scan = rp.count_window((2,) * 5, 1, 40)
    assert scan.zero_set == FIVE_SQUARE_EXCEPTIONS


def test_window_matches_double_loop():
    scan = rp.count_window((2, 3), 1, 20)
    for n in range(1, 20):
        ref = sum(1 for x in range(1, 5) for y in range(1, 3) if x * x + y**3 == n)
        assert scan.count(n) == ref


def test_eta_one_is_unconstrained():
    a = rp.count_window((2, 2, 3), 1, 500)
    b = rp.count_window((2, 2, 3), 1, 500, eta=1.0)
    np.testing.assert_array_equal(a.counts, b.counts)


def test_exceptional_scan():
    res = rp.exceptional_scan((2,) * 5, 10**4)
    assert res.zero_set == FIVE_SQUARE_EXCEPTIONS
    assert res.largest == 33
    squares = rp.exceptional_scan((2,), 100)
    assert len(squares.zero_set) == 90


def test_recursion_identity():
    ks = (2, 3, 4)
    full = rp.count_window(ks, 1, 1500)
    head = rp.count_window(ks[:-1], 1, 1500)
    for n in range(20, 1500, 37):
        total = sum(head.count(n - m**4) for m in range(1, 8) if n - m**4 >= 1)
        assert full.count(n) == total


@settings(max_examples=25, deadline=None)
@given(st.integers(50, 3000))
def test_smoothness_monotone(n):
    ks = (2, 2, 3)
    counts = [rp.count_representations(ks, n, eta).count for eta in (1.0, 0.8, 0.6, 0.4)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_smooth_constraint_restricts_values():
    vals = rp.variable_values(2, 400, 0.5)
    # P = 20, R = floor(sqrt(20)) = 4: 4-smooth numbers up to 20
    assert sorted(int(round(v**0.5)) for v in vals) == [1, 2, 3, 4, 6, 8, 9, 12, 16, 18]


def test_guards():
    with pytest.raises(ResourceLimitError):
        rp.count_representations((2, 2, 2, 2), 10**6, max_table=1000)
    with pytest.raises(ResourceLimitError):
        rp.count_window((2, 2), 1, 10**6, max_bytes=1000)
    with pytest.raises(ValueError):
        rp.count_window((2, 2), 5, 5)
    with pytest.raises(ValueError):
        rp.count_representations((2, 2), 0)


def test_object_escalation():
    # ten squares up to 2*10^4 stays in int64; force the object path through the bound
    vals = [rp.variable_values(2, 3000)] * 3
    exact = rp._convolve_all(vals, 3001)
    assert exact.dtype == np.int64
    old = rp.INT64_SAFE
    try:
        rp.INT64_SAFE = 10
        big = rp._convolve_all(vals, 3001)
    finally:
        rp.INT64_SAFE = old
    assert big.dtype == object
    assert [int(x) for x in big] == exact.tolist()


def test_empirical_small_window():
    stats = rp.empirical_vs_prediction((2,) * 5, 20000, 20200, 50)
    assert stats.min > 0
    assert 0.8 < stats.mean < 1.2
    with pytest.raises(ValueError):
        rp.empirical_vs_prediction((2, 2, 2, 2), 100, 200, 10)
