from __future__ import annotations

import numpy as np
import pytest

from mixedwaring.smooth import (
    is_smooth,
    iter_smooth_segments,
    largest_prime_factor,
    sieve_smooth,
    smooth_density,
)


def brute_smooth(P, R):
    # generate 2^a 3^b 5^c ... directly as an independent oracle
    primes = [p for p in range(2, R + 1) if all(p % d for d in range(2, p))]
    found = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for x in frontier:
            for p in primes:
                y = x * p
                if y <= P and y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(found)


@pytest.mark.parametrize(
    "P, R, card",
    [(10, 2, 4), (10, 10, 10), (100, 5, 34)],
)
def test_cardinalities(P, R, card):
    s = sieve_smooth(P, R)
    assert s.cardinality == card
    assert list(s) == brute_smooth(P, R)


def test_members_small():
    assert list(sieve_smooth(10, 2)) == [1, 2, 4, 8]


@pytest.mark.parametrize("n, R, expected", [(1, 2, True), (14, 5, False), (96, 3, True), (97, 96, False)])
def test_is_smooth(n, R, expected):
    assert is_smooth(n, R) is expected


def test_density_examples():
    assert smooth_density(10, 10) == 1.0
    assert smooth_density(100, 5) == pytest.approx(0.34)
    d = smooth_density(10**6, 10**3)
    assert 0 < d < 1


def test_consistency_exhaustive(each_backend):
    P = 10**4
    for R in (2, 3, 7, 31, 97, 1000):
        members = set(sieve_smooth(P, R))
        for n in range(1, P + 1):
            assert (n in members) == is_smooth(n, R)


def test_segmented_matches_in_memory(each_backend):
    P, R = 50_000, 50
    whole = sieve_smooth(P, R).members
    seg = sieve_smooth(P, R, segment_size=4096).members
    np.testing.assert_array_equal(whole, seg)
    chunks = list(iter_smooth_segments(P, R, 10_000))
    assert len(chunks) == 5


def test_monotone_in_P_and_R():
    counts = [[sieve_smooth(P, R).cardinality for R in (2, 5, 11, 50)] for P in (50, 200, 800)]
    arr = np.array(counts)
    assert np.all(np.diff(arr, axis=0) >= 0)
    assert np.all(np.diff(arr, axis=1) >= 0)


def test_closure_under_products():
    s = sieve_smooth(2000, 7)
    members = list(s)
    for m in members[:40]:
        for n in members[:40]:
            if m * n <= 2000:
                assert m * n in s


def test_largest_prime_factor():
    assert largest_prime_factor(1) == 1
    assert largest_prime_factor(2 * 3 * 97) == 97
    assert largest_prime_factor(2**10) == 2


def test_rejects_zero():
    with pytest.raises(ValueError):
        sieve_smooth(0, 5)
