"""R-smooth integers up to P: sieving, membership, density."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import kernels

DEFAULT_SEGMENT = 1 << 22
# above this P the in-memory largest-prime-factor array is replaced by segments
IN_MEMORY_LIMIT = 1 << 25


@dataclass(frozen=True, eq=False)
class SmoothSet:
    """The integers in [1, P] all of whose prime factors are <= R."""

    P: int
    R: int
    members: np.ndarray

    @property
    def cardinality(self) -> int:
        return int(self.members.size)

    @property
    def density(self) -> float:
        return self.cardinality / self.P

    def __len__(self):
        return self.cardinality

    def __iter__(self):
        return (int(x) for x in self.members)

    def __contains__(self, n) -> bool:
        i = np.searchsorted(self.members, n)
        return bool(i < self.members.size and self.members[i] == n)


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _check(P: int, R: int) -> None:
    if P < 1:
        raise ValueError(f"P must be >= 1, got {P}")
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")


def iter_smooth_segments(P: int, R: int, segment_size: int = DEFAULT_SEGMENT) -> Iterator[np.ndarray]:
    """Yield the R-smooth members of [1, P] segment by segment, ascending."""
    _check(P, R)
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    primes = primes_up_to(min(R, P))
    for lo in range(1, P + 1, segment_size):
        hi = min(P + 1, lo + segment_size)
        if R >= P:
            yield np.arange(lo, hi, dtype=np.int64)
            continue
        mask = kernels.segment_smooth_mask(lo, hi, primes)
        yield np.flatnonzero(mask).astype(np.int64) + lo


def sieve_smooth(P: int, R: int, segment_size: int | None = None) -> SmoothSet:
    """Exact set of R-smooth integers up to P.

    Uses one largest-prime-factor pass when P fits in memory, and the
    segmented sieve otherwise (or whenever ``segment_size`` is given).
    """
    _check(P, R)
    if segment_size is None and P <= IN_MEMORY_LIMIT:
        lpf = _lpf_table(P)
        members = np.flatnonzero(lpf[: P + 1] <= R)
        members = members[members >= 1].astype(np.int64)
    else:
        parts = list(iter_smooth_segments(P, R, segment_size or DEFAULT_SEGMENT))
        members = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    members.setflags(write=False)
    return SmoothSet(P, R, members)


@lru_cache(maxsize=8)
def _lpf_table(P: int) -> np.ndarray:
    lpf = kernels.largest_prime_factors(P)
    lpf.setflags(write=False)
    return lpf


@lru_cache(maxsize=64)
def cached_smooth_set(P: int, R: int) -> SmoothSet:
    return sieve_smooth(P, R)


def largest_prime_factor(n: int) -> int:
    """Largest prime factor by trial division; 1 for n = 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    best = 1
    d = 2
    while d * d <= n:
        while n % d == 0:
            best = d
            n //= d
        d += 1 if d == 2 else 2
    return max(best, n) if n > 1 else best


def is_smooth(n: int, R: int) -> bool:
    """True iff every prime divisor of n is at most R."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    d = 2
    while d <= R and d * d <= n:
        while n % d == 0:
            n //= d
        d += 1 if d == 2 else 2
    if n == 1:
        return True
    if d * d > n:
        # what is left is prime
        return n <= R
    return False


def smooth_density(P: int, R: int) -> float:
    """|A(P, R)| / P, the empirical stand-in for the smooth-number density constant."""
    return sieve_smooth(P, R).density if P <= IN_MEMORY_LIMIT else _segmented_count(P, R) / P


def _segmented_count(P: int, R: int) -> int:
    return sum(seg.size for seg in iter_smooth_segments(P, R))
