"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public names at the bottom dispatch on :func:`mixedwaring._accel.backend`.
Both flavours must return identical results; ``tests/test_kernels.py`` and
``benchmarks/bench_kernels.py`` compare them directly.
"""
from __future__ import annotations

import math

import numpy as np

from . import _accel
from ._accel import njit

TWO_PI = 2.0 * math.pi

# den * den must stay below 2**63 for the int64 modular products below.
MAX_INT64_DENOMINATOR = 3_037_000_499


# --------------------------------------------------------------------------
# largest prime factor sieve
# --------------------------------------------------------------------------

@njit
def _lpf_numba(P):
    lpf = np.zeros(P + 1, dtype=np.int64)
    if P >= 1:
        lpf[1] = 1
    for p in range(2, P + 1):
        if lpf[p] == 0:
            for m in range(p, P + 1, p):
                lpf[m] = p
    return lpf


def _lpf_numpy(P):
    lpf = np.zeros(P + 1, dtype=np.int64)
    if P >= 1:
        lpf[1] = 1
    if P < 2:
        return lpf
    is_prime = np.ones(P + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(P) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    # ascending primes: later (larger) primes overwrite, leaving the largest
    for p in np.flatnonzero(is_prime):
        lpf[p::p] = p
    return lpf


# --------------------------------------------------------------------------
# smoothness of a segment [lo, hi) against a list of primes
# --------------------------------------------------------------------------

@njit
def _segment_smooth_numba(lo, hi, primes):
    rem = np.arange(lo, hi).astype(np.int64)
    for p in primes:
        start = ((lo + p - 1) // p) * p
        for m in range(start, hi, p):
            i = m - lo
            while rem[i] % p == 0:
                rem[i] //= p
    return rem == 1


def _segment_smooth_numpy(lo, hi, primes):
    rem = np.arange(lo, hi, dtype=np.int64)
    for p in primes:
        p = int(p)
        start = ((lo + p - 1) // p) * p - lo
        if start >= rem.size:
            continue
        view = rem[start::p]
        mask = view % p == 0
        while mask.any():
            view[mask] //= p
            mask = view % p == 0
    return rem == 1


# --------------------------------------------------------------------------
# smooth Weyl sum at a rational point num/den
# --------------------------------------------------------------------------

@njit
def _weyl_rational_numba(xs, num, den, k):
    re = 0.0
    im = 0.0
    cre = 0.0
    cim = 0.0
    for x in xs:
        xr = x % den
        r = 1 % den
        for _ in range(k):
            r = (r * xr) % den
        phase = TWO_PI * (((num * r) % den) / den)
        # Kahan compensated accumulation
        y = math.cos(phase) - cre
        t = re + y
        cre = (t - re) - y
        re = t
        y = math.sin(phase) - cim
        t = im + y
        cim = (t - im) - y
        im = t
    return re, im


def _weyl_rational_numpy(xs, num, den, k):
    xr = np.asarray(xs, dtype=np.int64) % den
    r = np.full(xr.shape, 1 % den, dtype=np.int64)
    for _ in range(k):
        r = (r * xr) % den
    phase = TWO_PI * (((num * r) % den) / den)
    return math.fsum(np.cos(phase)), math.fsum(np.sin(phase))


# --------------------------------------------------------------------------
# weighted exponential sums  sum_m w[m-1] e(beta m)  for many beta
# --------------------------------------------------------------------------

@njit
def _weighted_expsum_numba(betas, weights):
    out = np.empty(betas.size, dtype=np.complex128)
    for j in range(betas.size):
        b = betas[j]
        re = 0.0
        im = 0.0
        for i in range(weights.size):
            m = i + 1
            x = b * m
            x = x - math.floor(x)
            ph = TWO_PI * x
            re += weights[i] * math.cos(ph)
            im += weights[i] * math.sin(ph)
        out[j] = complex(re, im)
    return out


def _weighted_expsum_numpy(betas, weights, chunk=1 << 22):
    betas = np.asarray(betas, dtype=np.float64)
    m = np.arange(1, weights.size + 1, dtype=np.float64)
    out = np.empty(betas.size, dtype=np.complex128)
    rows = max(1, chunk // max(1, weights.size))
    for start in range(0, betas.size, rows):
        b = betas[start : start + rows]
        x = np.multiply.outer(b, m)
        x -= np.floor(x)
        ph = TWO_PI * x
        out[start : start + rows] = np.cos(ph) @ weights + 1j * (np.sin(ph) @ weights)
    return out


# --------------------------------------------------------------------------
# iterated convolution with a k-th power indicator (representation counts)
# --------------------------------------------------------------------------

@njit
def _shift_add_numba(cur, powers):
    L = cur.size
    out = np.zeros(L, dtype=np.int64)
    # shifts arrive ascending, so the inner loop can stop at the first p > v
    for v in range(L):
        acc = 0
        for p in powers:
            if p > v:
                break
            acc += cur[v - p]
        out[v] = acc
    return out


def _shift_add_numpy(cur, powers):
    L = cur.size
    out = np.zeros(L, dtype=cur.dtype)
    for p in powers:
        p = int(p)
        if p < L:
            out[p:] += cur[: L - p]
    return out


# --------------------------------------------------------------------------
# power residues and cyclic convolution modulo m
# --------------------------------------------------------------------------

@njit
def _power_hist_numba(k, m):
    hist = np.zeros(m, dtype=np.int64)
    for t in range(1, m + 1):
        tr = t % m
        r = 1 % m
        for _ in range(k):
            r = (r * tr) % m
        hist[r] += 1
    return hist


def _power_hist_numpy(k, m):
    t = np.arange(1, m + 1, dtype=np.int64) % m
    r = np.full(m, 1 % m, dtype=np.int64)
    for _ in range(k):
        r = (r * t) % m
    return np.bincount(r, minlength=m).astype(np.int64)


@njit
def _cyclic_convolve_numba(dist, hist):
    m = dist.size
    out = np.zeros(m, dtype=np.int64)
    for v in range(m):
        c = hist[v]
        if c == 0:
            continue
        for r in range(m):
            out[(r + v) % m] += c * dist[r]
    return out


def _cyclic_convolve_numpy(dist, hist):
    out = np.zeros_like(dist)
    for v in np.flatnonzero(hist):
        out += hist[v] * np.roll(dist, int(v))
    return out


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

def _pick(numba_impl, numpy_impl):
    return numba_impl if _accel.backend() == "numba" else numpy_impl


def largest_prime_factors(P: int) -> np.ndarray:
    """Array ``lpf`` with ``lpf[n]`` the largest prime factor of n (lpf[1] = 1)."""
    return _pick(_lpf_numba, _lpf_numpy)(int(P))


def segment_smooth_mask(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    primes = np.asarray(primes, dtype=np.int64)
    return _pick(_segment_smooth_numba, _segment_smooth_numpy)(int(lo), int(hi), primes)


def weyl_sum_rational(xs: np.ndarray, num: int, den: int, k: int) -> tuple[float, float]:
    if den > MAX_INT64_DENOMINATOR:
        raise ValueError("denominator too large for the int64 phase kernel")
    xs = np.asarray(xs, dtype=np.int64)
    return _pick(_weyl_rational_numba, _weyl_rational_numpy)(xs, int(num) % den, int(den), int(k))


def weighted_expsum(betas: np.ndarray, weights: np.ndarray) -> np.ndarray:
    betas = np.ascontiguousarray(betas, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    return _pick(_weighted_expsum_numba, _weighted_expsum_numpy)(betas, weights)


def shift_add(cur: np.ndarray, powers: np.ndarray) -> np.ndarray:
    """``out[v] = sum_p cur[v - p]`` over the given nonnegative shifts."""
    powers = np.sort(np.asarray(powers, dtype=np.int64))
    if cur.dtype == object:
        return _shift_add_numpy(cur, powers)
    return _pick(_shift_add_numba, _shift_add_numpy)(cur, powers)


def power_residue_histogram(k: int, m: int) -> np.ndarray:
    """Counts of ``t**k mod m`` for ``t`` in ``1..m``."""
    if m > MAX_INT64_DENOMINATOR:
        raise ValueError("modulus too large for the int64 residue kernel")
    return _pick(_power_hist_numba, _power_hist_numpy)(int(k), int(m))


def cyclic_convolve(dist: np.ndarray, hist: np.ndarray) -> np.ndarray:
    """Cyclic convolution of two length-m count vectors.  Object arrays stay exact."""
    if dist.dtype == object or hist.dtype == object:
        return _cyclic_convolve_numpy(dist.astype(object), hist.astype(object))
    return _pick(_cyclic_convolve_numba, _cyclic_convolve_numpy)(dist, hist)
