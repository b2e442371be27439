"""Exact counts of representations n = x_1^{k_1} + ... + x_s^{k_s} with x_i >= 1.

Three independent methods: naive enumeration, meet-in-the-middle, and
iterated convolution with k-th power indicators.  An optional smoothness
constraint restricts each x_i to A(P_i, P_i^eta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import ExponentSequence, iroot, smoothness_bound
from .errors import ResourceLimitError
from .main_term import predict_count
from .smooth import cached_smooth_set

METHODS = ("naive", "mitm", "convolution")
MAX_TABLE = 50_000_000
MAX_WINDOW_BYTES = 1 << 31
INT64_SAFE = 2**62


def _constraint_label(eta) -> str:
    return "none" if eta is None else f"smooth({eta})"


def variable_values(k: int, limit: int, eta: float | None = None) -> np.ndarray:
    """x^k for admissible x >= 1 with x^k <= limit, ascending."""
    P = iroot(limit, k) if limit >= 1 else 0
    if P < 1:
        return np.zeros(0, dtype=np.int64)
    if eta is None or eta == 1:
        xs = np.arange(1, P + 1, dtype=np.int64)
    else:
        R = smoothness_bound(P, eta)
        xs = cached_smooth_set(P, max(R, 1)).members
    if P ** k > INT64_SAFE:
        raise ResourceLimitError(f"x^{k} up to {limit} does not fit int64")
    return xs**k


@dataclass(frozen=True)
class CountResult:
    n: int
    count: int
    constraint: str
    method: str


def _count_naive(vals: list[np.ndarray], n: int) -> int:
    lists = [v.tolist() for v in vals]
    # suffix minima let a partial sum be abandoned early
    rest_min = [0] * (len(lists) + 1)
    for i in range(len(lists) - 1, -1, -1):
        rest_min[i] = rest_min[i + 1] + (lists[i][0] if lists[i] else 0)

    def go(i, left):
        if i == len(lists) - 1:
            return 1 if left in last else 0
        total = 0
        for v in lists[i]:
            if v + rest_min[i + 1] > left:
                break
            total += go(i + 1, left - v)
        return total

    if any(not v for v in lists):
        return 0
    last = set(lists[-1])
    return go(0, n)


def _partial_sums(vals: list[np.ndarray], n: int, max_table: int) -> np.ndarray:
    sums = np.zeros(1, dtype=np.int64)
    for v in vals:
        size = sums.size * v.size
        if size > max_table:
            raise ResourceLimitError(f"partial-sum table of {size} entries exceeds {max_table}")
        sums = (sums[:, None] + v[None, :]).ravel()
        sums = sums[sums <= n]
    return sums


def _balanced_split(vals: list[np.ndarray]) -> tuple[list, list]:
    """Greedy partition of the variables equalising the product of range sizes."""
    order = sorted(range(len(vals)), key=lambda i: -vals[i].size)
    left, right = [], []
    lsize = rsize = 0.0
    for i in order:
        w = math.log(max(1, vals[i].size))
        if lsize <= rsize:
            left.append(vals[i])
            lsize += w
        else:
            right.append(vals[i])
            rsize += w
    return left, right


def _count_mitm(vals: list[np.ndarray], n: int, max_table: int) -> int:
    left, right = _balanced_split(vals)
    a = _partial_sums(left, n, max_table)
    b = _partial_sums(right, n, max_table)
    keys, counts = np.unique(b, return_counts=True)
    need = n - a
    idx = np.searchsorted(keys, need)
    idx_c = np.minimum(idx, keys.size - 1)
    hit = (idx < keys.size) & (keys[idx_c] == need)
    return int(counts[idx_c[hit]].sum())


def _convolve_all(vals: list[np.ndarray], length: int) -> np.ndarray:
    # product of the value-list sizes bounds every count
    bound = math.prod(max(1, v.size) for v in vals)
    dtype = np.int64 if bound < INT64_SAFE else object
    cur = np.zeros(length, dtype=dtype)
    cur[0] = 1
    for v in vals:
        cur = kernels.shift_add(cur, v[v < length])
    return cur


def count_representations(ks, n: int, eta: float | None = None, method: str = "mitm",
                          max_table: int = MAX_TABLE) -> CountResult:
    ks = ExponentSequence.coerce(ks)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    vals = [variable_values(k, n, eta) for k in ks]
    if method == "naive":
        count = _count_naive(vals, n)
    elif method == "mitm":
        count = _count_mitm(vals, n, max_table)
    else:
        count = int(_convolve_all(vals, n + 1)[n])
    return CountResult(n, count, _constraint_label(eta), method)


@dataclass
class WindowScan:
    ks: tuple[int, ...]
    N0: int
    N1: int
    counts: np.ndarray
    eta: float | None = None

    @property
    def zero_set(self) -> list[int]:
        return [self.N0 + int(i) for i in np.flatnonzero(self.counts == 0)]

    def count(self, n: int) -> int:
        if not self.N0 <= n < self.N1:
            raise IndexError(n)
        return int(self.counts[n - self.N0])

    def rows(self):
        for i, c in enumerate(self.counts):
            yield self.N0 + i, int(c)


def count_window(ks, N0: int, N1: int, eta: float | None = None,
                 max_bytes: int = MAX_WINDOW_BYTES) -> WindowScan:
    """Counts for every n in [N0, N1) from one convolution of length N1.

    Under a smoothness constraint every variable uses R_i = P_i^eta with
    P_i taken from N1 - 1, the top of the window.
    """
    ks = ExponentSequence.coerce(ks)
    if not 1 <= N0 < N1:
        raise ValueError(f"need 1 <= N0 < N1, got [{N0}, {N1})")
    if N1 * len(ks) * 8 > max_bytes:
        raise ResourceLimitError(f"window of length {N1} with s={len(ks)} exceeds {max_bytes} bytes")
    vals = [variable_values(k, N1 - 1, eta) for k in ks]
    counts = _convolve_all(vals, N1)[N0:N1]
    return WindowScan(ks.ks, N0, N1, counts, eta)


@dataclass
class ExceptionalSet:
    ks: tuple[int, ...]
    N: int
    zero_set: list[int]

    @property
    def largest(self) -> int | None:
        return self.zero_set[-1] if self.zero_set else None

    def to_dict(self) -> dict:
        return {"ks": list(self.ks), "N": self.N, "size": len(self.zero_set),
                "largest": self.largest, "zero_set": self.zero_set}


def exceptional_scan(ks, N: int, eta: float | None = None) -> ExceptionalSet:
    """All n <= N with no representation."""
    scan = count_window(ks, 1, N + 1, eta)
    return ExceptionalSet(scan.ks, N, scan.zero_set)


@dataclass
class RatioStats:
    ks: tuple[int, ...]
    N0: int
    N1: int
    X: int
    ratios: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.mean(self.ratios))

    @property
    def median(self) -> float:
        return float(np.median(self.ratios))

    @property
    def min(self) -> float:
        return float(np.min(self.ratios))

    def to_dict(self) -> dict:
        return {"ks": list(self.ks), "N0": self.N0, "N1": self.N1, "X": self.X,
                "mean": self.mean, "median": self.median, "min": self.min,
                "max": float(np.max(self.ratios))}


def empirical_vs_prediction(ks, N0: int, N1: int, X: int, scan: WindowScan | None = None) -> RatioStats:
    """count(n) / prediction(n) over the window, with eta = 1."""
    ks = ExponentSequence.coerce(ks)
    if ks.theta <= 2:
        raise ValueError(f"needs theta > 2, got {ks.theta}")
    if scan is None:
        scan = count_window(ks, N0, N1)
    ratios = np.array([c / predict_count(ks, n, X).main_term for n, c in scan.rows()])
    return RatioStats(ks.ks, N0, N1, int(X), ratios)
