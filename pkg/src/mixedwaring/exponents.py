"""Admissible exponents and the minor-arc exponents derived from them.

Two families of admissible exponents are available:

``"eq42"``
    Delta_v is the positive root d of ``d * exp(d / k) = k * exp(1 - v / k)``.
``"hua"``
    The endpoint of Hua's lemma, ``Delta_{2^k} = 0``, joined by Hoelder
    interpolation to the trivial ``Delta_0 = k``:
    ``Delta_v = k (1 - v / 2^k)`` for ``v <= 2^k`` and 0 beyond.  Values are
    exact rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import IntegrityError

# Weyl-exponent constant in omega(k) = 1 / (D k^2)
WEYL_D = 4.51396
# tau(k) >= 1 / (C k) for the best family known for k >= 4
TAU_C = 9.027901

FAMILIES = ("eq42", "hua")


def admissible_delta(k: int, v: float) -> float:
    """Positive root d of ``d e^{d/k} = k e^{1 - v/k}``.

    Bisection on [0, k] (the left side runs from 0 to k*e, the right side
    lies in (0, k*e]) followed by a Newton polish.  ``v = 0`` gives k exactly.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    v = float(v)
    if v < 0:
        raise ValueError(f"v must be >= 0, got {v}")
    if v == 0:
        return float(k)
    rhs = k * math.exp(1.0 - v / k)

    def g(d):
        return d * math.exp(d / k) - rhs

    lo, hi = 0.0, float(k)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    for _ in range(4):
        step = g(d) / (math.exp(d / k) * (1.0 + d / k))
        nd = d - step
        if not lo <= nd <= hi:
            break
        d = nd
    return d


def delta_residual(k: int, v: float, delta: float) -> float:
    return abs(delta * math.exp(delta / k) - k * math.exp(1.0 - float(v) / k))


def hua_delta(k: int, v) -> Fraction:
    """Admissible exponent interpolating Delta_0 = k and Delta_{2^k} = 0 (exact)."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    v = Fraction(v)
    if v < 0:
        raise ValueError(f"v must be >= 0, got {v}")
    return max(Fraction(0), k * (1 - v / 2**k))


@dataclass(frozen=True)
class AdmissibleFamily:
    k: int
    source: str = "eq42"

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.source not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.source!r}")

    @property
    def exact(self) -> bool:
        return self.source == "hua"

    def delta(self, v):
        if self.source == "hua":
            return hua_delta(self.k, v)
        return admissible_delta(self.k, v)


def default_family(k: int) -> AdmissibleFamily:
    """Hua's exponents for k = 2, 3 and the root family otherwise."""
    return AdmissibleFamily(k, "hua" if k <= 3 else "eq42")


def _family(k: int, family) -> AdmissibleFamily:
    if family is None:
        return default_family(k)
    if isinstance(family, str):
        return AdmissibleFamily(k, family)
    if family.k != k:
        raise ValueError(f"family is for k={family.k}, not k={k}")
    return family


def tau_search(k: int, family=None) -> tuple:
    """(tau, argmax w).

    ``(k - 2 Delta_{2w}) / (4 w^2)`` is at most ``k / (4 w^2)`` since
    Delta >= 0, so the scan stops once that cap drops below the best value.
    """
    fam = _family(k, family)
    zero = Fraction(0) if fam.exact else 0.0
    best, best_w = None, None
    w = 1
    while True:
        term = (k - 2 * fam.delta(2 * w)) / (4 * Fraction(w * w) if fam.exact else 4.0 * w * w)
        if best is None or term > best:
            best, best_w = term, w
        w += 1
        cap = Fraction(k, 4 * w * w) if fam.exact else k / (4.0 * w * w)
        if best > zero and cap <= best:
            return best, best_w


def tau(k: int, family=None):
    return tau_search(k, family)[0]


def delta_star(k: int, s, family=None, refine_step=Fraction(1, 8)):
    """min over 0 <= t <= s-2 of Delta_{s-t} - t tau(k).

    t runs over the integers in range and the endpoint s-2, then over a
    1/8-step grid within one unit of the best integer point.
    """
    fam = _family(k, family)
    s = Fraction(s) if fam.exact else float(s)
    if s < 2:
        raise ValueError(f"s must be >= 2, got {s}")
    t_val = tau(k, fam)
    top = s - 2

    def value(t):
        return fam.delta(s - t) - t * t_val

    grid = list(range(0, int(math.floor(top)) + 1))
    if grid[-1] != top:
        grid.append(top)
    best_t = min(grid, key=value)
    best = value(best_t)
    step = Fraction(refine_step) if fam.exact else float(refine_step)
    t = max(0, best_t - 1)
    while t <= min(top, best_t + 1):
        val = value(t)
        if val < best:
            best, best_t = val, t
        t += step
    return best


def omega(k: int) -> float:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return 1.0 / (WEYL_D * k * k)


@dataclass(frozen=True)
class ConstantCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def ok(self) -> bool:
        return self.lhs < self.rhs


class SelfTestError(IntegrityError):
    pass


def constant_checks(r_max: int = 64) -> list[ConstantCheck]:
    """The numerical inequalities between the fixed constants.  Raises on failure."""
    e = math.e
    checks = [ConstantCheck("2eD<25", 2 * e * WEYL_D, 25.0)]
    for r in range(2, r_max + 1):
        checks.append(ConstantCheck(f"2^(1+1/{r})eD<35", 2 ** (1 + 1 / r) * e * WEYL_D, 35.0))
    checks.append(ConstantCheck("C<2D", TAU_C, 2 * WEYL_D))
    bad = [c.name for c in checks if not c.ok]
    if bad:
        raise SelfTestError(f"constant inequalities failed: {bad}")
    return checks
