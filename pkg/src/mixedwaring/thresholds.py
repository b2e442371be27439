"""Sufficient conditions on the number of variables, and the least s meeting each.

Exponent sequences for the scanning rules are given as generators: callables
``i -> k_i`` with 1-based ``i``.  A finite sequence raises IndexError past
its end, which ends the scan.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from .core import ExponentSequence
from .exponents import WEYL_D

THM11_CONSTANT = 3.20032
COR12_CONSTANT = 4.71
SLACK = 1e-12
KNIFE_EDGE = 1e-9
DEFAULT_SCAN_LIMIT = 10**7
# Phi sums are kept as exact fractions up to this many terms
EXACT_TERM_LIMIT = 4096

RULES = (
    "Thm11", "Cor12", "Eq49", "Cor44", "Lemma53_Eq55",
    "Thm13_general", "Thm13_rgek", "Cor14", "Cor15",
)

Generator = Callable[[int], int]


def constant_sequence(k: int) -> Generator:
    return lambda i: k


def progression_sequence(k: int, r: int) -> Generator:
    return lambda i: k + r * (i - 1)


def finite_sequence(ks) -> Generator:
    ks = ExponentSequence.coerce(ks).ks

    def gen(i):
        if i < 1:
            raise IndexError(i)
        return ks[i - 1]

    return gen


@dataclass
class ThresholdReport:
    rule: str
    inputs: dict
    lhs: float | None = None
    rhs: float | None = None
    min_s: int | None = None
    margin: float | None = None
    holds: bool | None = None
    fails_below: bool | None = None
    knife_edge: bool = False
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.min_s is not None

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.min_s is None and self.holds is None:
            d["min_s"] = "not found within scan limit"
        return d


def _finish(report: ThresholdReport) -> ThresholdReport:
    if report.margin is not None:
        report.knife_edge = abs(report.margin) < KNIFE_EDGE
    return report


class _Kahan:
    __slots__ = ("total", "comp")

    def __init__(self):
        self.total = 0.0
        self.comp = 0.0

    def add(self, x: float) -> None:
        y = x - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t


def _strict(lhs, rhs) -> bool:
    return lhs - rhs > SLACK


def _nonstrict(lhs, rhs) -> bool:
    return lhs - rhs >= -SLACK


class _Checked:
    """Wraps a generator, enforcing integers >= 2 in nondecreasing order."""

    def __init__(self, gen: Generator):
        self.gen = gen
        self.last = 2

    def __call__(self, i: int) -> int:
        k = int(self.gen(i))
        if k < 2 or k < self.last:
            raise ValueError(f"exponents must be nondecreasing integers >= 2 (k_{i}={k})")
        self.last = k
        return k


def thm11_min_s(generator: Generator, scan_limit: int = DEFAULT_SCAN_LIMIT) -> ThresholdReport:
    """Least s with sum_{i=3}^s 1/k_i > 2 log k_1 + 1/k_2 + 3.20032."""
    gen = _Checked(generator)
    k1, k2 = gen(1), gen(2)
    rhs = 2 * math.log(k1) + 1 / k2 + THM11_CONSTANT
    report = ThresholdReport("Thm11", {"k1": k1, "k2": k2, "scan_limit": scan_limit}, rhs=rhs)
    acc = _Kahan()
    prev = 0.0
    s = 2
    while s <= scan_limit:
        if s >= 3:
            try:
                acc.add(1.0 / gen(s))
            except IndexError:
                report.note = f"sequence exhausted at s={s - 1}"
                break
        if _strict(acc.total, rhs):
            report.min_s = s
            report.lhs = acc.total
            report.margin = acc.total - rhs
            report.fails_below = s == 2 or not _strict(prev, rhs)
            return _finish(report)
        prev = acc.total
        s += 1
    report.lhs = acc.total
    report.margin = acc.total - rhs
    return _finish(report)


def cor12_min_s(j: int, generator: Generator, scan_limit: int = DEFAULT_SCAN_LIMIT) -> ThresholdReport:
    """Least s with sum_{i=j}^{j+s-1} 1/k_i >= 2 log k_j + 4.71."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    gen = _Checked(generator)
    for i in range(1, j):
        gen(i)
    kj = gen(j)
    rhs = 2 * math.log(kj) + COR12_CONSTANT
    report = ThresholdReport("Cor12", {"j": j, "kj": kj, "scan_limit": scan_limit}, rhs=rhs)
    acc = _Kahan()
    acc.add(1.0 / kj)
    prev = 0.0
    s = 1
    while s <= scan_limit:
        if _nonstrict(acc.total, rhs):
            report.min_s = s
            report.lhs = acc.total
            report.margin = acc.total - rhs
            report.fails_below = s == 1 or not _nonstrict(prev, rhs)
            return _finish(report)
        prev = acc.total
        s += 1
        try:
            acc.add(1.0 / gen(j + s - 1))
        except IndexError:
            report.note = f"sequence exhausted at s={s - 1}"
            break
    report.lhs = prev
    report.margin = prev - rhs
    return _finish(report)


@dataclass
class MinorArcMargin:
    phi1: Fraction
    theta1: float
    omega_exp: float
    delta: float
    weights: tuple[Fraction, ...]

    def to_dict(self) -> dict:
        return {
            "phi1": str(self.phi1),
            "theta1": self.theta1,
            "omega_exp": self.omega_exp,
            "delta": self.delta,
            "weights": [str(w) for w in self.weights],
        }


def _eq49_rhs(k1: int, k2: int) -> float:
    return 2 * math.log(k1) + 2 / k2 + 1 + math.log(2 * WEYL_D)


def eq49_check(ks) -> tuple[ThresholdReport, MinorArcMargin]:
    """sum_{i>=2} 1/k_i > 2 log k_1 + 2/k_2 + 1 + log(2D), with the Hoelder data behind it."""
    ks = ExponentSequence.coerce(ks)
    if ks.s < 2:
        raise ValueError("the minor-arc condition needs s >= 2")
    k1, k2 = ks[0], ks[1]
    phi1 = sum((Fraction(1, k) for k in ks.ks[1:]), Fraction(0))
    lhs = float(phi1)
    rhs = _eq49_rhs(k1, k2)
    theta1 = math.exp(1 - lhs + 2 / k2)
    omega_exp = 1 / (WEYL_D * k1 * k1)
    delta = (omega_exp - 2 * theta1) / 15
    margin = MinorArcMargin(phi1, theta1, omega_exp, delta, tuple(k * phi1 for k in ks.ks[1:]))
    report = ThresholdReport(
        "Eq49", {"ks": list(ks.ks)}, lhs=lhs, rhs=rhs, margin=lhs - rhs,
        holds=_strict(lhs, rhs), extra={"delta": delta},
    )
    return _finish(report), margin


def eq49_min_s(generator: Generator, scan_limit: int = DEFAULT_SCAN_LIMIT) -> ThresholdReport:
    gen = _Checked(generator)
    k1, k2 = gen(1), gen(2)
    rhs = _eq49_rhs(k1, k2)
    report = ThresholdReport("Eq49", {"k1": k1, "k2": k2, "scan_limit": scan_limit}, rhs=rhs)
    acc = _Kahan()
    acc.add(1.0 / k2)
    prev = 0.0
    s = 2
    while s <= scan_limit:
        if _strict(acc.total, rhs):
            report.min_s = s
            report.lhs = acc.total
            report.margin = acc.total - rhs
            report.fails_below = s == 2 or not _strict(prev, rhs)
            return _finish(report)
        prev = acc.total
        s += 1
        try:
            acc.add(1.0 / gen(s))
        except IndexError:
            report.note = f"sequence exhausted at s={s - 1}"
            break
    report.lhs = prev
    report.margin = prev - rhs
    return _finish(report)


# ---------------------------------------------------------------------------
# arithmetic progressions k, k+r, k+2r, ...
# ---------------------------------------------------------------------------

def A_of_r(r: int) -> Fraction:
    """r^{-1} 25^r (r+1)^{r+1}, exactly."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return Fraction(25**r * (r + 1) ** (r + 1), r)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def thm13_general(k: int, r: int) -> tuple[Fraction, int]:
    exact = A_of_r(r) * (k + 1) ** (r + 1)
    return exact, _ceil(exact)


def thm13_bound(k: int, r: int) -> int:
    """Integer upper bound on R(k, r); the smaller branch when r >= k."""
    if k < 2 or r < 1:
        raise ValueError(f"need k >= 2 and r >= 1, got k={k}, r={r}")
    bound = thm13_general(k, r)[1]
    if r >= k:
        bound = min(bound, (6 * k + 6) ** (2 * r))
    return bound


def thm13_report(k: int, r: int) -> ThresholdReport:
    exact, general = thm13_general(k, r)
    extra = {"A_r": str(A_of_r(r)), "general_exact": str(exact), "general_ceil": general}
    rule = "Thm13_general"
    if r >= k:
        extra["rgek"] = (6 * k + 6) ** (2 * r)
        if extra["rgek"] < general:
            rule = "Thm13_rgek"
    return ThresholdReport(rule, {"k": k, "r": r}, min_s=thm13_bound(k, r), extra=extra)


def cor14_bound(k: int) -> int:
    return 100 * (k + 1) ** 2


def cor15_bound(k: int) -> int:
    return (6 * k + 6) ** (2 * k)


def _eq55_sides(k: int, r: int, s: int) -> tuple[float, float]:
    c = 1 + 2 / (k * (r + 1))
    log_lhs = math.log(2) + c + (math.log(k * (r + 1)) - math.log(k + r * s)) / r
    return math.exp(log_lhs), 1 / (WEYL_D * k * (r + 1))


def eq55_check(k: int, r: int, s: int) -> ThresholdReport:
    """2e^{1+2/(k(r+1))} (k(r+1)/(k+rs))^{1/r} < 1/(Dk(r+1))."""
    if k < 2 or r < 1 or s < 1:
        raise ValueError(f"need k >= 2, r >= 1, s >= 1; got k={k}, r={r}, s={s}")
    lhs, rhs = _eq55_sides(k, r, s)
    holds = rhs - lhs > SLACK * rhs
    exact, bound = thm13_general(k, r)
    implied = s >= exact
    report = ThresholdReport(
        "Lemma53_Eq55", {"k": k, "r": r, "s": s}, lhs=lhs, rhs=rhs,
        margin=rhs - lhs, holds=holds,
        extra={"sufficient_bound": bound, "implied_by_bound": implied,
               "consistent": (not implied) or holds},
    )
    return _finish(report)


def eq55_min_s(k: int, r: int) -> ThresholdReport:
    c = 1 + 2 / (k * (r + 1))
    log_b = math.log(k * (r + 1)) + r * (math.log(2 * WEYL_D * k * (r + 1)) + c)
    guess = max(1, int(math.floor((math.exp(log_b) - k) / r)) + 1)

    def ok(s):
        return eq55_check(k, r, s).holds

    s = guess
    while s > 1 and ok(s - 1):
        s -= 1
    while not ok(s):
        s += 1
    report = eq55_check(k, r, s)
    report.min_s = s
    report.fails_below = s == 1 or not ok(s - 1)
    return report


def _cor44_sides(k: int, r: int, s: int) -> tuple[float, float]:
    lhs = math.log((k + r * s) / (k + r)) / r
    rhs = 2 * math.log(k) + 2 / (k + r) + 1 + math.log(2 * WEYL_D)
    return lhs, rhs


def cor44_check(k: int, r: int, s: int) -> ThresholdReport:
    """(1/r) log((k+rs)/(k+r)) >= 2 log k + 2/(k+r) + 1 + log(2D)."""
    if k < 2 or r < 1 or s < 1:
        raise ValueError(f"need k >= 2, r >= 1, s >= 1; got k={k}, r={r}, s={s}")
    lhs, rhs = _cor44_sides(k, r, s)
    bound = (6 * k + 6) ** (2 * r)
    report = ThresholdReport(
        "Cor44", {"k": k, "r": r, "s": s}, lhs=lhs, rhs=rhs, margin=lhs - rhs,
        holds=_nonstrict(lhs, rhs),
        extra={"sufficient_bound": bound, "r_ge_k": r >= k,
               "implied_by_bound": r >= k and s >= bound},
    )
    return _finish(report)


def cor44_min_s(k: int, r: int) -> ThresholdReport:
    rhs = _cor44_sides(k, r, 1)[1]
    log_s = r * rhs + math.log(k + r) - math.log(r)
    if log_s > 600:
        return ThresholdReport(
            "Cor44", {"k": k, "r": r}, rhs=rhs,
            note=f"least s exceeds float range (log10 s ~ {log_s / math.log(10):.2f})",
        )

    def ok(s):
        return cor44_check(k, r, s).holds

    s = max(1, int(math.floor(((k + r) * math.exp(r * rhs) - k) / r)))
    while s > 1 and ok(s - 1):
        s -= 1
    while not ok(s):
        s += 1
    report = cor44_check(k, r, s)
    report.min_s = s
    report.fails_below = s == 1 or not ok(s - 1)
    return report


@dataclass
class Theta2Report:
    k: int
    r: int
    s: int
    phi2: Fraction | None
    phi2_float: float
    theta2: float
    rhs: float
    holds: bool

    @property
    def exact(self) -> bool:
        return self.phi2 is not None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["phi2"] = None if self.phi2 is None else str(self.phi2)
        return d


def theta2_margin(k: int, r: int, s: int) -> Theta2Report:
    """Phi_2 = sum_{i=k+1}^s 1/k_i and Theta_2 = e^{1 - Phi_2 + 2/(k(r+1))}."""
    if s <= k:
        raise ValueError(f"need s > k, got s={s}, k={k}")
    terms = [k + r * (i - 1) for i in range(k + 1, s + 1)]
    if len(terms) <= EXACT_TERM_LIMIT:
        phi2 = sum((Fraction(1, t) for t in terms), Fraction(0))
        phi2_float = float(phi2)
    else:
        phi2 = None
        phi2_float = math.fsum(1 / t for t in terms)
    theta2 = math.exp(1 - phi2_float + 2 / (k * (r + 1)))
    rhs = 1 / (WEYL_D * k * (r + 1))
    return Theta2Report(k, r, s, phi2, phi2_float, theta2, rhs, 2 * theta2 < rhs)
