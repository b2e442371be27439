"""Smooth Weyl sums, complete sums, the auxiliary sums v(beta), and arc geometry.

Every alpha is handled as an exact rational.  Floats are converted exactly
(they are dyadic rationals), strings may be ``"N/D"`` or decimals.  Phases
``alpha * x**k mod 1`` are therefore reduced in integer arithmetic and never
suffer from ``x**k`` overflowing the double mantissa.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .exponents import omega
from .smooth import cached_smooth_set

ALPHA_DENOMINATOR = 10**9
SCAN_MAX_TRIES = 10_000
TREND_PS = (250, 500, 1000, 2000)


def parse_alpha(alpha) -> Fraction:
    """Exact rational in [0, 1) from a Fraction, int, float or ``"N/D"`` string."""
    if isinstance(alpha, str):
        text = alpha.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            frac = Fraction(int(num), int(den))
        else:
            frac = Fraction(text)
    elif isinstance(alpha, float):
        if not math.isfinite(alpha):
            raise ValueError(f"alpha must be finite, got {alpha}")
        frac = Fraction(alpha)
    else:
        frac = Fraction(alpha)
    return frac - math.floor(frac)


def canonical_alpha(alpha, max_den: int = ALPHA_DENOMINATOR) -> Fraction:
    """The rational with denominator <= max_den nearest to alpha (CLI canonical form)."""
    frac = parse_alpha(alpha)
    if frac.denominator > max_den:
        frac = frac.limit_denominator(max_den)
        frac -= math.floor(frac)
    return frac


@dataclass(frozen=True)
class SumValue:
    value: complex
    terms: int
    compensation_error: float

    def __abs__(self):
        return abs(self.value)


def _phase_sum_exact(xs, num: int, den: int, k: int) -> tuple[float, float]:
    # num * x^k mod den in integers, then one correctly rounded division
    ph = [2.0 * math.pi * ((num * pow(int(x), k, den)) % den / den) for x in xs]
    return math.fsum(map(math.cos, ph)), math.fsum(map(math.sin, ph))


def weyl_sum_members(alpha, members: np.ndarray, k: int) -> SumValue:
    """sum over the given x of e(alpha x^k)."""
    frac = parse_alpha(alpha)
    n = int(members.size)
    if frac == 0:
        return SumValue(complex(n, 0.0), n, 0.0)
    num, den = frac.numerator, frac.denominator
    if den <= kernels.MAX_INT64_DENOMINATOR:
        re, im = kernels.weyl_sum_rational(members, num, den, k)
    else:
        re, im = _phase_sum_exact(members, num, den, k)
    # each phase is exact to one rounding; trig adds a few ulps per term
    err = 8.0 * n * 2.0**-52 * 2.0 * math.pi
    return SumValue(complex(re, im), n, err)


def smooth_weyl_sum(alpha, P: int, R: int, k: int) -> SumValue:
    """f(alpha; P, R) = sum_{x in A(P,R)} e(alpha x^k)."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return weyl_sum_members(alpha, cached_smooth_set(P, R).members, k)


@lru_cache(maxsize=256)
def _unit_roots(q: int) -> np.ndarray:
    j = np.arange(q)
    return np.exp(2j * np.pi * j / q)


def complete_sum(q: int, a: int, k: int) -> complex:
    """S(q, a) = sum_{t=1}^q e(a t^k / q)."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if q == 1:
        return complex(1.0, 0.0)
    hist = kernels.power_residue_histogram(k, q)
    idx = (a % q) * np.arange(q, dtype=np.int64) % q
    return complex(np.dot(hist.astype(np.float64), _unit_roots(q)[idx]))


def complete_sums_all(q: int, k: int) -> np.ndarray:
    """S(q, a) for a = 0, ..., q-1 at once (via an FFT of the residue histogram)."""
    hist = kernels.power_residue_histogram(k, q).astype(np.float64)
    return q * np.fft.ifft(hist)


@lru_cache(maxsize=32)
def v_weights(n: int, k: int) -> np.ndarray:
    m = np.arange(1, n + 1, dtype=np.float64)
    w = m ** (-1.0 + 1.0 / k) / k
    w.setflags(write=False)
    return w


def v_sum(beta, n: int, k: int):
    """v(beta) = (1/k) sum_{m<=n} m^{-1+1/k} e(beta m); beta may be an array."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    scalar = np.ndim(beta) == 0
    out = kernels.weighted_expsum(np.atleast_1d(np.asarray(beta, dtype=np.float64)), v_weights(n, k))
    return complex(out[0]) if scalar else out


def v_decay_ratio(beta: float, n: int, k: int) -> float:
    """|v(beta)| / (n^{1/k} (1 + n ||beta||)^{-1/k})."""
    dist = abs(beta - round(beta))
    return abs(v_sum(beta, n, k)) / (n ** (1.0 / k) * (1.0 + n * dist) ** (-1.0 / k))


# --------------------------------------------------------------------------
# arcs
# --------------------------------------------------------------------------

def convergents(alpha: Fraction):
    """Yield the continued-fraction convergents (p, q) of a rational alpha."""
    num, den = alpha.numerator, alpha.denominator
    p0, q0, p1, q1 = 0, 1, 1, 0
    while den:
        a, rem = divmod(num, den)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        num, den = den, rem


def best_approximation(alpha: Fraction, Q2) -> tuple[int, int]:
    """(a, q) with q <= sqrt(Q2) minimising |q alpha - a|.

    This is the last convergent with q <= Q: every q below the next
    convergent denominator gives a worse ||q alpha||.
    """
    best = (0, 1)
    for p, q in convergents(alpha):
        if q * q > Q2:
            break
        best = (p, q)
    return best


def _q_squared(P: int, k: int, Q) -> Fraction:
    full = Fraction(P) ** k
    if Q is None:
        return full
    Q = Fraction(Q)
    if Q < 1 or Q * Q > full:
        raise ValueError(f"Q must lie in [1, P^(k/2)], got {float(Q)}")
    return Q * Q


@dataclass(frozen=True)
class ArcLabel:
    kind: str  # "major" or "minor"
    Q: float
    q: int
    a: int
    alpha: Fraction

    @property
    def is_major(self) -> bool:
        return self.kind == "major"


def _major_predicate(alpha: Fraction, q: int, a: int, P: int, k: int, Q2: Fraction) -> bool:
    dev = abs(q * alpha - a) * Fraction(P) ** k
    return math.gcd(a, q) == 1 and q * q <= Q2 and dev * dev <= Q2


def classify_arc(alpha, P: int, k: int, Q=None) -> ArcLabel:
    """Major with witness (q, a) when |q alpha - a| <= Q P^{-k} for some q <= Q.

    Q defaults to P^{k/2}.  All comparisons are exact, using Q**2.
    """
    frac = parse_alpha(alpha)
    Q2 = _q_squared(P, k, Q)
    a, q = best_approximation(frac, Q2)
    major = _major_predicate(frac, q, a, P, k, Q2)
    return ArcLabel("major" if major else "minor", math.sqrt(Q2), q, a, frac)


def verify_witness(label: ArcLabel, P: int, k: int, Q=None) -> bool:
    """Re-check a major-arc witness against the defining inequalities, exactly."""
    if not label.is_major:
        return True
    Q2 = _q_squared(P, k, Q)
    return 0 <= label.a <= label.q and _major_predicate(label.alpha, label.q, label.a, P, k, Q2)


@dataclass(frozen=True)
class ArcPoint:
    alpha: Fraction
    q: int
    a: int
    P: int
    k: int
    lam: Fraction

    @property
    def lambda_float(self) -> float:
        return float(self.lam)


def lambda_height(alpha, P: int, k: int) -> ArcPoint:
    """Dirichlet approximation with q <= P^{k/2}, and lambda = q + P^k |q alpha - a|."""
    frac = parse_alpha(alpha)
    a, q = best_approximation(frac, Fraction(P) ** k)
    lam = q + Fraction(P) ** k * abs(q * frac - a)
    return ArcPoint(frac, q, a, P, k, lam)


def weyl_envelope(lam: float, P: int, k: int) -> float:
    return P * (1.0 / lam + lam * float(P) ** -k) ** omega(k)


def weyl_bound_ratio(alpha, P: int, R: int, k: int) -> float:
    """|f(alpha; P, R)| / (P (1/lambda + lambda P^{-k})^{omega(k)}), a diagnostic."""
    pt = lambda_height(alpha, P, k)
    return abs(smooth_weyl_sum(pt.alpha, P, R, k).value) / weyl_envelope(pt.lambda_float, P, k)


@dataclass
class ScanRow:
    alpha_num: int
    alpha_den: int
    q: int
    a: int
    lam: float
    abs_f: float
    envelope: float
    ratio: float

    CSV_HEADER = ("alpha_num", "alpha_den", "q", "a", "lambda", "abs_f", "envelope", "ratio")

    def csv_row(self) -> tuple:
        return (self.alpha_num, self.alpha_den, self.q, self.a,
                repr(self.lam), repr(self.abs_f), repr(self.envelope), repr(self.ratio))


@dataclass
class MinorArcScan:
    P: int
    R: int
    k: int
    Q: float
    seed: int
    vacuous: bool
    rows: list
    max_abs_f: float | None
    bound: float
    ratio: float | None

    def summary(self) -> dict:
        return {
            "P": self.P, "R": self.R, "k": self.k, "Q": self.Q, "seed": self.seed,
            "samples": len(self.rows), "vacuous": self.vacuous,
            "max_abs_f": self.max_abs_f, "bound": self.bound, "ratio": self.ratio,
        }


def sample_alpha(seed: int, i: int) -> Fraction:
    rng = np.random.default_rng([seed, i])
    return Fraction(int(rng.integers(0, ALPHA_DENOMINATOR)), ALPHA_DENOMINATOR)


def _sample_minor(seed: int, i: int, P: int, k: int, Q2: Fraction, max_tries: int) -> Fraction:
    rng = np.random.default_rng([seed, i])
    for _ in range(max_tries):
        alpha = Fraction(int(rng.integers(0, ALPHA_DENOMINATOR)), ALPHA_DENOMINATOR)
        a, q = best_approximation(alpha, Q2)
        if not _major_predicate(alpha, q, a, P, k, Q2):
            return alpha
    raise RuntimeError(f"no minor-arc point found for sample {i} after {max_tries} draws")


def minor_arc_sup_scan(P: int, R: int, k: int, Q=None, n_samples: int = 200, seed: int = 0,
                       max_tries: int = SCAN_MAX_TRIES) -> MinorArcScan:
    """Seeded rejection sample of minor-arc points; max |f| against P Q^{-omega}.

    Sample i draws from ``default_rng([seed, i])``, so results do not depend
    on evaluation order.
    """
    Q2 = _q_squared(P, k, Q)
    Qf = math.sqrt(Q2)
    bound = P * Qf ** -omega(k)
    if Q2 >= Fraction(P) ** k:
        return MinorArcScan(P, R, k, Qf, seed, True, [], None, bound, None)
    members = cached_smooth_set(P, R).members
    rows = []
    for i in range(n_samples):
        alpha = _sample_minor(seed, i, P, k, Q2, max_tries)
        pt = lambda_height(alpha, P, k)
        f = abs(weyl_sum_members(alpha, members, k).value)
        rows.append(ScanRow(alpha.numerator, alpha.denominator, pt.q, pt.a, pt.lambda_float,
                            f, bound, f / bound))
    top = max((r.abs_f for r in rows), default=None)
    return MinorArcScan(P, R, k, Qf, seed, False, rows, top,
                        bound, None if top is None else top / bound)


@dataclass
class RatioTrend:
    k: int
    Ps: tuple
    max_ratios: tuple
    slope: float


def ratio_trend(k: int = 2, Ps=TREND_PS, n_samples: int = 200, seed: int = 0, eta: float = 1.0) -> RatioTrend:
    """Slope of log max weyl_bound_ratio against log P, same alpha sample at each P."""
    alphas = [sample_alpha(seed, i) for i in range(n_samples)]
    maxima = []
    for P in Ps:
        R = P if eta == 1 else max(2, int(P**eta))
        members = cached_smooth_set(P, R).members
        best = 0.0
        for alpha in alphas:
            pt = lambda_height(alpha, P, k)
            f = abs(weyl_sum_members(alpha, members, k).value)
            best = max(best, f / weyl_envelope(pt.lambda_float, P, k))
        maxima.append(best)
    slope = float(np.polyfit(np.log(Ps), np.log(maxima), 1)[0])
    return RatioTrend(k, tuple(Ps), tuple(maxima), slope)


def mean_value_table(P: int, R: int, k: int, moments=(2, 4, 6), n_points: int = 4096) -> list[dict]:
    """Diagnostic: int_0^1 |f|^s by an n_points rectangle rule, beside P^{s-k}.

    Not exact unless n_points exceeds the degree P^k; implied constants are
    unknown, so nothing here is asserted.
    """
    members = cached_smooth_set(P, R).members
    vals = np.array([abs(weyl_sum_members(Fraction(j, n_points), members, k).value)
                     for j in range(n_points)])
    out = []
    for s in moments:
        integral = float(np.mean(vals**s))
        scale = float(P) ** max(s - k, s / 2)
        out.append({"s": s, "integral": integral, "scale": scale, "ratio": integral / scale})
    return out
