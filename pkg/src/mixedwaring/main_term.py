"""Singular integral: the Gamma-function main term, the truncated integral J(n; X),
and the assembled prediction for the number of representations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import ExponentSequence, box_sizes, smoothness_bound
from .errors import IntegrityError
from .local_density import singular_series
from .smooth import smooth_density
from .weyl import v_sum

QUAD_PANELS = 200
QUAD_RTOL = 1e-4
MAX_DOUBLINGS = 10
SYMMETRY_TOL = 1e-9


def gamma_product(ks) -> float:
    """prod Gamma(1 + 1/k_i) / Gamma(theta)."""
    ks = ExponentSequence.coerce(ks)
    return math.exp(math.fsum(math.lgamma(1 + 1 / k) for k in ks) - math.lgamma(float(ks.theta)))


def gamma_main_term(ks, n: int) -> float:
    """prod Gamma(1 + 1/k_i) / Gamma(theta) * n^{theta - 1}."""
    ks = ExponentSequence.coerce(ks)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    theta = float(ks.theta)
    log_val = (math.fsum(math.lgamma(1 + 1 / k) for k in ks) - math.lgamma(theta)
               + (theta - 1) * math.log(n))
    return math.exp(log_val)


def _integrand(ks: ExponentSequence, n: int, betas: np.ndarray) -> np.ndarray:
    out = np.exp(-2j * np.pi * betas * n)
    for k, mult in ks.distinct().items():
        out *= v_sum(betas, n, k) ** mult
    return out


@dataclass
class JResult:
    value: complex
    n: int
    X: float
    panels: int
    converged: bool
    symmetry_error: float
    trace: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "real": self.value.real,
            "imag": self.value.imag,
            "n": self.n,
            "X": self.X,
            "panels": self.panels,
            "converged": self.converged,
            "symmetry_error": self.symmetry_error,
            "trace": [{"panels": p, "estimate": e} for p, e in self.trace],
        }


def _simpson(vals: np.ndarray, h: float) -> complex:
    return h / 3 * (vals[0] + vals[-1] + 4 * vals[1:-1:2].sum() + 2 * vals[2:-1:2].sum())


def j_truncated(ks, n: int, X: float, quad_points: int = QUAD_PANELS,
                rtol: float = QUAD_RTOL, max_doublings: int = MAX_DOUBLINGS) -> JResult:
    """J(n; X) = int_{-X/n}^{X/n} v_1(b)...v_s(b) e(-bn) db by composite Simpson.

    Nodes are evaluated at +b and -b; the integrand there must be complex
    conjugate, which is checked.  The panel count doubles (reusing nodes)
    until successive estimates agree to ``rtol``.
    """
    ks = ExponentSequence.coerce(ks)
    if X < 1:
        raise ValueError(f"X must be >= 1, got {X}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    panels = max(2, int(quad_points) + int(quad_points) % 2)
    b = X / n
    nodes = np.linspace(0.0, b, panels + 1)
    pos = _integrand(ks, n, nodes)
    neg = _integrand(ks, n, -nodes)
    scale = max(1.0, float(np.max(np.abs(pos))))
    sym_err = float(np.max(np.abs(neg - np.conj(pos)))) / scale
    trace = []
    prev = None
    converged = False
    for _ in range(max_doublings + 1):
        h = b / panels
        est = _simpson(pos + neg, h)
        trace.append((panels, complex(est)))
        if prev is not None and abs(est - prev) <= rtol * abs(est):
            converged = True
            break
        prev = est
        mids = nodes[:-1] + h / 2
        new_pos = _integrand(ks, n, mids)
        new_neg = _integrand(ks, n, -mids)
        sym_err = max(sym_err, float(np.max(np.abs(new_neg - np.conj(new_pos)))) / scale)
        nodes = _interleave(nodes, mids)
        pos, neg = _interleave(pos, new_pos), _interleave(neg, new_neg)
        panels *= 2
    if sym_err > SYMMETRY_TOL:
        raise IntegrityError(f"integrand is not conjugate-symmetric (relative error {sym_err:.3g})")
    return JResult(complex(est), n, float(X), panels, converged, sym_err,
                   [(p, str(e)) for p, e in trace])


def _interleave(a: np.ndarray, mids: np.ndarray) -> np.ndarray:
    out = np.empty(a.size + mids.size, dtype=a.dtype)
    out[0::2] = a
    out[1::2] = mids
    return out


@dataclass
class Prediction:
    ks: tuple[int, ...]
    n: int
    X: int
    eta: float
    gamma_product: float
    sigma: float
    c_power: float
    theta: Fraction

    @property
    def main_term(self) -> float:
        return self.gamma_product * self.sigma * self.c_power * self.n ** (float(self.theta) - 1)

    def to_dict(self) -> dict:
        return {
            "ks": list(self.ks),
            "n": self.n,
            "X": self.X,
            "eta": self.eta,
            "gamma_product": self.gamma_product,
            "sigma": self.sigma,
            "c_power": self.c_power,
            "theta": str(self.theta),
            "main_term": self.main_term,
        }


def c_power(ks, n: int, eta: float) -> float:
    """prod_i |A(P_i, P_i^eta)| / P_i; exactly 1 when eta = 1."""
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if eta == 1:
        return 1.0
    out = 1.0
    for P in box_sizes(ks, n):
        R = smoothness_bound(P, eta)
        out *= smooth_density(P, R) if R >= 2 else 1.0 / P
    return out


def predict_count(ks, n: int, X: int, eta: float = 1.0, sigma: float | None = None) -> Prediction:
    """c^s Gamma(theta)^{-1} prod Gamma(1 + 1/k_i) S(n; X) n^{theta - 1}."""
    ks = ExponentSequence.coerce(ks)
    if sigma is None:
        sigma = singular_series(ks, n, X).value
    return Prediction(ks.ks, n, int(X), eta, gamma_product(ks), sigma, c_power(ks, n, eta), ks.theta)
