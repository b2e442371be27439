from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from mixedwaring.exponents import (
    TAU_C,
    WEYL_D,
    AdmissibleFamily,
    admissible_delta,
    constant_checks,
    default_family,
    delta_residual,
    delta_star,
    omega,
    tau,
    tau_search,
)


def test_tau_hua_values():
    assert tau_search(2, "hua") == (Fraction(1, 8), 2)
    assert tau_search(3, "hua") == (Fraction(3, 64), 4)


def test_tau_eq42_meets_floor():
    t = tau(4, "eq42")
    assert t >= 1 / (TAU_C * 4)


@pytest.mark.parametrize("k", range(2, 65))
def test_tau_upper_bound(k):
    fams = ["eq42"] + (["hua"] if k <= 12 else [])
    for fam in fams:
        assert tau(k, fam) <= Fraction(1, 4 * k)


@pytest.mark.parametrize("k", range(2, 30))
def test_omega_below_two_tau_over_k(k):
    assert omega(k) < 2 * float(tau(k, default_family(k))) / k


@pytest.mark.parametrize("k", range(2, 13))
def test_delta_grid(k):
    assert admissible_delta(k, 0) == float(k)
    vs = np.linspace(0, 10 * k, 21 * k)
    vals = [admissible_delta(k, v) for v in vs]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    for v, d in zip(vs, vals):
        assert delta_residual(k, v, d) < 1e-12
        assert max(0.0, k - v / 2) - 1e-12 <= d <= k


def test_delta_examples():
    assert admissible_delta(4, 8) == pytest.approx(1.1138581710442952, abs=1e-12)
    assert admissible_delta(2, 100) < 1e-9


def test_hua_endpoint():
    fam = AdmissibleFamily(3, "hua")
    assert fam.delta(8) == 0
    assert fam.delta(0) == 3


def test_delta_star_examples():
    assert delta_star(2, 20, "hua") <= -2
    # s = u + t k with Delta_u = 0 gives -t k tau(k)
    assert delta_star(2, 4 + 3 * 2, "hua") == -3 * 2 * tau(2, "hua")
    assert delta_star(5, 2) == admissible_delta(5, 2)


@pytest.mark.parametrize("k, s", [(3, 7.5), (4, 12), (6, 30), (2, 9)])
def test_delta_star_below_delta(k, s):
    fam = default_family(k)
    val = fam.delta(Fraction(s) if fam.exact else s)
    assert delta_star(k, Fraction(s) if fam.exact else s) <= val


@pytest.mark.parametrize("k, expected", [(2, 1 / 18.05584), (3, 1 / 40.62564), (10, 1 / 451.396)])
def test_omega_values(k, expected):
    assert omega(k) == pytest.approx(expected, rel=1e-12)
    assert omega(k) * WEYL_D * k * k == pytest.approx(1.0, abs=1e-12)


def test_constant_checks():
    checks = constant_checks()
    assert all(c.ok for c in checks)
    first = checks[0]
    assert first.lhs == pytest.approx(2 * math.e * WEYL_D)
    assert first.lhs == pytest.approx(24.5404309, abs=1e-6)
    r2 = next(c for c in checks if c.name.startswith("2^(1+1/2)"))
    assert r2.lhs == pytest.approx(34.70, abs=1e-2)


def test_bad_inputs():
    with pytest.raises(ValueError):
        admissible_delta(1, 2)
    with pytest.raises(ValueError):
        AdmissibleFamily(3, "other")
    with pytest.raises(ValueError):
        delta_star(3, 1)
