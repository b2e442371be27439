from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixedwaring import weyl
from mixedwaring.smooth import sieve_smooth


def direct_sum(alpha: Fraction, members, k):
    return sum(cmath.exp(2j * math.pi * float((alpha * x**k) % 1)) for x in members)


def test_alpha_zero():
    v = weyl.smooth_weyl_sum(0, 100, 7, 3)
    assert v.value == complex(sieve_smooth(100, 7).cardinality, 0)


@pytest.mark.parametrize("P", [10, 11, 100, 101])
def test_alpha_half(P):
    v = weyl.smooth_weyl_sum("1/2", P, P, 2).value
    assert v.real == pytest.approx(-(P % 2), abs=1e-12)
    assert abs(v.imag) < 1e-9


def test_third_against_oracle(each_backend):
    v = weyl.smooth_weyl_sum(Fraction(1, 3), 100, 100, 2).value
    ref = direct_sum(Fraction(1, 3), range(1, 101), 2)
    assert abs(v - ref) < 1e-9


def test_huge_denominator_path():
    alpha = Fraction(123456789123, 10**13 + 7)
    members = sieve_smooth(300, 30).members
    v = weyl.weyl_sum_members(alpha, members, 3).value
    assert abs(v - direct_sum(alpha, members.tolist(), 3)) < 1e-9


def test_float_alpha_exact():
    a = weyl.parse_alpha(0.1)
    assert a == Fraction(0.1)
    assert weyl.parse_alpha("-1/3") == Fraction(2, 3)
    assert weyl.parse_alpha("1.25") == Fraction(1, 4)
    assert weyl.canonical_alpha(0.1) == Fraction(1, 10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9 - 1), st.integers(2, 4))
def test_periodicity_and_conjugation(num, k):
    alpha = Fraction(num, 10**9)
    members = sieve_smooth(200, 50).members
    f = weyl.weyl_sum_members(alpha, members, k).value
    assert abs(weyl.weyl_sum_members(alpha + 1, members, k).value - f) < 1e-9
    assert abs(weyl.weyl_sum_members(-alpha, members, k).value - f.conjugate()) < 1e-9
    assert abs(f) <= members.size + 1e-9


def test_complete_sum_examples():
    assert weyl.complete_sum(1, 5, 3) == 1
    assert abs(weyl.complete_sum(4, 1, 2) - (2 + 2j)) < 1e-12


PRIMES = [p for p in range(3, 98) if all(p % d for d in range(2, p))]


@pytest.mark.parametrize("q", PRIMES)
def test_gauss_magnitude(q):
    for a in range(1, q):
        assert abs(abs(weyl.complete_sum(q, a, 2)) - math.sqrt(q)) < 1e-9


@pytest.mark.parametrize("q, a, k", [(12, 5, 3), (30, 7, 2), (16, 3, 4), (9, 2, 3)])
def test_complete_sum_properties(q, a, k):
    s = weyl.complete_sum(q, a, k)
    brute = sum(cmath.exp(2j * math.pi * (a * t**k % q) / q) for t in range(1, q + 1))
    assert abs(s - brute) < 1e-9
    assert abs(s) <= q + 1e-9
    assert abs(weyl.complete_sum(q, a + q, k) - s) < 1e-12
    assert abs(weyl.complete_sums_all(q, k)[a] - s) < 1e-9


def test_v_sum_at_zero():
    v = weyl.v_sum(0.0, 10**4, 2)
    assert v.imag == 0
    assert 99 <= v.real <= 101


def test_v_sum_oracle_and_bound():
    n, k, beta = 10**3, 3, 0.3
    m = np.arange(1, n + 1)
    ref = np.sum(m ** (-1 + 1 / k) / k * np.exp(2j * np.pi * beta * m))
    v = weyl.v_sum(beta, n, k)
    assert abs(v - ref) < 1e-9
    assert abs(v) <= weyl.v_sum(0.0, n, k).real
    assert weyl.v_decay_ratio(beta, n, k) > 0


def test_v_sum_array():
    out = weyl.v_sum(np.array([0.0, 0.1, 0.2]), 500, 2)
    assert out.shape == (3,)
    assert np.all(np.abs(out) <= out[0].real + 1e-12)


def test_classify_rational():
    lab = weyl.classify_arc(Fraction(3, 7), 100, 2, 10)
    assert lab.is_major and (lab.q, lab.a) == (7, 3)
    assert weyl.verify_witness(lab, 100, 2, 10)


def test_classify_golden_minor():
    alpha = math.sqrt(5) % 1
    assert not weyl.classify_arc(alpha, 100, 2, 3).is_major


def test_classify_rejects_bad_q():
    with pytest.raises(ValueError):
        weyl.classify_arc(0.3, 10, 2, 11)
    with pytest.raises(ValueError):
        weyl.classify_arc(0.3, 10, 2, 0.5)


def test_dirichlet_completeness_small():
    rng = np.random.default_rng(11)
    for _ in range(500):
        alpha = float(rng.random())
        lab = weyl.classify_arc(alpha, 50, 3)
        assert lab.is_major and weyl.verify_witness(lab, 50, 3)


def test_lambda_height_examples():
    pt = weyl.lambda_height("1/3", 10, 2)
    assert (pt.q, pt.a, pt.lam) == (3, 1, 3)
    pt0 = weyl.lambda_height(0, 10, 2)
    assert (pt0.q, pt0.a, pt0.lam) == (1, 0, 1)


def test_lambda_height_pi_exhaustive():
    alpha = Fraction(math.pi % 1)
    pt = weyl.lambda_height(alpha, 100, 2)
    best_q = min(range(1, 101), key=lambda q: abs(q * alpha - round(q * alpha)))
    assert pt.q == best_q == 7
    assert abs(pt.q * alpha - pt.a) <= Fraction(1, 100)


def test_bound_ratio_at_zero():
    r = weyl.weyl_bound_ratio(0, 200, 20, 2)
    assert 0 < r <= 1


def test_scan_vacuous_and_minor():
    assert weyl.minor_arc_sup_scan(100, 100, 2, None, 5, 0).vacuous
    scan = weyl.minor_arc_sup_scan(300, 300, 2, 30, 20, 4)
    assert not scan.vacuous and len(scan.rows) == 20
    for row in scan.rows:
        lab = weyl.classify_arc(Fraction(row.alpha_num, row.alpha_den), 300, 2, 30)
        assert not lab.is_major
        assert row.ratio == pytest.approx(row.abs_f / row.envelope)


def test_scan_deterministic():
    a = weyl.minor_arc_sup_scan(200, 200, 2, 20, 10, 9)
    b = weyl.minor_arc_sup_scan(200, 200, 2, 20, 10, 9)
    assert [r.csv_row() for r in a.rows] == [r.csv_row() for r in b.rows]


def test_ratio_trend_small():
    tr = weyl.ratio_trend(2, (100, 200, 400), n_samples=30, seed=1)
    assert len(tr.max_ratios) == 3
    assert math.isfinite(tr.slope)


def test_mean_value_table():
    rows = weyl.mean_value_table(60, 60, 2, moments=(2, 4), n_points=4096)
    # 4096 > 60^2 points integrate |f|^2 exactly: it counts the x
    assert rows[0]["integral"] == pytest.approx(60, rel=1e-9)
