"""Acceptance criteria A1-A9.

Each criterion prints exactly one ``A<i> PASS|FAIL`` line with its measured
quantities and runtime.  Run directly (``python tests/test_acceptance.py``)
for the summary alone.
"""
from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from mixedwaring import exponents as ex
from mixedwaring import local_density as ld
from mixedwaring import representations as rp
from mixedwaring import thresholds as th
from mixedwaring import weyl
from mixedwaring.main_term import gamma_main_term, j_truncated

CRITERIA: dict[str, tuple] = {}


def criterion(cid: str, limit: float):
    def register(fn):
        CRITERIA[cid] = (fn, limit)
        return fn

    return register


@criterion("A1", 1.0)
def a1():
    t2, t3 = ex.tau(2, "hua"), ex.tau(3, "hua")
    omega_err = max(abs(ex.omega(k) * ex.WEYL_D * k * k - 1) for k in range(2, 65))
    checks = ex.constant_checks(64)
    ok = t2 == Fraction(1, 8) and t3 == Fraction(3, 64) and omega_err <= 1e-12 and all(c.ok for c in checks)
    return ok, f"tau2={t2} tau3={t3} max|omega*D*k^2-1|={omega_err:.1e} constants={len(checks)} ok"


@criterion("A2", 1.0)
def a2():
    exact_zero = all(ex.admissible_delta(k, 0) == float(k) for k in range(2, 13))
    worst_res, monotone = 0.0, True
    for k in range(2, 13):
        vs = np.linspace(0.0, 10.0 * k, 200)
        vals = [ex.admissible_delta(k, v) for v in vs]
        worst_res = max(worst_res, max(ex.delta_residual(k, v, d) for v, d in zip(vs, vals)))
        monotone &= all(a > b for a, b in zip(vals, vals[1:]))
    ok = exact_zero and worst_res < 1e-12 and monotone
    return ok, f"Delta_0=k:{exact_zero} max residual={worst_res:.1e} strictly decreasing:{monotone}"


@criterion("A3", 1.0)
def a3():
    cor = th.cor12_min_s(1, th.constant_sequence(2))
    thm = th.thm11_min_s(th.constant_sequence(2))
    cor14 = all(th.thm13_bound(k, 1) == 100 * (k + 1) ** 2 for k in range(2, 51))
    b21, b22 = th.thm13_bound(2, 1), th.thm13_bound(2, 2)
    ok = (cor.min_s == 13 and thm.min_s == 13 and cor.fails_below and thm.fails_below
          and b21 == 900 and cor14 and b22 == 18**4 == 104976)
    return ok, (f"cor12={cor.min_s} thm11={thm.min_s} fails@s-1:{cor.fails_below and thm.fails_below} "
                f"thm13(2,1)={b21} =100(k+1)^2 for k<=50:{cor14} thm13(2,2)={b22}")


@criterion("A4", 30.0)
def a4():
    ks = (2, 3, 4)
    s = len(ks)
    ladder = True
    for n in range(11):
        for p in (2, 3, 5):
            for V in range(4):
                lhs = sum((Fraction(ld.u_prime_power(ks, n, p, j), p ** (s * j)) for j in range(V + 1)),
                          Fraction(0))
                ladder &= lhs == Fraction(ld.count_congruence(ks, n, p, V), p ** ((s - 1) * V))
    mult = True
    for n in range(11):
        for q1 in range(1, 61):
            for q2 in range(1, 60 // q1 + 1):
                if math.gcd(q1, q2) == 1:
                    mult &= ld.u_n_exact(ks, n, q1 * q2) == ld.u_n_exact(ks, n, q1) * ld.u_n_exact(ks, n, q2)
    worst = 0.0
    for n in range(11):
        for q in range(1, 201):
            worst = max(worst, abs(ld.u_n_complex(ks, n, q) - ld.u_n_exact(ks, n, q)))
    ok = ladder and mult and worst <= 1e-6
    return ok, f"ladder exact:{ladder} multiplicative:{mult} max dual-route gap={worst:.1e}"


@criterion("A5", 1.0)
def a5():
    worst = 0.0
    primes = [p for p in range(3, 98) if all(p % d for d in range(2, p))]
    for q in primes:
        for a in range(1, q):
            worst = max(worst, abs(abs(weyl.complete_sum(q, a, 2)) - math.sqrt(q)))
    return worst <= 1e-9, f"max ||S(q,a)|-sqrt(q)|={worst:.1e} over {len(primes)} primes"


@criterion("A6", 60.0)
def a6():
    stats = rp.empirical_vs_prediction((2,) * 5, 50_000, 51_000, 100)
    ok = 0.9 <= stats.mean <= 1.1 and stats.min > 0
    return ok, f"mean={stats.mean:.5f} median={stats.median:.5f} min={stats.min:.5f}"


@criterion("A7", 30.0)
def a7():
    ks = (2, 3, 4)
    window = rp.count_window(ks, 1, 2001)
    agree = all(
        rp.count_representations(ks, n, method="naive").count
        == rp.count_representations(ks, n, method="mitm").count
        == window.count(n)
        for n in range(1, 2001)
    )
    exc = rp.exceptional_scan((2,) * 5, 10**4)
    ok = agree and exc.largest == 33 and len(exc.zero_set) == 12
    return ok, f"methods agree n<=2000:{agree} largest zero={exc.largest} size={len(exc.zero_set)}"


@criterion("A8", 120.0)
def a8():
    complete = True
    for k, P in ((2, 1000), (3, 100)):
        rng = np.random.default_rng(20240 + k)
        for alpha in rng.random(10_000):
            label = weyl.classify_arc(float(alpha), P, k)
            complete &= label.is_major and weyl.verify_witness(label, P, k)
    trend = weyl.ratio_trend(2, weyl.TREND_PS, n_samples=200, seed=0)
    ok = complete and trend.slope <= 0.05
    return ok, f"Dirichlet complete (2x10^4 alphas):{complete} ratio slope={trend.slope:.4f}"


@criterion("A9", 60.0)
def a9():
    ks, n = (2,) * 5, 10**4
    gamma = gamma_main_term(ks, n)
    j50, j200 = j_truncated(ks, n, 50), j_truncated(ks, n, 200)
    gap50, gap200 = abs(j50.value.real - gamma), abs(j200.value.real - gamma)
    within = gap50 / gamma <= 0.05
    improving = gap200 < gap50
    imag = max(abs(j.value.imag) / abs(j.value.real) for j in (j50, j200))
    pi4 = abs(gamma_main_term((2, 2), 1) - math.pi / 4)
    ok = within and improving and imag < 1e-3 and pi4 <= 1e-12
    return ok, (f"J(X=50)={j50.value.real:.2f} Gamma-term={gamma:.2f} rel gap={gap50 / gamma:.4%} "
                f"(<=5%:{within}) gap X=200 {gap200:.2f} vs X=50 {gap50:.2f} (improving:{improving}) "
                f"imag/real={imag:.1e} |Gamma(3/2)^2-pi/4|={pi4:.1e}")


def evaluate(cid: str) -> tuple[bool, str]:
    fn, limit = CRITERIA[cid]
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    timely = elapsed < limit
    status = "PASS" if ok and timely else "FAIL"
    return ok and timely, f"{cid} {status} {detail} [runtime {elapsed:.2f}s, limit {limit:g}s]"


@pytest.mark.parametrize("cid", list(CRITERIA))
def test_acceptance(cid, capsys):
    ok, line = evaluate(cid)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    for cid in CRITERIA:
        print(evaluate(cid)[1])
