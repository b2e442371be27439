"""Congruence counts M_n(p^nu), the sums U_n(q), Euler factors and the singular series.

U_n(q) is computed two ways.  The exact route uses the orthogonality ladder

    p^{-s V} U_n(p^V) = p^{(1-s)V} M_n(p^V) - p^{(1-s)(V-1)} M_n(p^{V-1})

on prime powers and multiplicativity in q.  The complex route sums products
of complete exponential sums.  The two must agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .core import ExponentSequence
from .errors import IntegrityError, ResourceLimitError
from .smooth import primes_up_to
from .weyl import complete_sums_all

MODULUS_CAP = 10**5
STABLE_RTOL = 1e-3
DEFAULT_PCUT = 13
INT64_MAX = 2**63 - 1


def _ks(ks) -> tuple[int, ...]:
    return ExponentSequence.coerce(ks).ks


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def factorize(q: int) -> dict[int, int]:
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= q:
        while q % d == 0:
            out[d] = out.get(d, 0) + 1
            q //= d
        d += 1
    if q > 1:
        out[q] = out.get(q, 0) + 1
    return out


def p_adic_valuation(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def tau_p(p: int) -> int:
    return 2 if p == 2 else 1


@lru_cache(maxsize=512)
def residue_distribution(ks: tuple[int, ...], m: int) -> np.ndarray:
    """dist[r] = #{(x_1..x_s) mod m : sum x_i^{k_i} = r mod m}.

    One power-residue histogram per variable, folded by cyclic convolution.
    int64 while m^s fits, exact Python integers beyond.
    """
    hists = {k: kernels.power_residue_histogram(k, m) for k in set(ks)}
    exact = m ** len(ks) > INT64_MAX
    dist = np.zeros(m, dtype=object if exact else np.int64)
    dist[0] = 1
    for k in ks:
        h = hists[k].astype(object) if exact else hists[k]
        dist = kernels.cyclic_convolve(dist, h)
    dist.setflags(write=False)
    return dist


def count_congruence(ks, n: int, p: int, nu: int, cap: int = MODULUS_CAP) -> int:
    """M_n(p^nu), the number of solutions of sum x_i^{k_i} = n mod p^nu."""
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if nu < 0:
        raise ValueError(f"nu must be >= 0, got {nu}")
    m = p**nu
    if m > cap:
        raise ResourceLimitError(f"modulus {p}^{nu} = {m} exceeds cap {cap}")
    if m == 1:
        return 1
    return int(residue_distribution(_ks(ks), m)[n % m])


@lru_cache(maxsize=1 << 16)
def _u_prime_power(ks: tuple[int, ...], n_mod: int, p: int, V: int, cap: int) -> int:
    if V == 0:
        return 1
    s = len(ks)
    hi = count_congruence(ks, n_mod, p, V, cap)
    lo = count_congruence(ks, n_mod, p, V - 1, cap)
    return p**V * hi - p ** (s + V - 1) * lo


def u_prime_power(ks, n: int, p: int, V: int, cap: int = MODULUS_CAP) -> int:
    return _u_prime_power(_ks(ks), n % p**V, p, V, cap)


def u_n_exact(ks, n: int, q: int, cap: int = MODULUS_CAP) -> int:
    """U_n(q) from the M-ladder on each prime power, multiplied out."""
    ks = _ks(ks)
    out = 1
    for p, e in factorize(q).items():
        out *= _u_prime_power(ks, n % p**e, p, e, cap)
        if out == 0:
            break
    return out


@lru_cache(maxsize=1024)
def _product_sums(ks: tuple[int, ...], q: int) -> np.ndarray:
    prod = np.ones(q, dtype=np.complex128)
    for k, mult in ExponentSequence(ks).distinct().items():
        prod *= complete_sums_all(q, k) ** mult
    return prod


def u_n_complex(ks, n: int, q: int) -> complex:
    """sum over a coprime to q of prod_i S_i(q, a) e(-n a / q)."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    ks = _ks(ks)
    a = np.arange(q)
    units = np.gcd(a, q) == 1
    twist = np.exp(-2j * np.pi * ((n % q) * a[units] % q) / q)
    return complex(np.sum(_product_sums(ks, q)[units] * twist))


def dual_tolerance(q: int, s: int) -> float:
    return 1e-6 * q ** (s / 2 + 1)


def u_n(ks, n: int, q: int, check: bool = True) -> int:
    """Exact U_n(q); with ``check`` the complex route must round to the same integer."""
    ks = _ks(ks)
    exact = u_n_exact(ks, n, q)
    if check:
        approx = u_n_complex(ks, n, q)
        tol = dual_tolerance(q, len(ks))
        if abs(approx - exact) > tol:
            raise IntegrityError(
                f"U_n(q) routes disagree for ks={list(ks)}, n={n}, q={q}: exact {exact}, complex {approx}"
            )
    return exact


# --------------------------------------------------------------------------
# Euler factors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderRow:
    nu: int
    M: int
    normalized: Fraction  # p^{(1-s) nu} M_n(p^nu)
    U: int
    partial: Fraction  # sum_{j <= nu} p^{-s j} U_n(p^j)

    @property
    def ladder_ok(self) -> bool:
        return self.partial == self.normalized


@dataclass
class LocalFactorTable:
    p: int
    ks: tuple[int, ...]
    n: int
    rows: list[LadderRow]
    lam: int
    tau: int

    @property
    def chi_p(self) -> Fraction:
        return self.rows[-1].normalized

    @property
    def stabilized(self) -> bool:
        if len(self.rows) < 2:
            return False
        last, prev = float(self.rows[-1].normalized), float(self.rows[-2].normalized)
        if last == 0:
            return prev == 0
        return abs(last - prev) / abs(last) < STABLE_RTOL

    @property
    def tail_start(self) -> int:
        """Least nu after which every U_n(p^j) in the table vanishes."""
        idx = 0
        for row in self.rows:
            if row.U != 0:
                idx = row.nu
        return idx

    @property
    def ladder_ok(self) -> bool:
        return all(r.ladder_ok for r in self.rows)

    @property
    def lower_bound(self) -> Fraction:
        return Fraction(1, self.p ** ((self.lam + self.tau) * (len(self.ks) - 1)))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "lambda": self.lam,
            "tau": self.tau,
            "chi_p": str(self.chi_p),
            "chi_p_float": float(self.chi_p),
            "stabilized": self.stabilized,
            "tail_start": self.tail_start,
            "ladder_ok": self.ladder_ok,
            "rows": [
                {"nu": r.nu, "M": r.M, "normalized": str(r.normalized), "U": r.U, "partial": str(r.partial)}
                for r in self.rows
            ],
        }


def euler_factor(ks, n: int, p: int, nu_max: int | None = None, cap: int = MODULUS_CAP) -> LocalFactorTable:
    """Ladder rows nu = 0..nu_max.  Default nu_max is lambda + tau + 2."""
    ks = _ks(ks)
    if len(ks) < 2:
        raise ValueError("Euler factors need s >= 2")
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    lam = p_adic_valuation(math.gcd(*ks), p)
    tau = tau_p(p)
    if nu_max is None:
        nu_max = lam + tau + 2
        while nu_max > lam + tau and p**nu_max > cap:
            nu_max -= 1
    s = len(ks)
    rows = []
    partial = Fraction(0)
    for nu in range(nu_max + 1):
        M = count_congruence(ks, n, p, nu, cap)
        U = u_prime_power(ks, n, p, nu, cap)
        partial += Fraction(U, p ** (s * nu))
        rows.append(LadderRow(nu, M, Fraction(M, p ** ((s - 1) * nu)), U, partial))
    table = LocalFactorTable(p, ks, n, rows, lam, tau)
    if not table.ladder_ok:
        raise IntegrityError(f"ladder identity violated at p={p}, n={n}, ks={list(ks)}")
    return table


# --------------------------------------------------------------------------
# singular series
# --------------------------------------------------------------------------

@dataclass
class SingularSeries:
    ks: tuple[int, ...]
    n: int
    X: int
    value: float
    delta: Fraction
    terms: list[tuple[int, int, float]]  # (q, U_n(q), q^{-s} U_n(q))
    tail_proxy: float
    exact_value: Fraction | None = None

    def to_dict(self, with_terms: bool = True) -> dict:
        d = {
            "ks": list(self.ks),
            "n": self.n,
            "X": self.X,
            "value": self.value,
            "delta": str(self.delta),
            "tail_proxy": self.tail_proxy,
            "exact_value": None if self.exact_value is None else str(self.exact_value),
        }
        if with_terms:
            d["terms"] = [{"q": q, "U": u, "term": t} for q, u, t in self.terms]
        return d


def _require_convergent(ks: tuple[int, ...]) -> Fraction:
    theta = ExponentSequence(ks).theta
    if theta <= 2:
        raise ValueError(
            f"singular series needs theta = sum 1/k_i > 2 for convergence; got {theta}"
        )
    return theta


def singular_series(ks, n: int, X: int, exact: bool = False, cap: int = MODULUS_CAP) -> SingularSeries:
    """S(n; X) = sum_{q <= X} q^{-s} U_n(q), assembled from prime-power tables."""
    ks = _ks(ks)
    theta = _require_convergent(ks)
    X = int(X)
    if X < 1:
        raise ValueError(f"X must be >= 1, got {X}")
    s = len(ks)
    terms = []
    for q in range(1, X + 1):
        U = u_n_exact(ks, n, q, cap)
        terms.append((q, U, float(Fraction(U, q**s)) if U else 0.0))
    value = math.fsum(t for _, _, t in terms)
    tail = max((abs(t) for q, _, t in terms if q > X / 2), default=0.0)
    exact_value = sum((Fraction(u, q**s) for q, u, _ in terms), Fraction(0)) if exact else None
    return SingularSeries(ks, n, X, value, theta - 2, terms, tail, exact_value)


def singular_series_complex(ks, n: int, X: int) -> float:
    """The same partial sum through the complex route only (cross-check)."""
    ks = _ks(ks)
    _require_convergent(ks)
    s = len(ks)
    return math.fsum((u_n_complex(ks, n, q) / q**s).real for q in range(1, int(X) + 1))


# --------------------------------------------------------------------------
# local solubility
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SolubilityCertificate:
    p: int
    lam: int
    tau: int
    j: int
    n: int
    ks: tuple[int, ...]
    solution: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.p ** (self.lam + self.tau)

    def verify(self) -> bool:
        m = self.modulus
        total = sum(pow(x, k, m) for x, k in zip(self.solution, self.ks)) % m
        return total == self.n % m and self.solution[self.j] % self.p != 0

    def to_dict(self) -> dict:
        return {"p": self.p, "lambda": self.lam, "tau": self.tau, "j": self.j,
                "modulus": self.modulus, "solution": list(self.solution)}


def lemma_hypotheses(ks: tuple[int, ...]) -> bool:
    return len(ks) >= 4 * ks[0] and ExponentSequence(ks).theta > 2


def _reachable(choices: list[dict[int, int]], m: int) -> dict[int, tuple]:
    reach = {0: ()}
    for opts in choices:
        nxt: dict[int, tuple] = {}
        for r, xs in reach.items():
            for v, x in opts.items():
                key = (r + v) % m
                if key not in nxt:
                    nxt[key] = xs + (x,)
        reach = nxt
    return reach


def solve_unit_congruence(ks, n: int, p: int, require_hypotheses: bool = True) -> SolubilityCertificate | None:
    """A solution of sum x_i^{k_i} = n mod p^{lambda+tau} with x_j a unit.

    lambda is the exact power of p dividing gcd(k_i) and j an index where it
    is attained.  Reachable residues of the two halves of the variables are
    built separately and joined on the target.
    """
    ks = _ks(ks)
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    hyp = lemma_hypotheses(ks)
    if require_hypotheses and not hyp:
        raise ValueError("needs s >= 4 k_1 and theta > 2")
    lam = p_adic_valuation(math.gcd(*ks), p)
    tau = tau_p(p)
    m = p ** (lam + tau)
    j = next(i for i, k in enumerate(ks) if p_adic_valuation(k, p) == lam)
    choices = []
    for i, k in enumerate(ks):
        opts: dict[int, int] = {}
        for x in range(m):
            if i == j and x % p == 0:
                continue
            opts.setdefault(pow(x, k, m), x)
        choices.append(opts)
    half = len(ks) // 2
    left, right = _reachable(choices[:half], m), _reachable(choices[half:], m)
    target = n % m
    for r, xs in sorted(left.items()):
        ys = right.get((target - r) % m)
        if ys is not None:
            cert = SolubilityCertificate(p, lam, tau, j, n, ks, xs + ys)
            if not cert.verify():
                raise IntegrityError(f"certificate failed verification: {cert}")
            return cert
    if hyp:
        raise IntegrityError(f"no unit solution mod {p}^{lam + tau} for n={n}, ks={list(ks)}")
    return None


@dataclass
class PositivityReport:
    ks: tuple[int, ...]
    n: int
    X: int
    p_cut: int
    sigma: float
    chi: dict[int, Fraction]
    chi_product: Fraction
    lower_bounds: dict[int, Fraction]
    witness: Fraction
    certificates: dict[int, SolubilityCertificate]
    tables: dict[int, LocalFactorTable] = field(repr=False, default_factory=dict)

    @property
    def all_above_bounds(self) -> bool:
        return all(self.chi[p] >= self.lower_bounds[p] for p in self.chi)

    def to_dict(self) -> dict:
        return {
            "ks": list(self.ks),
            "n": self.n,
            "X": self.X,
            "p_cut": self.p_cut,
            "sigma": self.sigma,
            "chi": {str(p): float(c) for p, c in self.chi.items()},
            "chi_product": float(self.chi_product),
            "lower_bounds": {str(p): str(b) for p, b in self.lower_bounds.items()},
            "witness": str(self.witness),
            "witness_float": float(self.witness),
            "all_above_bounds": self.all_above_bounds,
            "certificates": {str(p): c.to_dict() for p, c in self.certificates.items()},
            "note": "S(n) >= (1/2) prod_{p <= C} chi_p holds only if the cutoff C <= p_cut",
        }


def sigma_positivity_report(ks, n: int, X: int, p_cut: int = DEFAULT_PCUT,
                            cap: int = MODULUS_CAP) -> PositivityReport:
    ks = _ks(ks)
    if not lemma_hypotheses(ks):
        raise ValueError("needs s >= 4 k_1 and theta > 2")
    sigma = singular_series(ks, n, X, cap=cap).value
    chi, bounds, certs, tables = {}, {}, {}, {}
    for p in primes_up_to(p_cut):
        p = int(p)
        table = euler_factor(ks, n, p, cap=cap)
        tables[p] = table
        chi[p] = table.chi_p
        bounds[p] = table.lower_bound
        certs[p] = solve_unit_congruence(ks, n, p)
    prod_chi = math.prod(chi.values(), start=Fraction(1))
    witness = math.prod(bounds.values(), start=Fraction(1))
    return PositivityReport(ks, n, X, p_cut, sigma, chi, prod_chi, bounds, witness, certs, tables)
