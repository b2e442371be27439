"""Problem instances: exponent sequences, targets, box sizes."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


def iroot(n: int, k: int) -> int:
    """Largest integer r with r**k <= n (exact, any size of n)."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if n.bit_length() // k > 48:
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid**k <= n:
                lo = mid
            else:
                hi = mid - 1
        return lo
    # float guess is within a few units here; correct it exactly
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


@dataclass(frozen=True)
class ExponentSequence:
    """A nondecreasing tuple of exponents ``k_1 <= ... <= k_s``, all >= 2."""

    ks: tuple[int, ...]

    def __post_init__(self):
        ks = tuple(int(k) for k in self.ks)
        if not ks:
            raise ValueError("exponent sequence must be nonempty")
        if any(k < 2 for k in ks) or any(a > b for a, b in zip(ks, ks[1:])):
            raise ValueError(f"exponents must be nondecreasing integers >= 2, got {list(ks)}")
        object.__setattr__(self, "ks", ks)

    @classmethod
    def parse(cls, text: str) -> "ExponentSequence":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    @classmethod
    def coerce(cls, ks) -> "ExponentSequence":
        if isinstance(ks, ExponentSequence):
            return ks
        if isinstance(ks, str):
            return cls.parse(ks)
        return cls(tuple(ks))

    @property
    def s(self) -> int:
        return len(self.ks)

    @property
    def theta(self) -> Fraction:
        return sum((Fraction(1, k) for k in self.ks), Fraction(0))

    @property
    def gcd_d(self) -> int:
        return math.gcd(*self.ks)

    def distinct(self) -> dict[int, int]:
        """Multiplicity of each exponent value."""
        out: dict[int, int] = {}
        for k in self.ks:
            out[k] = out.get(k, 0) + 1
        return out

    def to_json(self) -> str:
        return json.dumps(list(self.ks))

    @classmethod
    def from_json(cls, text: str) -> "ExponentSequence":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("exponent sequence JSON must be an array of integers")
        return cls(tuple(data))

    def __iter__(self):
        return iter(self.ks)

    def __len__(self):
        return len(self.ks)

    def __getitem__(self, i):
        return self.ks[i]


@dataclass(frozen=True)
class ProgressionSpec:
    """Exponents ``k, k + r, ..., k + r(s-1)``."""

    k: int
    r: int
    s: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"progression needs k >= 2, got k={self.k}")
        if self.r < 0:
            raise ValueError(f"progression needs r >= 0, got r={self.r}")
        if self.s < 1:
            raise ValueError(f"progression needs s >= 1, got s={self.s}")

    def expand(self) -> ExponentSequence:
        return ExponentSequence(tuple(self.k + self.r * i for i in range(self.s)))

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "r": self.r, "s": self.s}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ProgressionSpec":
        d = json.loads(text)
        return cls(int(d["k"]), int(d["r"]), int(d["s"]))


def theta(ks) -> Fraction:
    """Exact sum of reciprocals of the exponents."""
    return ExponentSequence.coerce(ks).theta


def expand_progression(spec: ProgressionSpec) -> ExponentSequence:
    return spec.expand()


def smoothness_bound(P: int, eta: float) -> int:
    """floor(P**eta), with eta = 1 returning P itself."""
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if eta == 1:
        return P
    return max(1, int(math.floor(P**eta + 1e-9)))


@dataclass(frozen=True)
class ProblemInstance:
    exponents: ExponentSequence
    n: int
    eta: float = 1.0
    box_sizes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "exponents", ExponentSequence.coerce(self.exponents))
        if self.n < 1:
            raise ValueError(f"target n must be >= 1, got {self.n}")
        if not 0 < self.eta <= 1:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        object.__setattr__(self, "box_sizes", box_sizes(self.exponents, self.n))

    @property
    def smoothness_bounds(self) -> tuple[int, ...]:
        return tuple(smoothness_bound(P, self.eta) for P in self.box_sizes)


def box_sizes(ks, n: int) -> tuple[int, ...]:
    """floor(n**(1/k_i)) for each exponent, by exact integer roots."""
    if isinstance(ks, ProblemInstance):
        return ks.box_sizes
    ks = ExponentSequence.coerce(ks)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return tuple(iroot(n, k) for k in ks)


def as_sequence(ks: ExponentSequence | Sequence[int] | Iterable[int] | str) -> ExponentSequence:
    return ExponentSequence.coerce(ks)
