"""Circle-method toolkit for Waring's problem with ascending powers.

Threshold calculators, smooth Weyl sums and arc geometry, exact local
densities and singular series, the singular integral, and exact
representation counts for n = x_1^{k_1} + ... + x_s^{k_s}.
"""
from __future__ import annotations

__version__ = "0.1.0"

from ._accel import backend, set_backend, use_backend
from .core import (
    ExponentSequence,
    ProblemInstance,
    ProgressionSpec,
    box_sizes,
    expand_progression,
    iroot,
    theta,
)
from .errors import IntegrityError, ResourceLimitError

__all__ = [
    "__version__",
    "backend",
    "set_backend",
    "use_backend",
    "ExponentSequence",
    "ProblemInstance",
    "ProgressionSpec",
    "box_sizes",
    "expand_progression",
    "iroot",
    "theta",
    "IntegrityError",
    "ResourceLimitError",
]
