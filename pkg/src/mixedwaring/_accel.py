"""Backend selection for the numeric kernels.

Every hot kernel in :mod:`mixedwaring.kernels` exists twice: a numba
``@njit`` loop and a pure-numpy version.  The active one is chosen by the
``MIXEDWARING_BACKEND`` environment variable (``numba`` or ``numpy``) and
can be switched at runtime with :func:`use_backend`.
"""
from __future__ import annotations

import contextlib
import logging
import os

try:
    import numba

    logging.getLogger("numba").setLevel(logging.WARNING)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

_VALID = ("numba", "numpy")


def _initial_backend() -> str:
    name = os.environ.get("MIXEDWARING_BACKEND", "numba").strip().lower()
    if name not in _VALID:
        raise ValueError(f"MIXEDWARING_BACKEND must be one of {_VALID}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


_backend = _initial_backend()


def njit(func):
    """Compile with numba when it is installed, otherwise return ``func``."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    name = name.lower()
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    _backend = name


@contextlib.contextmanager
def use_backend(name: str):
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def set_threads(n: int | None) -> None:
    if n and HAVE_NUMBA:
        numba.set_num_threads(min(int(n), numba.config.NUMBA_NUM_THREADS))
