"""Numerical tolerances.

Two tiers: ``NORM_TOL`` absorbs noise in user-supplied normalizations,
``eps()`` is the comparison tolerance used by the algebra.  The default of
``eps()`` can be overridden with the ``GPTCHECK_TOLERANCE`` environment
variable or locally with the :func:`tolerance` context manager.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from contextvars import ContextVar

NORM_TOL = 1e-6
TOL_RANGE = (1e-14, 1e-3)


def _check(value: float) -> float:
    value = float(value)
    lo, hi = TOL_RANGE
    if not lo <= value <= hi:
        raise ValueError(f"tolerance {value!r} outside [{lo:g}, {hi:g}]")
    return value


DEFAULT_EPS = _check(os.environ.get("GPTCHECK_TOLERANCE", 1e-9))

_eps: ContextVar[float] = ContextVar("gptcheck_eps", default=DEFAULT_EPS)


def eps() -> float:
    return _eps.get()


@contextmanager
def tolerance(value: float):
    """Temporarily replace the comparison tolerance."""
    token = _eps.set(_check(value))
    try:
        yield value
    finally:
        _eps.reset(token)
