"""Kernel backend selection.

Two interchangeable kernel sets exist: numba-jitted loops and pure
numpy.  PNTVERIFY_BACKEND picks one explicitly ("numba" or "numpy");
the default "auto" prefers numba and falls back to numpy when numba is
missing or fails to import.
"""

from __future__ import annotations

import os
from functools import lru_cache
from types import ModuleType

from .config import BACKEND_ENV, PntError


@lru_cache(maxsize=None)
def kernels() -> ModuleType:
    """Return the active kernel module (resolved once per process)."""
    choice = os.environ.get(BACKEND_ENV, "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise PntError(f"{BACKEND_ENV} must be auto, numba, or numpy; got {choice!r}")
    if choice == "numpy":
        from . import _kernels_numpy

        return _kernels_numpy
    try:
        from . import _kernels_numba

        return _kernels_numba
    except ImportError:
        if choice == "numba":
            raise PntError("numba backend requested but numba failed to import")
        from . import _kernels_numpy

        return _kernels_numpy


def backend_name() -> str:
    return "numba" if kernels().__name__.endswith("numba") else "numpy"
