"""Kernel backend selection.

The environment flag ``BOLTDEV_KERNELS`` picks the implementation of the
hot RHS kernels: ``numba`` (jitted loops, parallel), ``numpy`` (pure
vectorized fallback) or ``auto`` (numba when importable, else numpy).
A per-call ``backend=`` argument on the wrappers overrides the flag.
"""

from __future__ import annotations

import os

ENV_FLAG = "BOLTDEV_KERNELS"

_cache: dict[str, object] = {}


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def backend_name(requested: str | None = None) -> str:
    name = requested or os.environ.get(ENV_FLAG, "auto").lower()
    if name == "auto":
        return "numba" if numba_available() else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {name!r} (use numba, numpy or auto)")
    return name


def get_kernels(requested: str | None = None):
    """The kernel module for the requested (or flag-selected) backend."""
    name = backend_name(requested)
    mod = _cache.get(name)
    if mod is None:
        if name == "numba":
            from .kernels import numba_kernels as mod
        else:
            from .kernels import numpy_kernels as mod
        _cache[name] = mod
    return mod


def available_backends() -> list[str]:
    out = ["numpy"]
    if numba_available():
        out.insert(0, "numba")
    return out
