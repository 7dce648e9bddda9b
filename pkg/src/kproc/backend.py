"""Kernel backend selection.

The chain-stepping kernels exist twice: a numba @njit version and a pure
numpy column-vectorized version. Both consume the same host-drawn random
blocks in the same (replica, step) order, so they are bit-identical; the
numba version is just faster. Selection:

- KPROC_BACKEND=numpy forces the fallback;
- KPROC_BACKEND=numba insists on numba and raises if it is unavailable;
- unset or empty prefers numba when importable.
"""

from __future__ import annotations

import os

__all__ = ["HAS_NUMBA", "backend_name"]

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def backend_name() -> str:
    """Resolve the active backend, honoring the KPROC_BACKEND variable."""
    choice = os.environ.get("KPROC_BACKEND", "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("KPROC_BACKEND=numba but numba is not importable")
        return "numba"
    if choice == "":
        return "numba" if HAS_NUMBA else "numpy"
    raise ValueError(f"unrecognized KPROC_BACKEND value: {choice!r}")
