"""State-space conventions shared across the package.

Finite states are 1-based site indices into an environment's weight list;
the single unstable state is the sentinel INFINITY. Internally the kernels
code states as integers with 0 standing for INFINITY.
"""

from __future__ import annotations

import math

__all__ = ["INFINITY", "State", "is_infinite", "check_site"]

INFINITY = math.inf

# A state is either a positive int site index or the INFINITY sentinel.
State = int | float


def is_infinite(state: State) -> bool:
    return state == INFINITY


def check_site(state: State, n: int, what: str = "state") -> int:
    """Validate a finite site index against a truncation level n."""
    if is_infinite(state):
        raise ValueError(f"{what} must be a finite site index, got INFINITY")
    site = int(state)
    if site != state or not 1 <= site <= n:
        raise ValueError(f"{what} must be an integer in [1, {n}], got {state!r}")
    return site
