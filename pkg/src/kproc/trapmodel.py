"""Trap model on the complete graph and its rescaled version.

The chain holds at vertex i an Exponential time of mean tau_i (microscopic
time) and jumps uniformly over all n vertices including itself. Observed at
the time scale c_n = n^(-1/alpha) it is exactly the truncated chain of
kprocess driven by the weights c_n * tau, so rescaled trajectories here are
built microscopically and mapped through the time change, while the matched
chain scales the weights instead; agreement between the two routes is what
the equivalence experiment certifies.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .env import Environment, check_alpha
from .kprocess import Trajectory, _draw_pieces, _merged_events
from .rng import SeedSpec
from .states import check_site

__all__ = [
    "UNIFORM",
    "TrapEnv",
    "sample_trap_env",
    "rescaled_env",
    "simulate_trap",
    "save_trap_env",
    "load_trap_env",
]


class _UniformStart:
    """Sentinel for starting the trap chain uniformly over all vertices."""

    def __repr__(self) -> str:
        return "UNIFORM"


UNIFORM = _UniformStart()


@dataclass(frozen=True, eq=False)
class TrapEnv:
    """Graph size n, tail index alpha, microscopic mean holding times tau in
    nonincreasing order, and the time-scaling constant c_n = n^(-1/alpha)."""

    n: int
    alpha: float
    tau: np.ndarray
    c_n: float | None = None

    def __post_init__(self) -> None:
        n = int(self.n)
        if n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        check_alpha(self.alpha)
        tau = np.ascontiguousarray(self.tau, dtype=np.float64)
        if tau.ndim != 1 or tau.size != n:
            raise ValueError(f"tau must be a 1-d array of length {n}")
        if not np.all(np.isfinite(tau)) or np.any(tau <= 0.0):
            raise ValueError("tau entries must be finite and positive")
        if np.any(np.diff(tau) > 0.0):
            raise ValueError("tau must be nonincreasing (reverse order statistics)")
        expected = float(n) ** (-1.0 / float(self.alpha))
        c_n = expected if self.c_n is None else float(self.c_n)
        if not math.isclose(c_n, expected, rel_tol=1e-12):
            raise ValueError(f"c_n must equal n^(-1/alpha) = {expected!r}, got {self.c_n!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "c_n", c_n)
        tau.setflags(write=False)


def sample_trap_env(n: int, alpha: float, seed: SeedSpec) -> TrapEnv:
    """Draw n i.i.d. Pareto(alpha) mean holding times (P(tau > t) = t^-alpha
    for t >= 1) and sort them nonincreasing."""
    if int(n) < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    check_alpha(alpha)
    rng = seed.generator()
    u = 1.0 - rng.random(int(n))
    tau = np.sort(u ** (-1.0 / float(alpha)))[::-1]
    return TrapEnv(n=int(n), alpha=float(alpha), tau=np.ascontiguousarray(tau))


def rescaled_env(trap: TrapEnv) -> Environment:
    """The environment c_n * tau driving the matched truncated chain."""
    return Environment(weights=trap.c_n * trap.tau, alpha=trap.alpha, tail_estimate=0.0)


def simulate_trap(trap: TrapEnv, start, horizon: float, seed: SeedSpec) -> Trajectory:
    """Simulate the trap chain microscopically and emit the rescaled path
    over [0, horizon] in macroscopic time, self-transitions merged.

    start is a vertex index or UNIFORM (first vertex uniform, entered at 0).
    """
    if not horizon > 0.0 or not math.isfinite(horizon):
        raise ValueError(f"horizon must be positive and finite, got {horizon!r}")
    if isinstance(start, _UniformStart):
        start_code = 0
    else:
        start_code = check_site(start, trap.n, "start")
    rng = seed.generator()
    micro_horizon = horizon / trap.c_n
    sites, durations = _draw_pieces(trap.tau, micro_horizon, rng,
                                    start_code if start_code else None)
    boundaries = np.cumsum(durations) * trap.c_n
    start_state = start_code if start_code else int(sites[0])
    times, states = _merged_events(start_state, sites, boundaries, horizon)
    return Trajectory(start_state=start_state, times=times, states=states, horizon=horizon)


def save_trap_env(trap: TrapEnv, path: str | os.PathLike) -> None:
    """Write the trap environment as JSON with keys n, alpha, c_n, tau."""
    payload = {
        "n": trap.n,
        "alpha": trap.alpha,
        "c_n": trap.c_n,
        "tau": trap.tau.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_trap_env(path: str | os.PathLike) -> TrapEnv:
    """Read a trap environment written by save_trap_env."""
    with open(path) as fh:
        payload = json.load(fh)
    return TrapEnv(n=int(payload["n"]), alpha=float(payload["alpha"]),
                   tau=np.asarray(payload["tau"], dtype=np.float64),
                   c_n=float(payload["c_n"]))
