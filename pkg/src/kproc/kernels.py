"""Host drivers for the chain-stepping kernels.

The kernels cannot hold a random generator (the numba backend forbids it),
so the drivers draw fixed-width blocks of exponentials and uniform placements
from the caller's generator and feed them in, compacting away finished
replicas between blocks. Draw consumption is a pure function of the chain
dynamics, so outputs are deterministic given the generator state and
identical across backends.
"""

from __future__ import annotations

import numpy as np

from . import _kernels_numpy
from ._phases import PH_DONE, PH_FIRST, PH_INF, PH_PLACE, PH_SITE_C
from .backend import backend_name

__all__ = ["run_to_target", "run_entrance"]

_BLOCK_COLS = 64


def _impl():
    if backend_name() == "numba":
        from . import _kernels_numba

        return _kernels_numba
    return _kernels_numpy


def _start_phase(c: float, start_code: int) -> int:
    if start_code == 0:
        return PH_INF if c > 0.0 else PH_PLACE
    return PH_SITE_C if c > 0.0 else PH_FIRST


def run_to_target(gamma: np.ndarray, c: float, targets: np.ndarray, start_code: int,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run one chain per target time; report where it sits and for how long.

    Returns (state_codes, raw_residuals, merged_residuals): the state covering
    the target time (0 = unstable state, only reachable when c > 0), the time
    from the target until the chain's clock next rings, and the time until its
    value next changes (identical to raw when c > 0; larger when c = 0 if the
    following placements repeat the covering site).

    start_code: 0 starts at the unstable state, a site index starts there.
    """
    impl = _impl()
    n = gamma.size
    m = targets.size
    c_hold = c / n if c > 0.0 else 0.0

    t = np.zeros(m)
    cur = np.full(m, max(start_code, 1), dtype=np.int64)
    phase = np.full(m, _start_phase(c, start_code), dtype=np.int64)
    run_end = np.zeros(m)
    out_state = np.zeros(m, dtype=np.int64)
    out_raw = np.zeros(m)
    out_merged = np.zeros(m)

    alive = np.arange(m)
    while alive.size:
        k = alive.size
        e = rng.standard_exponential((k, _BLOCK_COLS))
        u = rng.integers(1, n + 1, size=(k, _BLOCK_COLS))
        sub = (t[alive], cur[alive], phase[alive], run_end[alive],
               out_state[alive], out_raw[alive], out_merged[alive])
        impl.step_to_target(gamma, c_hold, targets[alive], e, u, *sub)
        t[alive], cur[alive], phase[alive], run_end[alive] = sub[0], sub[1], sub[2], sub[3]
        out_state[alive], out_raw[alive], out_merged[alive] = sub[4], sub[5], sub[6]
        alive = alive[sub[2] != PH_DONE]
    return out_state, out_raw, out_merged


def run_entrance(gamma: np.ndarray, c: float, in_a: np.ndarray, start_code: int,
                 count: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Walk chains until they first take a value in A.

    in_a: boolean membership array of length n+1 indexed by site (entry 0
    unused). Returns (entrance_sites, entrance_times). start_code as in
    run_to_target; a site start must lie outside A.
    """
    impl = _impl()
    n = gamma.size
    c_hold = c / n if c > 0.0 else 0.0

    t = np.zeros(count)
    cur = np.full(count, max(start_code, 1), dtype=np.int64)
    phase = np.full(count, _start_phase(c, start_code), dtype=np.int64)
    out_site = np.zeros(count, dtype=np.int64)
    out_tau = np.zeros(count)

    alive = np.arange(count)
    while alive.size:
        k = alive.size
        e = rng.standard_exponential((k, _BLOCK_COLS))
        u = rng.integers(1, n + 1, size=(k, _BLOCK_COLS))
        sub = (t[alive], cur[alive], phase[alive], out_site[alive], out_tau[alive])
        impl.step_entrance(gamma, c_hold, in_a, e, u, *sub)
        t[alive], cur[alive], phase[alive] = sub[0], sub[1], sub[2]
        out_site[alive], out_tau[alive] = sub[3], sub[4]
        alive = alive[sub[2] != PH_DONE]
    return out_site, out_tau
