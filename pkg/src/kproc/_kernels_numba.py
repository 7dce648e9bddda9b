"""numba implementations of the chain-stepping kernels.

Row-sequential: replica i consumes its draw row e[i, :], u[i, :] left to
right until it finishes or the block is exhausted. Mirrors _kernels_numpy
draw for draw.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._phases import PH_DONE, PH_FIRST, PH_INF, PH_PLACE, PH_SITE_C, PH_TAIL


@njit(cache=True)
def step_to_target(gamma, c_hold, targets, e, u,
                   t, cur, phase, run_end, out_state, out_raw, out_merged):
    k, cols = e.shape
    for i in range(k):
        ph = phase[i]
        if ph == PH_DONE:
            continue
        ti = t[i]
        ci = cur[i]
        ri = run_end[i]
        tgt = targets[i]
        for j in range(cols):
            ej = e[i, j]
            uj = u[i, j]
            if ph == PH_PLACE:
                end = ti + gamma[uj - 1] * ej
                if end > tgt:
                    out_state[i] = uj
                    out_raw[i] = end - tgt
                    ri = end
                    ci = uj
                    ph = PH_TAIL
                else:
                    ti = end
            elif ph == PH_TAIL:
                if gamma.shape[0] == 1:
                    # A single site never changes value; the merged sojourn
                    # containing the target is infinite.
                    out_merged[i] = np.inf
                    ph = PH_DONE
                    break
                if uj != ci:
                    out_merged[i] = ri - tgt
                    ph = PH_DONE
                    break
                ri = ri + gamma[ci - 1] * ej
            elif ph == PH_INF:
                end = ti + c_hold * ej
                if end > tgt:
                    out_state[i] = 0
                    out_raw[i] = end - tgt
                    out_merged[i] = end - tgt
                    ph = PH_DONE
                    break
                ti = end
                ci = uj
                ph = PH_SITE_C
            elif ph == PH_SITE_C:
                end = ti + gamma[ci - 1] * ej
                if end > tgt:
                    out_state[i] = ci
                    out_raw[i] = end - tgt
                    out_merged[i] = end - tgt
                    ph = PH_DONE
                    break
                ti = end
                ph = PH_INF
            else:  # PH_FIRST
                end = ti + gamma[ci - 1] * ej
                if end > tgt:
                    out_state[i] = ci
                    out_raw[i] = end - tgt
                    ri = end
                    ph = PH_TAIL
                else:
                    ti = end
                    ph = PH_PLACE
        t[i] = ti
        cur[i] = ci
        run_end[i] = ri
        phase[i] = ph


@njit(cache=True)
def step_entrance(gamma, c_hold, in_a, e, u, t, cur, phase, out_site, out_tau):
    k, cols = e.shape
    for i in range(k):
        ph = phase[i]
        if ph == PH_DONE:
            continue
        ti = t[i]
        ci = cur[i]
        for j in range(cols):
            ej = e[i, j]
            uj = u[i, j]
            if ph == PH_PLACE:
                if in_a[uj]:
                    out_site[i] = uj
                    out_tau[i] = ti
                    ph = PH_DONE
                    break
                ti = ti + gamma[uj - 1] * ej
            elif ph == PH_INF:
                ti = ti + c_hold * ej
                if in_a[uj]:
                    out_site[i] = uj
                    out_tau[i] = ti
                    ph = PH_DONE
                    break
                ci = uj
                ph = PH_SITE_C
            elif ph == PH_SITE_C:
                ti = ti + gamma[ci - 1] * ej
                ph = PH_INF
            else:  # PH_FIRST: initial hold at the start site (placement unused)
                ti = ti + gamma[ci - 1] * ej
                ph = PH_PLACE
        t[i] = ti
        cur[i] = ci
        phase[i] = ph
