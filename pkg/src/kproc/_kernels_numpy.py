"""Pure-numpy implementations of the chain-stepping kernels.

Column-vectorized: step j processes draw column (e[:, j], u[:, j]) for every
unfinished replica. Replica i therefore consumes exactly the draws
(e[i, 0..], u[i, 0..]) in order, matching the numba row-sequential kernels
draw for draw and bit for bit. Phases are snapshotted at the top of each
column so a replica that changes phase consumes only one draw per step.
"""

from __future__ import annotations

import numpy as np

from ._phases import PH_DONE, PH_FIRST, PH_INF, PH_PLACE, PH_SITE_C, PH_TAIL


def step_to_target(gamma, c_hold, targets, e, u,
                   t, cur, phase, run_end, out_state, out_raw, out_merged):
    k, cols = e.shape
    for j in range(cols):
        ph0 = phase.copy()
        if not (ph0 != PH_DONE).any():
            break
        ej = e[:, j]
        uj = u[:, j]

        idx = np.flatnonzero(ph0 == PH_PLACE)
        if idx.size:
            site = uj[idx]
            end = t[idx] + gamma[site - 1] * ej[idx]
            cov = end > targets[idx]
            ic, inc = idx[cov], idx[~cov]
            out_state[ic] = site[cov]
            out_raw[ic] = end[cov] - targets[ic]
            run_end[ic] = end[cov]
            cur[ic] = site[cov]
            phase[ic] = PH_TAIL
            t[inc] = end[~cov]

        idx = np.flatnonzero(ph0 == PH_TAIL)
        if idx.size:
            if gamma.shape[0] == 1:
                # A single site never changes value; the merged sojourn
                # containing the target is infinite.
                out_merged[idx] = np.inf
                phase[idx] = PH_DONE
            else:
                moved = uj[idx] != cur[idx]
                im, istay = idx[moved], idx[~moved]
                out_merged[im] = run_end[im] - targets[im]
                phase[im] = PH_DONE
                run_end[istay] += gamma[cur[istay] - 1] * ej[istay]

        idx = np.flatnonzero(ph0 == PH_INF)
        if idx.size:
            end = t[idx] + c_hold * ej[idx]
            cov = end > targets[idx]
            ic, inc = idx[cov], idx[~cov]
            out_state[ic] = 0
            out_raw[ic] = end[cov] - targets[ic]
            out_merged[ic] = end[cov] - targets[ic]
            phase[ic] = PH_DONE
            t[inc] = end[~cov]
            cur[inc] = uj[inc]
            phase[inc] = PH_SITE_C

        idx = np.flatnonzero(ph0 == PH_SITE_C)
        if idx.size:
            end = t[idx] + gamma[cur[idx] - 1] * ej[idx]
            cov = end > targets[idx]
            ic, inc = idx[cov], idx[~cov]
            out_state[ic] = cur[ic]
            out_raw[ic] = end[cov] - targets[ic]
            out_merged[ic] = end[cov] - targets[ic]
            phase[ic] = PH_DONE
            t[inc] = end[~cov]
            phase[inc] = PH_INF

        idx = np.flatnonzero(ph0 == PH_FIRST)
        if idx.size:
            end = t[idx] + gamma[cur[idx] - 1] * ej[idx]
            cov = end > targets[idx]
            ic, inc = idx[cov], idx[~cov]
            out_state[ic] = cur[ic]
            out_raw[ic] = end[cov] - targets[ic]
            run_end[ic] = end[cov]
            phase[ic] = PH_TAIL
            t[inc] = end[~cov]
            phase[inc] = PH_PLACE


def step_entrance(gamma, c_hold, in_a, e, u, t, cur, phase, out_site, out_tau):
    k, cols = e.shape
    for j in range(cols):
        ph0 = phase.copy()
        if not (ph0 != PH_DONE).any():
            break
        ej = e[:, j]
        uj = u[:, j]

        idx = np.flatnonzero(ph0 == PH_PLACE)
        if idx.size:
            site = uj[idx]
            hit = in_a[site]
            ih, imiss = idx[hit], idx[~hit]
            out_site[ih] = site[hit]
            out_tau[ih] = t[ih]
            phase[ih] = PH_DONE
            t[imiss] += gamma[site[~hit] - 1] * ej[imiss]

        idx = np.flatnonzero(ph0 == PH_INF)
        if idx.size:
            t[idx] += c_hold * ej[idx]
            site = uj[idx]
            hit = in_a[site]
            ih, imiss = idx[hit], idx[~hit]
            out_site[ih] = site[hit]
            out_tau[ih] = t[ih]
            phase[ih] = PH_DONE
            cur[imiss] = site[~hit]
            phase[imiss] = PH_SITE_C

        idx = np.flatnonzero(ph0 == PH_SITE_C)
        if idx.size:
            t[idx] += gamma[cur[idx] - 1] * ej[idx]
            phase[idx] = PH_INF

        idx = np.flatnonzero(ph0 == PH_FIRST)
        if idx.size:
            t[idx] += gamma[cur[idx] - 1] * ej[idx]
            phase[idx] = PH_PLACE
