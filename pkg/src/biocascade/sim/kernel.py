"""Compiled Gillespie direct-method loop.

The kernel never draws random numbers itself: it consumes a caller-supplied
buffer of uniforms, so the random stream is owned by numpy and identical
with or without compilation. When the buffer (or the event log) runs out,
the kernel returns a status code and the caller refills and resumes.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

DONE = 0
NEED_UNIFORMS = 1
EVENTS_FULL = 2


@njit(cache=True)
def _propensities(rates, reac, x, a):
    a0 = 0.0
    for r in range(rates.shape[0]):
        v = rates[r]
        i = reac[r, 0]
        j = reac[r, 1]
        if i >= 0:
            if j == i:
                v *= x[i] * (x[i] - 1) * 0.5
            else:
                v *= x[i]
                if j >= 0:
                    v *= x[j]
        a[r] = v
        a0 += v
    return a0


@njit(cache=True)
def ssa_kernel(
    state,  # float64[3]: t, segment, unused
    x,  # int64[S], updated in place
    rates,
    reac,
    stoich,
    seg_times,  # float64[K]
    clamp_idx,  # int64[C]
    clamp_vals,  # int64[K+1, C]
    t_end,
    grid,  # float64[G]
    grid_out,  # int64[G, S]
    gi_arr,  # int64[1]: next grid index
    u,  # float64[U]
    ui_arr,  # int64[1]: next uniform index
    ev_t,  # float64[E]
    ev_x,  # int64[E, S]
    ei_arr,  # int64[1]: next event slot; ev_t.shape[0] == 0 disables logging
    count_arr,  # int64[1]: events fired
):
    t = state[0]
    seg = int(state[1])
    gi = gi_arr[0]
    ui = ui_arr[0]
    ei = ei_arr[0]
    log = ev_t.shape[0] > 0
    n_r = rates.shape[0]
    n_seg = seg_times.shape[0]
    a = np.empty(n_r)
    status = DONE
    while True:
        stop = t_end
        if seg < n_seg and seg_times[seg] < t_end:
            stop = seg_times[seg]
        if log and ei >= ev_t.shape[0]:
            status = EVENTS_FULL
            break
        a0 = _propensities(rates, reac, x, a)
        if a0 > 0.0:
            if ui + 2 > u.shape[0]:
                status = NEED_UNIFORMS
                break
            u1 = u[ui]
            u2 = u[ui + 1]
            ui += 2
            t_next = t - math.log1p(-u1) / a0
        else:
            u2 = 0.0
            t_next = math.inf
        if t_next >= stop:
            # no event before the boundary; the memoryless draw is discarded
            while gi < grid.shape[0] and grid[gi] < stop:
                grid_out[gi, :] = x
                gi += 1
            t = stop
            if stop >= t_end:
                while gi < grid.shape[0] and grid[gi] <= t_end:
                    grid_out[gi, :] = x
                    gi += 1
                status = DONE
                break
            seg += 1
            for c in range(clamp_idx.shape[0]):
                x[clamp_idx[c]] = clamp_vals[seg, c]
            if log:
                ev_t[ei] = t
                ev_x[ei, :] = x
                ei += 1
            continue
        while gi < grid.shape[0] and grid[gi] < t_next:
            grid_out[gi, :] = x
            gi += 1
        target = u2 * a0
        acc = 0.0
        chosen = -1
        for r in range(n_r):
            if a[r] > 0.0:
                acc += a[r]
                chosen = r
                if acc > target:
                    break
        for s in range(x.shape[0]):
            x[s] += stoich[chosen, s]
        t = t_next
        count_arr[0] += 1
        if log:
            ev_t[ei] = t
            ev_x[ei, :] = x
            ei += 1
    state[0] = t
    state[1] = seg
    gi_arr[0] = gi
    ui_arr[0] = ui
    ei_arr[0] = ei
    return status
