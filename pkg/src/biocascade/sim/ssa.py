"""Trajectories and ensembles from the Gillespie direct method.

Replicate ``k`` of a run with master seed ``s`` draws from
``PCG64(SeedSequence(s, spawn_key=(k,)))``: first any initial-condition
samples, then the uniforms consumed two per event.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from biocascade.errors import StalledError
from biocascade.sim.kernel import DONE, EVENTS_FULL, NEED_UNIFORMS, ssa_kernel
from biocascade.sim.system import ClampSchedule, ReactionSystem

UNIFORM_CHUNK = 1 << 14


def replicate_rng(master_seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(master_seed), spawn_key=(int(k),))))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_points, n_species)
    species: tuple
    seed: int
    replicate: int = 0
    n_events: int = 0

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.species.index(name)]

    def on_grid(self, grid) -> np.ndarray:
        """Zero-order hold of the trajectory onto ``grid``."""
        idx = np.searchsorted(self.times, np.asarray(grid), side="right") - 1
        return self.states[np.clip(idx, 0, None)]


@dataclass(frozen=True)
class EnsembleStats:
    grid: np.ndarray
    species: tuple
    mean: np.ndarray  # (G, S)
    std: np.ndarray  # (G, S), population std (ddof=0)
    n: int
    seed: int
    samples: Optional[np.ndarray] = None  # (N, G, S) when kept

    def column(self, name: str):
        i = self.species.index(name)
        return self.mean[:, i], self.std[:, i]


def _schedule_arrays(system: ReactionSystem, schedule: Optional[ClampSchedule]):
    if schedule is None:
        return np.zeros(0), np.zeros(0, dtype=np.int64), np.zeros((1, 0), dtype=np.int64)
    idx = np.array([system.index(s) for s in schedule.species], dtype=np.int64)
    vals = np.array(schedule.counts, dtype=np.int64).reshape(len(schedule.counts), len(idx))
    return np.array(schedule.times, dtype=float), idx, vals


def _run(system, t_end, rng, schedule, grid, log_events, initial=None, stall_error=False):
    if t_end <= 0:
        raise ValueError("t_end must be > 0")
    rates, reac, stoich = system.arrays()
    seg_times, clamp_idx, clamp_vals = _schedule_arrays(system, schedule)
    x = np.array(system.initial if initial is None else initial, dtype=np.int64)
    for c, i in enumerate(clamp_idx):
        x[i] = clamp_vals[0, c]
    grid = np.zeros(0) if grid is None else np.asarray(grid, dtype=float)
    grid_out = np.zeros((len(grid), len(x)), dtype=np.int64)
    state = np.zeros(3)
    gi, ui, ei, count = (np.zeros(1, dtype=np.int64) for _ in range(4))
    u = rng.random(UNIFORM_CHUNK)
    cap = 1024 if log_events else 0
    ev_t = np.zeros(cap)
    ev_x = np.zeros((cap, len(x)), dtype=np.int64)
    x_start = x.copy()
    while True:
        status = ssa_kernel(
            state, x, rates, reac, stoich, seg_times, clamp_idx, clamp_vals, float(t_end),
            grid, grid_out, gi, u, ui, ev_t, ev_x, ei, count,
        )
        if status == DONE:
            break
        if status == NEED_UNIFORMS:
            u = np.concatenate([u[ui[0]:], rng.random(UNIFORM_CHUNK)])
            ui[0] = 0
        elif status == EVENTS_FULL:
            ev_t = np.concatenate([ev_t, np.zeros(len(ev_t))])
            ev_x = np.concatenate([ev_x, np.zeros_like(ev_x)])
    if stall_error and count[0] == 0:
        raise StalledError("no reaction fired before t_end")
    events = (ev_t[: ei[0]], ev_x[: ei[0]]) if log_events else None
    return x_start, grid_out, events, int(count[0])


def gillespie_run(
    system: ReactionSystem,
    t_end: float,
    seed: int,
    schedule: Optional[ClampSchedule] = None,
    replicate: int = 0,
    initial=None,
) -> Trajectory:
    """Full event-by-event trajectory, plus schedule jumps, starting at ``t = 0``."""
    rng = replicate_rng(seed, replicate)
    x0, _, (ev_t, ev_x), n = _run(system, t_end, rng, schedule, None, True, initial)
    times = np.concatenate([[0.0], ev_t])
    states = np.vstack([x0[None, :], ev_x])
    return Trajectory(times, states, system.species, int(seed), int(replicate), n)


def ensemble(
    system: ReactionSystem,
    n: int,
    t_end: float,
    master_seed: int,
    grid,
    schedule: Optional[ClampSchedule] = None,
    initial: Optional[Callable[[np.random.Generator], np.ndarray]] = None,
    keep_samples: bool = False,
) -> EnsembleStats:
    """``n`` replicates sampled on ``grid`` by zero-order hold.

    ``initial(rng)`` may draw a per-replicate starting state from the
    replicate's own generator before any event uniforms.
    """
    if n < 1:
        raise ValueError("need at least one replicate")
    grid = np.asarray(grid, dtype=float)
    samples = np.zeros((n, len(grid), len(system.species)), dtype=np.int64)
    for k in range(n):
        rng = replicate_rng(master_seed, k)
        x0 = None if initial is None else np.asarray(initial(rng), dtype=np.int64)
        _, out, _, _ = _run(system, t_end, rng, schedule, grid, False, x0)
        samples[k] = out
    mean = samples.mean(axis=0)
    std = samples.std(axis=0)
    return EnsembleStats(grid, system.species, mean, std, n, int(master_seed), samples if keep_samples else None)
