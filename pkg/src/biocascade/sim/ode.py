"""Explicit-Euler integrators for the population moment and relaxation ODEs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from biocascade.errors import NoEquilibriumError, UnstableStepError

DEFAULT_DT = 5e-6  # 0.005 ms


@dataclass(frozen=True)
class InputSchedule:
    """Piecewise-constant input concentrations (uM).

    ``levels[k]`` holds on ``[times[k-1], times[k])``; each level is a
    scalar or a tuple with one concentration per input.
    """

    times: tuple = ()
    levels: tuple = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "levels", tuple(self.levels))
        if len(self.levels) != len(self.times) + 1:
            raise ValueError("need one level per schedule segment")

    def at(self, t: float):
        return self.levels[int(np.searchsorted(self.times, t, side="right"))]

    def max_level(self) -> float:
        return max(float(np.max(lv)) for lv in self.levels)


@dataclass(frozen=True)
class OdeConfig:
    dt: float = DEFAULT_DT
    tau: float = 10.0
    t_end: float = 0.025
    record_every: int = 1

    def __post_init__(self):
        if self.dt <= 0 or self.tau <= 0 or self.t_end <= 0:
            raise ValueError("dt, tau and t_end must be > 0")


def _steps(cfg: OdeConfig) -> int:
    return int(round(cfg.t_end / cfg.dt))


def ode_mean_var(alpha: float, beta: float, schedule: InputSchedule, cfg: OdeConfig, q0=None, v0=None):
    """Mean ``q`` and variance ``v`` of the bound-state indicator of one site.

    ``dq/dt = -alpha q + beta x (1 - q)`` and
    ``dv/dt = alpha (q - 2 v) + beta x (1 - q - 2 v)``. Defaults start at
    the stationary point of the first level. Returns ``(t, q, v)``.
    """
    x_max = schedule.max_level()
    if cfg.dt >= 2.0 / (alpha + beta * x_max):
        raise UnstableStepError(f"dt={cfg.dt} is not below 2/(alpha + beta x_max)")
    x_start = float(schedule.at(0.0))
    q = beta * x_start / (alpha + beta * x_start) if q0 is None else float(q0)
    v = q * (1 - q) if v0 is None else float(v0)
    n = _steps(cfg)
    ts, qs, vs = [0.0], [q], [v]
    for k in range(n):
        t = k * cfg.dt
        bx = beta * float(schedule.at(t))
        dq = -alpha * q + bx * (1 - q)
        dv = alpha * (q - 2 * v) + bx * (1 - q - 2 * v)
        q += cfg.dt * dq
        v += cfg.dt * dv
        if (k + 1) % cfg.record_every == 0:
            ts.append((k + 1) * cfg.dt)
            qs.append(q)
            vs.append(v)
    return np.array(ts), np.array(qs), np.array(vs)


def generator_matrix(rate_fn: Callable[[float], np.ndarray]):
    """Wrap ``rate_fn(x) -> R`` (off-diagonal ``j -> i`` rates) into a generator."""

    def gen(x):
        R = np.asarray(rate_fn(x), dtype=float)
        return R - np.diag(R.sum(axis=0))

    return gen


def ode_master(rate_fn, p0: Sequence[float], schedule: InputSchedule, cfg: OdeConfig):
    """Euler integration of ``dp/dt = Q(x(t)) p`` for one macromolecule.

    ``rate_fn(x)`` returns the off-diagonal rate matrix at concentration
    ``x``. Returns ``(t, p)`` with ``p`` of shape ``(n_points, n_states)``.
    """
    gen = generator_matrix(rate_fn)
    cache = {}

    def Q(x):
        key = tuple(np.atleast_1d(x))
        if key not in cache:
            M = gen(x)
            if cfg.dt * float(np.max(-np.diag(M))) >= 1.0:
                raise UnstableStepError("dt exceeds the fastest exit time of the chain")
            cache[key] = M
        return cache[key]

    p = np.asarray(p0, dtype=float).copy()
    n = _steps(cfg)
    ts, ps = [0.0], [p.copy()]
    for k in range(n):
        p = p + cfg.dt * (Q(schedule.at(k * cfg.dt)) @ p)
        if (k + 1) % cfg.record_every == 0:
            ts.append((k + 1) * cfg.dt)
            ps.append(p.copy())
    return np.array(ts), np.array(ps)


def ode_relax_y(phi_p, phi_r, schedule: InputSchedule, cfg: OdeConfig, y0: float = 0.0):
    """``tau dy/dt = -Phi_R(x) y + Phi_P(x)``; ``phi_r`` is the removal coefficient.

    Returns ``(t, y)``.
    """
    cache = {}

    def fluxes(x):
        key = tuple(np.atleast_1d(x))
        if key not in cache:
            p, r = float(phi_p(x)), float(phi_r(x))
            if r <= 0:
                raise NoEquilibriumError(f"removal flux vanishes at x={x}")
            if cfg.dt * r / cfg.tau >= 2.0:
                raise UnstableStepError("dt too large for the Y relaxation rate")
            cache[key] = (p, r)
        return cache[key]

    y = float(y0)
    n = _steps(cfg)
    ts, ys = [0.0], [y]
    for k in range(n):
        p, r = fluxes(schedule.at(k * cfg.dt))
        y += cfg.dt * (p - r * y) / cfg.tau
        if (k + 1) % cfg.record_every == 0:
            ts.append((k + 1) * cfg.dt)
            ys.append(y)
    return np.array(ts), np.array(ys)
