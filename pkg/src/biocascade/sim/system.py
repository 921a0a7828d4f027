"""Mass-action reaction systems with clamped (scheduled) input species."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from biocascade.errors import StalledError
from biocascade.markov.spec import MacromoleculeSpec, label
from biocascade.sim.units import bimolecular_constant, concentration_to_count


@dataclass(frozen=True)
class Reaction:
    """``rate`` is the stochastic constant c(r); ``reactants`` has at most two species."""

    rate: float
    reactants: tuple
    change: Mapping[str, int]
    name: str = ""

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError("reaction constants must be >= 0")
        if len(self.reactants) > 2:
            raise ValueError("at most two reactants per reaction")
        object.__setattr__(self, "reactants", tuple(self.reactants))
        object.__setattr__(self, "change", dict(self.change))


@dataclass(frozen=True)
class ClampSchedule:
    """Piecewise-constant counts for clamped species.

    ``counts[k]`` holds on ``[times[k-1], times[k])`` with ``times[-1] = 0``
    implied, so ``len(counts) == len(times) + 1``.
    """

    species: tuple
    times: tuple = ()
    counts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "counts", tuple(tuple(int(c) for c in row) for row in self.counts))
        if len(self.counts) != len(self.times) + 1:
            raise ValueError("need one count row per schedule segment")
        if any(len(row) != len(self.species) for row in self.counts):
            raise ValueError("each count row needs one entry per clamped species")
        if any(b <= a for a, b in zip(self.times, self.times[1:])) or any(t <= 0 for t in self.times):
            raise ValueError("schedule times must be positive and strictly increasing")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("clamped counts must be >= 0")

    @classmethod
    def from_concentrations(cls, species, times, levels, volume=1.0) -> "ClampSchedule":
        """``levels[k]`` is a concentration (uM) per species, or one value shared by all."""
        rows = []
        for lv in levels:
            lv = list(lv) if isinstance(lv, (list, tuple)) else [lv] * len(species)
            rows.append(tuple(concentration_to_count(c, volume) for c in lv))
        return cls(tuple(species), tuple(times), tuple(rows))

    def segment(self, t: float) -> int:
        return int(np.searchsorted(np.asarray(self.times), t, side="right"))

    def counts_at(self, t: float) -> tuple:
        return self.counts[self.segment(t)]


@dataclass(frozen=True)
class ReactionSystem:
    species: tuple
    reactions: tuple
    initial: tuple
    clamped: tuple = ()
    volume: float = 1.0
    _idx: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "reactions", tuple(self.reactions))
        object.__setattr__(self, "initial", tuple(int(v) for v in self.initial))
        object.__setattr__(self, "clamped", tuple(self.clamped))
        if len(set(self.species)) != len(self.species):
            raise ValueError("species names must be unique")
        if len(self.initial) != len(self.species):
            raise ValueError("one initial count per species")
        if any(v < 0 for v in self.initial):
            raise ValueError("counts must be >= 0")
        idx = {s: i for i, s in enumerate(self.species)}
        object.__setattr__(self, "_idx", idx)
        for r in self.reactions:
            for s in list(r.reactants) + list(r.change):
                if s not in idx:
                    raise ValueError(f"reaction {r.name!r} uses unknown species {s!r}")
        for s in self.clamped:
            if s not in idx:
                raise ValueError(f"unknown clamped species {s!r}")

    def index(self, name: str) -> int:
        return self._idx[name]

    def with_initial(self, counts) -> "ReactionSystem":
        if isinstance(counts, Mapping):
            merged = list(self.initial)
            for k, v in counts.items():
                merged[self.index(k)] = int(v)
            counts = merged
        return ReactionSystem(self.species, self.reactions, tuple(counts), self.clamped, self.volume)

    def arrays(self):
        """``(rates, reactants, stoich)`` with clamped species left unchanged by events."""
        n_r, n_s = len(self.reactions), len(self.species)
        rates = np.zeros(n_r)
        reac = -np.ones((n_r, 2), dtype=np.int64)
        stoich = np.zeros((n_r, n_s), dtype=np.int64)
        clamped = {self.index(s) for s in self.clamped}
        for k, r in enumerate(self.reactions):
            rates[k] = r.rate
            for j, s in enumerate(r.reactants):
                reac[k, j] = self.index(s)
            for s, d in r.change.items():
                i = self.index(s)
                if i not in clamped:
                    stoich[k, i] += d
        return rates, reac, stoich


def _propensity(rate, reactants, x):
    a = rate
    if len(reactants) == 2 and reactants[0] == reactants[1]:
        n = x[reactants[0]]
        return a * n * (n - 1) / 2
    for i in reactants:
        a = a * x[i]
    return a


def propensities(system: ReactionSystem, counts=None):
    """``a(r) = c(r) X_i X_j`` (``X (X-1) / 2`` for a repeated reactant); returns ``(a, a0)``."""
    x = np.asarray(system.initial if counts is None else counts, dtype=np.int64)
    a = np.array(
        [_propensity(r.rate, [system.index(s) for s in r.reactants], x) for r in system.reactions],
        dtype=float,
    )
    return a, float(a.sum())


def gillespie_step(system: ReactionSystem, rng: np.random.Generator, counts=None):
    """One direct-method event: ``(dt, reaction index, new counts)``."""
    x = np.asarray(system.initial if counts is None else counts, dtype=np.int64)
    a, a0 = propensities(system, x)
    if a0 <= 0:
        raise StalledError("total propensity is zero")
    u1, u2 = rng.random(2)
    dt = -np.log1p(-u1) / a0
    r = int(np.searchsorted(np.cumsum(a), u2 * a0, side="right"))
    r = min(r, len(a) - 1)
    while a[r] == 0:  # guard against round-off landing on an empty bin
        r -= 1
    _, _, stoich = system.arrays()
    return dt, r, x + stoich[r]


def macromolecule_reactions(
    spec: MacromoleculeSpec,
    prefix: str,
    messengers: Sequence[str],
    volume: float = 1.0,
) -> tuple[list, list]:
    """Species (one per conformational state) and reactions of a population.

    Binding uses the bimolecular constant ``coefficient / (V * 602.214)``
    against the messenger species; every other transition is unimolecular.
    Binding consumes one messenger molecule and release returns one.
    """
    names = [f"{prefix}{label(s)}" for s in spec.states]
    site_messenger = {}
    for t in spec.transitions:
        if t.messenger is not None:
            for i in range(spec.n_r):
                if t.source[i] == 0 and t.target[i] == 1:
                    site_messenger.setdefault(i, t.messenger)
    reactions = []
    for t in spec.transitions:
        src = f"{prefix}{label(t.source)}"
        dst = f"{prefix}{label(t.target)}"
        change = {src: -1, dst: 1}
        for i in range(spec.n_r):
            if i in site_messenger and t.source[i] != t.target[i]:
                msg = messengers[site_messenger[i]]
                change[msg] = change.get(msg, 0) + (t.source[i] - t.target[i])
        if t.messenger is not None:
            rate = bimolecular_constant(float(t.coefficient), volume)
            reactions.append(Reaction(rate, (src, messengers[t.messenger]), change, f"{src}->{dst}"))
        else:
            reactions.append(Reaction(float(t.coefficient), (src,), change, f"{src}->{dst}"))
    return names, reactions
