"""Macromolecule specifications: conformational bits and transition rates.

A state is a tuple of bits ``(R_1..R_nR, Q_1..Q_nQ)``; its label is the bit
string, e.g. ``"101"``. Binding transitions (an R bit going 0 -> 1) have a
rate proportional to a messenger concentration; every other transition has
a constant rate, which may depend on the full current state.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from biocascade.errors import NegativeRateError, SpecError
from biocascade.rfnc import to_fraction


def label(state: Sequence[int]) -> str:
    return "".join(str(b) for b in state)


def parse_state(text: str) -> tuple:
    if not text or any(c not in "01" for c in text):
        raise SpecError(f"bad state label {text!r}")
    return tuple(int(c) for c in text)


@dataclass(frozen=True)
class Transition:
    source: tuple
    target: tuple
    coefficient: object
    messenger: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        coeff = self.coefficient
        if not isinstance(coeff, float):
            coeff = to_fraction(coeff)
        if coeff < 0:
            raise NegativeRateError(f"negative rate {coeff} on {label(self.source)}->{label(self.target)}")
        object.__setattr__(self, "coefficient", coeff)

    def rate(self, x):
        if self.messenger is None:
            return self.coefficient
        c = x[self.messenger]
        if c < 0:
            raise NegativeRateError(f"negative concentration x[{self.messenger}] = {c}")
        return self.coefficient * c


@dataclass(frozen=True)
class MacromoleculeSpec:
    """Conformational Markov chain of one macromolecule species.

    ``active`` holds patterns over the full bit string (``'*'`` is a
    wildcard); a state is active when it matches any of them. ``states``
    restricts the chain to a subset of the ``2**n_m`` configurations.
    """

    n_r: int
    n_q: int
    transitions: tuple
    active: tuple = ()
    states: tuple | None = None
    bit_names: tuple | None = None
    allow_multi_bit: bool = False
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n_m = self.n_r + self.n_q
        if n_m < 1:
            raise SpecError("a macromolecule needs at least one bit")
        states = self.states
        if states is None:
            states = tuple(itertools.product((0, 1), repeat=n_m))
        states = tuple(tuple(s) for s in states)
        if len(set(states)) != len(states) or any(len(s) != n_m or set(s) - {0, 1} for s in states):
            raise SpecError("states must be distinct bit tuples of length n_r + n_q")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if self.bit_names is not None:
            names = tuple(self.bit_names)
            if len(names) != n_m:
                raise SpecError("need one bit name per bit")
            object.__setattr__(self, "bit_names", names)
        active = tuple(self._normalize_pattern(p) for p in self.active)
        object.__setattr__(self, "active", active)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(states)})
        seen = set()
        for t in self.transitions:
            self._check_transition(t)
            key = (t.source, t.target)
            if key in seen:
                raise SpecError(f"duplicate transition {label(t.source)}->{label(t.target)}")
            seen.add(key)
        if not self.is_irreducible():
            raise SpecError("chain is not irreducible on its state set for positive concentrations")

    def _normalize_pattern(self, pattern):
        pattern = str(pattern)
        n_m = self.n_r + self.n_q
        if len(pattern) == self.n_q and self.n_q != n_m:
            pattern = "*" * self.n_r + pattern
        if len(pattern) != n_m or set(pattern) - set("01*"):
            raise SpecError(f"bad active pattern {pattern!r}")
        return pattern

    def _check_transition(self, t: Transition):
        for s in (t.source, t.target):
            if s not in self._index:
                raise SpecError(f"transition uses state {label(s)} outside the state set")
        flips = [i for i in range(len(t.source)) if t.source[i] != t.target[i]]
        if not flips:
            raise SpecError("self-transitions are implicit")
        if len(flips) > 1 and not self.allow_multi_bit:
            raise SpecError(f"{label(t.source)}->{label(t.target)} changes more than one bit")
        binding = any(i < self.n_r and t.source[i] == 0 for i in flips)
        if binding and t.messenger is None:
            raise SpecError(f"binding transition {label(t.source)}->{label(t.target)} needs a messenger")
        if not binding and t.messenger is not None:
            raise SpecError(f"transition {label(t.source)}->{label(t.target)} must have a constant rate")
        if t.messenger is not None and t.messenger < 0:
            raise SpecError("messenger index must be >= 0")

    @property
    def n_m(self) -> int:
        return self.n_r + self.n_q

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def n_messengers(self) -> int:
        used = [t.messenger for t in self.transitions if t.messenger is not None]
        return max(used) + 1 if used else 0

    @property
    def labels(self) -> tuple:
        return tuple(label(s) for s in self.states)

    def index(self, state) -> int:
        if isinstance(state, str):
            state = parse_state(state)
        return self._index[tuple(state)]

    def is_active(self, state) -> bool:
        return any(all(p == "*" or int(p) == b for p, b in zip(pat, state)) for pat in self.active)

    def active_mask(self) -> tuple:
        return tuple(self.is_active(s) for s in self.states)

    def _adjacency(self, reverse=False) -> dict:
        adj: dict = {}
        for t in self.transitions:
            if t.coefficient != 0:
                a, b = (t.target, t.source) if reverse else (t.source, t.target)
                adj.setdefault(a, []).append(b)
        return adj

    def reachable_from(self, start, reverse: bool = False) -> set:
        """States reachable along transitions with nonzero coefficient."""
        adj = self._adjacency(reverse)
        start = tuple(start)
        seen = {start}
        queue = deque([start])
        while queue:
            for nxt in adj.get(queue.popleft(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    def is_irreducible(self) -> bool:
        """Strong connectivity assuming every messenger is present."""
        first = self.states[0]
        n = len(self.states)
        return len(self.reachable_from(first)) == n and len(self.reachable_from(first, reverse=True)) == n

    def to_dict(self) -> dict:
        def coeff(c):
            return str(c) if isinstance(c, Fraction) else c

        data = {
            "n_r": self.n_r,
            "n_q": self.n_q,
            "rates": [
                [label(t.source), label(t.target), coeff(t.coefficient), "const" if t.messenger is None else t.messenger]
                for t in self.transitions
            ],
            "active": list(self.active),
        }
        if self.bit_names is not None:
            data["bits"] = list(self.bit_names)
        if len(self.states) != 2 ** self.n_m:
            data["states"] = [label(s) for s in self.states]
        if self.allow_multi_bit:
            data["allow_multi_bit"] = True
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "MacromoleculeSpec":
        try:
            bits = data.get("bits")
            n_r = int(data["n_r"])
            n_q = int(data["n_q"]) if "n_q" in data else len(bits) - n_r
            transitions = []
            for src, dst, c, msg in data["rates"]:
                messenger = None if msg in ("const", None) else int(msg)
                transitions.append(Transition(parse_state(src), parse_state(dst), c, messenger))
            states = data.get("states")
            if states is not None:
                states = tuple(parse_state(s) for s in states)
            return cls(
                n_r,
                n_q,
                tuple(transitions),
                active=tuple(data.get("active", ())),
                states=states,
                bit_names=tuple(bits) if bits else None,
                allow_multi_bit=bool(data.get("allow_multi_bit", False)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(f"malformed macromolecule spec: {exc}") from exc


def load_spec(path) -> MacromoleculeSpec:
    with open(path) as fh:
        return MacromoleculeSpec.from_dict(json.load(fh))


def single_site(beta, alpha, messenger: int = 0, active: str = "1") -> MacromoleculeSpec:
    """One receptor site: binds at ``beta * x``, releases at ``alpha``."""
    return MacromoleculeSpec(
        n_r=1,
        n_q=0,
        transitions=(
            Transition((0,), (1,), beta, messenger),
            Transition((1,), (0,), alpha),
        ),
        active=(active,),
        bit_names=("R",),
    )


def two_site_receptor(
    beta,
    alpha0,
    alpha1,
    k_act: Sequence,
    k_deact: Sequence,
    messengers: Iterable[int] = (0, 0),
) -> MacromoleculeSpec:
    """Two receptor sites and one activity bit, bit order ``(R1, R2, Q)``.

    Each free site binds at ``beta * x``; a bound site releases at
    ``alpha0`` when inactive and ``alpha1`` when active; Q switches on at
    ``k_act[m]`` and off at ``k_deact[m]`` with ``m`` bound sites.
    """
    messengers = tuple(messengers)
    transitions = []
    for state in itertools.product((0, 1), repeat=3):
        r = state[:2]
        q = state[2]
        for site in (0, 1):
            nxt = list(state)
            nxt[site] = 1 - state[site]
            if state[site] == 0:
                transitions.append(Transition(state, tuple(nxt), beta, messengers[site]))
            else:
                transitions.append(Transition(state, tuple(nxt), alpha1 if q else alpha0))
        m = sum(r)
        nxt = (r[0], r[1], 1 - q)
        transitions.append(Transition(state, nxt, k_deact[m] if q else k_act[m]))
    return MacromoleculeSpec(2, 1, tuple(transitions), active=("**1",), bit_names=("R1", "R2", "Q"))
