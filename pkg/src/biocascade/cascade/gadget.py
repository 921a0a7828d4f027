"""Producer/remover gadgets computing +, x and / on two messenger concentrations.

A gadget macromolecule has bits ``(R1, R2, Q)``: R1 binds ``y1``, R2 binds
``y2``, Q is catalytic activity. Its stationary law gives relative weight
``w_s * y1**R1 * y2**R2`` to state ``s``, where the eight weights are named

    b0: 000  b1: 100  b2: 010  b3: 110   (inactive)
    a0: 001  a1: 101  a2: 011  a3: 111   (active)

so the active probability is
``(a0 + a1 y1 + a2 y2 + a3 y1 y2) / ((a0+b0) + (a1+b1) y1 + (a2+b2) y2 + (a3+b3) y1 y2)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from biocascade.errors import UnreachableStateError
from biocascade.markov.spec import MacromoleculeSpec, Transition, label
from biocascade.rfnc import Polynomial, RationalPolyPair, to_fraction

DEFAULT_STATE = (0, 0, 0)


def _state(active: int, i: int) -> tuple:
    return (i & 1, (i >> 1) & 1, active)


B_STATES = tuple(_state(0, i) for i in range(4))
A_STATES = tuple(_state(1, i) for i in range(4))


def _four(values, name):
    values = tuple(to_fraction(v) for v in values)
    if len(values) != 4:
        raise ValueError(f"{name} needs four entries")
    if any(v < 0 for v in values):
        raise ValueError(f"{name} entries must be >= 0")
    return values


@dataclass(frozen=True)
class GadgetParams:
    """State weights of a producer (a, b) and remover (a', b') plus ``a_P n / (a_R m)``."""

    a: tuple
    b: tuple
    a_prime: tuple
    b_prime: tuple
    ratio: Fraction

    def __post_init__(self):
        for name in ("a", "b", "a_prime", "b_prime"):
            object.__setattr__(self, name, _four(getattr(self, name), name))
        ratio = to_fraction(self.ratio)
        if ratio <= 0:
            raise ValueError("flux ratio must be > 0")
        object.__setattr__(self, "ratio", ratio)
        if self.b[0] != 1 or self.b_prime[0] != 1:
            raise ValueError("resting-state weights b0 and b'0 are fixed to 1")

    def producer_weights(self) -> dict:
        return state_weights(self.a, self.b)

    def remover_weights(self) -> dict:
        return state_weights(self.a_prime, self.b_prime)


def state_weights(a: Sequence, b: Sequence) -> dict:
    """Map each of the eight states to its weight, dropping zero weights."""
    out = {}
    for i in range(4):
        if b[i]:
            out[B_STATES[i]] = to_fraction(b[i])
        if a[i]:
            out[A_STATES[i]] = to_fraction(a[i])
    return out


GADGETS = {
    "sum": GadgetParams(
        a=(0, 1, 1, 0), b=(1, 1, 1, 0), a_prime=(1, 0, 0, 0), b_prime=(1, 4, 4, 0), ratio=Fraction(1, 2)
    ),
    "product": GadgetParams(
        a=(0, 0, 0, 1), b=(1, 1, 0, 1), a_prime=(1, 0, 0, 0), b_prime=(1, 2, 0, 4), ratio=Fraction(1, 2)
    ),
    "quotient": GadgetParams(
        a=(0, 1, 0, 0),
        b=(1, 1, 1, 0),
        a_prime=(0, 0, Fraction(1, 2), 0),
        b_prime=(1, 2, Fraction(1, 2), 0),
        ratio=Fraction(1, 2),
    ),
}

_OP_NAMES = {"sum": "sum", "+": "sum", "product": "product", "*": "product", "quotient": "quotient", "/": "quotient"}


def gadget(op) -> GadgetParams:
    """Parameter set for ``op`` given as a name, symbol, or rfnc combinator class."""
    key = getattr(op, "__name__", op)
    key = _OP_NAMES.get(str(key).lower())
    if key is None:
        raise ValueError(f"unknown gadget operation {op!r}")
    return GADGETS[key]


def _y_poly(i: int) -> Polynomial:
    mono = tuple((v, 1) for v, bit in ((0, i & 1), (1, (i >> 1) & 1)) if bit)
    return Polynomial({mono: Fraction(1)})


def activity_fraction(a: Sequence, b: Sequence) -> RationalPolyPair:
    """Active probability as a polynomial ratio in ``y1`` (var 0) and ``y2`` (var 1)."""
    num = Polynomial()
    den = Polynomial()
    for i in range(4):
        y = _y_poly(i)
        num = num + y * to_fraction(a[i])
        den = den + y * (to_fraction(a[i]) + to_fraction(b[i]))
    return RationalPolyPair(num, den)


def gadget_output(params: GadgetParams) -> RationalPolyPair:
    """``z = ratio * P(active | producer) / P(active | remover)`` as a polynomial ratio."""
    p = activity_fraction(params.a, params.b)
    r = activity_fraction(params.a_prime, params.b_prime)
    return RationalPolyPair(p.numerator * r.denominator * params.ratio, p.denominator * r.numerator)


def _neighbours(state: tuple, allowed) -> list:
    out = []
    for bit in range(3):
        nxt = list(state)
        nxt[bit] = 1 - nxt[bit]
        nxt = tuple(nxt)
        if nxt in allowed:
            out.append((bit, nxt))
    return out


def check_reachable(weights: Mapping) -> None:
    if DEFAULT_STATE not in weights:
        raise UnreachableStateError("the resting state 000 must have a nonzero weight")
    seen = {DEFAULT_STATE}
    queue = deque([DEFAULT_STATE])
    while queue:
        for _, nxt in _neighbours(queue.popleft(), weights):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    missing = sorted(set(weights) - seen)
    if missing:
        raise UnreachableStateError(
            "no path of nonzero-weight states joins " + ", ".join(label(s) for s in missing) + " to 000"
        )


def gadget_state_params(weights: Mapping, beta=1, k_act=1, messengers=(0, 1)) -> MacromoleculeSpec:
    """Reversible (R1, R2, Q) chain whose stationary weights are ``weights``.

    Only nonzero-weight states are kept; every single-bit move between two
    kept states is a transition. Binding runs at ``beta * y`` and its
    reverse at ``beta * w_s / w_t``; activation runs at ``k_act`` and its
    reverse at ``k_act * w_s / w_t`` (``s`` the state with the bit clear,
    ``t`` the state with it set). Every edge then satisfies detailed
    balance against the weights, so cycles are balanced too.
    """
    weights = {tuple(s): to_fraction(w) for s, w in weights.items() if w != 0}
    check_reachable(weights)
    beta = to_fraction(beta) if not isinstance(beta, float) else beta
    k_act = to_fraction(k_act) if not isinstance(k_act, float) else k_act
    states = sorted(weights)
    transitions = []
    for s in states:
        for bit, t in _neighbours(s, weights):
            if s[bit] == 1:
                continue  # each edge is emitted from its cleared end
            ratio = weights[s] / weights[t]
            if bit < 2:
                transitions.append(Transition(s, t, beta, messengers[bit]))
                transitions.append(Transition(t, s, beta * ratio))
            else:
                transitions.append(Transition(s, t, k_act))
                transitions.append(Transition(t, s, k_act * ratio))
    return MacromoleculeSpec(
        2, 1, tuple(transitions), active=("**1",), states=tuple(states), bit_names=("R1", "R2", "Q")
    )
