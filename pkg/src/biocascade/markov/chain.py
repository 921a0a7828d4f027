"""Discrete-step chains built from macromolecule specs, and their stationary laws.

Matrices are column-stochastic: ``T[i, j]`` is the probability of moving
from state ``j`` to state ``i`` in one step. Exact inputs (ints, Fractions)
give object arrays of Fractions; any float input switches to float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from biocascade.errors import (
    DimensionMismatchError,
    NegativeRateError,
    ReducibleError,
    TimeStepTooLargeError,
)
from biocascade.markov.linalg import det_exact, minor
from biocascade.markov.spec import MacromoleculeSpec

STOCHASTIC_ATOL = 1e-12


def _is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    matrix: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError("transition matrix must be square")
        if self.exact:
            ok_entries = all(0 <= v <= 1 for v in m.flat)
            ok_cols = all(sum(m[:, j]) == 1 for j in range(m.shape[1]))
        else:
            ok_entries = bool(np.all(m >= -STOCHASTIC_ATOL) and np.all(m <= 1 + STOCHASTIC_ATOL))
            ok_cols = bool(np.allclose(m.sum(axis=0), 1.0, rtol=0, atol=1e-10))
        if not ok_entries:
            raise ValueError("transition probabilities must lie in [0, 1]")
        if not ok_cols:
            raise ValueError("every column of a transition matrix must sum to 1")

    @property
    def exact(self) -> bool:
        return self.matrix.dtype == object

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_rows(cls, rows, labels=()):
        rows = [list(r) for r in rows]
        flat = [v for r in rows for v in r]
        if _is_exact(flat):
            arr = np.empty((len(rows), len(rows)), dtype=object)
            for i, r in enumerate(rows):
                for j, v in enumerate(r):
                    arr[i, j] = Fraction(v)
        else:
            arr = np.array(rows, dtype=float)
        return cls(arr, tuple(labels))


def rate_matrix(spec: MacromoleculeSpec, x: Sequence) -> np.ndarray:
    """Off-diagonal rates ``R[i, j]`` for ``j -> i`` at concentrations ``x``."""
    x = list(x)
    if len(x) < spec.n_messengers:
        raise DimensionMismatchError(f"spec uses {spec.n_messengers} messengers, x has {len(x)}")
    if any(v < 0 for v in x):
        raise NegativeRateError("concentrations must be >= 0")
    exact = _is_exact(x) and _is_exact([t.coefficient for t in spec.transitions])
    n = spec.size
    if exact:
        x = [Fraction(v) for v in x]
        rates = np.full((n, n), Fraction(0), dtype=object)
    else:
        x = [float(v) for v in x]
        rates = np.zeros((n, n))
    for t in spec.transitions:
        i, j = spec.index(t.target), spec.index(t.source)
        r = t.rate(x)
        rates[i, j] = rates[i, j] + (r if exact else float(r))
    return rates


def admissible_dt(spec: MacromoleculeSpec, x: Sequence, safety=2):
    """Step so that every column's exit mass is at most ``1 / safety``."""
    rates = rate_matrix(spec, x)
    exit_max = max(sum(rates[:, j]) for j in range(rates.shape[1]))
    if exit_max == 0:
        return Fraction(1) if rates.dtype == object else 1.0
    if rates.dtype == object:
        return 1 / (safety * exit_max)
    return 1.0 / (safety * float(exit_max))


def build_chain(spec: MacromoleculeSpec, x: Sequence, dt) -> TransitionMatrix:
    """Uniformized chain ``T = I + R dt`` with the diagonal absorbing the rest."""
    rates = rate_matrix(spec, x)
    exact = rates.dtype == object and isinstance(dt, (int, Fraction))
    if exact:
        dt = Fraction(dt)
    else:
        rates = rates.astype(float)
        dt = float(dt)
    if dt <= 0:
        raise TimeStepTooLargeError("dt must be > 0")
    off = rates * dt
    exits = [sum(off[:, j]) for j in range(off.shape[1])]
    for j, s in enumerate(exits):
        if s > 1:
            raise TimeStepTooLargeError(
                f"dt={dt} gives exit probability {float(s):.6g} > 1 from state {spec.labels[j]}"
            )
    T = off.copy()
    for j, s in enumerate(exits):
        T[j, j] = 1 - s
    return TransitionMatrix(T, spec.labels)


def _as_matrix(T):
    return T.matrix if isinstance(T, TransitionMatrix) else np.asarray(T)


def closed_classes(T) -> list:
    """Recurrent communicating classes (SCCs with no exit) of the chain."""
    m = _as_matrix(T)
    n = m.shape[0]
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            if i != j and m[i, j] > 0:
                adj[j, i] = True  # edge j -> i
    n_comp, comp = connected_components(adj, directed=True, connection="strong")
    leaves = set(range(n_comp))
    for j in range(n):
        for i in range(n):
            if adj[j, i] and comp[i] != comp[j]:
                leaves.discard(comp[j])
    return [sorted(int(s) for s in range(n) if comp[s] == c) for c in sorted(leaves)]


def is_irreducible(T) -> bool:
    classes = closed_classes(T)
    return len(classes) == 1 and len(classes[0]) == _as_matrix(T).shape[0]


def stationary(T) -> np.ndarray:
    """Stationary distribution from the principal minors of ``I - T``.

    ``pi_i = det((I-T)^{i}) / sum_k det((I-T)^{k})``, where ``^{k}`` deletes
    row and column ``k``. Exact for Fraction matrices; float matrices use
    LU-based determinants. The chain must have a single closed class
    (irreducible chains, or chains whose extra states are transient);
    otherwise the stationary law is not unique and ReducibleError is raised.
    """
    m = _as_matrix(T)
    n = m.shape[0]
    if len(closed_classes(m)) != 1:
        raise ReducibleError("chain has more than one closed class; stationary law is not unique")
    if m.dtype == object:
        M = [[(1 if i == j else 0) - m[i, j] for j in range(n)] for i in range(n)]
        dets = [det_exact(minor(M, k)) if n > 1 else Fraction(1) for k in range(n)]
        total = sum(dets)
        return np.array([d / total for d in dets], dtype=object)
    M = np.eye(n) - m
    dets = np.array([np.linalg.det(np.delete(np.delete(M, k, 0), k, 1)) if n > 1 else 1.0 for k in range(n)])
    dets = np.maximum(dets, 0.0)
    return dets / dets.sum()


def power_iteration(T, tol: float = 1e-15, max_squarings: int = 200) -> np.ndarray:
    """Stationary law of the lazy chain ``(I + T) / 2`` by repeated squaring."""
    m = _as_matrix(T).astype(float)
    n = m.shape[0]
    P = 0.5 * (np.eye(n) + m)
    for _ in range(max_squarings):
        P_next = P @ P
        P_next /= P_next.sum(axis=0, keepdims=True)
        if np.max(np.abs(P_next - P)) < tol:
            P = P_next
            break
        P = P_next
    pi = P @ np.full(n, 1.0 / n)
    return pi / pi.sum()


def residual(T, pi) -> float:
    """``max |T pi - pi|``."""
    m = _as_matrix(T)
    pi = np.asarray(pi)
    return float(np.max(np.abs(m.dot(pi) - pi)))


def detailed_balance_residual(T, pi) -> float:
    """``max_{i,j} |pi_i P(i->j) - pi_j P(j->i)|`` with ``P(j->i) = T[i, j]``."""
    m = _as_matrix(T)
    pi = np.asarray(pi)
    if m.shape[0] != len(pi):
        raise DimensionMismatchError("pi and T sizes differ")
    flow = m * pi[np.newaxis, :]  # flow[i, j] = pi_j P(j->i)
    return float(np.max(np.abs(flow - flow.T))) if len(pi) else 0.0


def stationary_distribution(spec: MacromoleculeSpec, x: Sequence, dt=None) -> np.ndarray:
    if dt is None:
        dt = admissible_dt(spec, x)
    return stationary(build_chain(spec, x, dt))


def active_probability(spec: MacromoleculeSpec, x: Sequence, dt=None):
    """Stationary mass on the spec's active states."""
    pi = stationary_distribution(spec, x, dt)
    mask = spec.active_mask()
    return sum((p for p, a in zip(pi, mask) if a), Fraction(0) if pi.dtype == object else 0.0)
