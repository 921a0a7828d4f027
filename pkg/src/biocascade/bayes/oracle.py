"""Joint-enumeration oracles for metamodel inference.

These sum the unnormalized joint over every configuration of the binary
searched variables, conditioned on all coherence variables being 1. They
are exponential and exist to check the closed-form recursion.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from biocascade.bayes.metamodel import MetaModel, MetaNode
from biocascade.errors import DivisionByZeroError


def _flatten(meta):
    """Post-order node list; children referenced by position."""
    nodes = []

    def walk(m):
        if isinstance(m, MetaNode):
            left = walk(m.left)
            right = walk(m.right)
            nodes.append((m, left, right))
        else:
            nodes.append((m, None, None))
        return len(nodes) - 1

    walk(meta)
    return nodes


def enumerate_weights(meta: MetaModel, x, prune: bool = True) -> tuple:
    """Unnormalized ``(W(S_root=0), W(S_root=1))`` by exhaustive enumeration.

    With ``prune`` set, branches whose coherence factor is exactly 0 are
    skipped (they contribute nothing); otherwise all ``2**n`` configurations
    are visited.
    """
    nodes = _flatten(meta)
    leaf_pos = [i for i, (m, _, _) in enumerate(nodes) if not isinstance(m, MetaNode)]
    inner_pos = [i for i, (m, _, _) in enumerate(nodes) if isinstance(m, MetaNode)]
    leaf_factor = {}
    for i in leaf_pos:
        m = nodes[i][0]
        prior = m.prior()
        lik = m.likelihood(x)
        leaf_factor[i] = (prior[0] * lik[0], prior[1] * lik[1])
    half = Fraction(1, 2)
    totals = [Fraction(0), Fraction(0)]
    values = [0] * len(nodes)

    def descend(j, weight):
        if j == len(inner_pos):
            totals[values[-1]] += weight
            return
        i = inner_pos[j]
        node, left, right = nodes[i]
        for s in (0, 1):
            factor = node.q[s, values[left], values[right]]
            if prune and factor == 0:
                continue
            values[i] = s
            descend(j + 1, weight * half * factor)

    for assignment in itertools.product((0, 1), repeat=len(leaf_pos)):
        weight = Fraction(1)
        for i, v in zip(leaf_pos, assignment):
            values[i] = v
            weight *= leaf_factor[i][v]
        if prune and weight == 0:
            continue
        descend(0, weight)
    return totals[0], totals[1]


def enumerate_odds(meta: MetaModel, x, prune: bool = True):
    w0, w1 = enumerate_weights(meta, x, prune=prune)
    if w0 == 0:
        raise DivisionByZeroError("P([S=0] | k) is zero under enumeration")
    return w1 / w0


def enumerate_combined(models, x) -> tuple:
    """Posterior ratios of the one-hot (Psi) combination by enumeration.

    Enumerates ``S`` in ``{0..n}`` and every ``(S_1..S_n)``, with uniform
    prior on ``S`` and ``P([Psi=1] | ...) = 1`` exactly on the one-hot
    configurations (``S = 0`` pairs with all zeros).
    """
    weights = [enumerate_weights(m, x) for m in models]
    n = len(models)
    post = [Fraction(0)] * (n + 1)
    for s in range(n + 1):
        for subs in itertools.product((0, 1), repeat=n):
            onehot = all(v == int(i + 1 == s) for i, v in enumerate(subs))
            if not onehot:
                continue
            w = Fraction(1, n + 1)
            for i, v in enumerate(subs):
                w *= weights[i][v]
            post[s] += w
    if post[0] == 0:
        raise DivisionByZeroError("reference configuration has zero weight")
    return tuple(p / post[0] for p in post)
