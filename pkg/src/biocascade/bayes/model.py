"""Discrete subjective models ``P(S, F, K) = P(S, F) P(K | S, F)``.

Tables are stored exactly as Fractions, indexed ``[s][f]``. Observations
are opaque labels selecting one likelihood table; input vectors flatten the
``(s, f)`` index as ``i = s * n_f + f``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from biocascade.errors import ModelError, ZeroReferenceError
from biocascade.rfnc import Const, Input, Product, Quotient, RfncExpr, Sum, to_fraction


def _table(rows, n_s, n_f, what):
    if len(rows) == n_s * n_f and not isinstance(rows[0], (list, tuple)):
        rows = [rows[s * n_f:(s + 1) * n_f] for s in range(n_s)]
    if len(rows) != n_s or any(len(r) != n_f for r in rows):
        raise ModelError(f"{what} must be {n_s} x {n_f}")
    return tuple(tuple(to_fraction(v) for v in row) for row in rows)


@dataclass(frozen=True)
class BayesModel:
    """Prior ``P(S, F)`` and labelled likelihood tables ``P(k | S, F)``.

    ``prior`` and each likelihood may be given nested (``n_s`` rows of
    ``n_f``) or flat in row-major order. Construction validates that the
    prior is a distribution, every likelihood entry is in [0, 1], and the
    reference cell ``(0, 0)`` is nonzero everywhere it matters.
    """

    n_s: int
    n_f: int
    prior: tuple
    likelihoods: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_s < 2 or self.n_f < 1:
            raise ModelError("need n_s >= 2 and n_f >= 1")
        prior = _table(self.prior, self.n_s, self.n_f, "prior")
        if any(p < 0 for row in prior for p in row) or sum(map(sum, prior)) != 1:
            raise ModelError("prior entries must be >= 0 and sum to 1")
        if prior[0][0] == 0:
            raise ZeroReferenceError("prior P([S=0],[F=0]) is zero")
        lik = {}
        for label, rows in self.likelihoods.items():
            t = _table(rows, self.n_s, self.n_f, f"likelihood {label!r}")
            if any(not 0 <= p <= 1 for row in t for p in row):
                raise ModelError(f"likelihood {label!r} entries must lie in [0, 1]")
            if t[0][0] == 0:
                raise ZeroReferenceError(f"likelihood P({label}|[S=0],[F=0]) is zero")
            lik[str(label)] = t
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "likelihoods", lik)

    @property
    def dimension(self) -> int:
        return self.n_s * self.n_f

    @property
    def labels(self) -> list[str]:
        return list(self.likelihoods)

    def likelihood(self, k) -> tuple:
        try:
            return self.likelihoods[str(k)]
        except KeyError:
            raise KeyError(f"observation {k!r} is not registered") from None

    def prior_ratios(self) -> tuple:
        """Flattened ``a_{s,f} = P(s, f) / P(0, 0)``."""
        ref = self.prior[0][0]
        return tuple(p / ref for row in self.prior for p in row)

    def to_dict(self) -> dict:
        return {
            "n_s": self.n_s,
            "n_f": self.n_f,
            "prior": [str(p) for row in self.prior for p in row],
            "likelihoods": {k: [str(p) for row in t for p in row] for k, t in self.likelihoods.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "BayesModel":
        try:
            return cls(
                n_s=int(data["n_s"]),
                n_f=int(data.get("n_f", 1)),
                prior=list(data["prior"]),
                likelihoods={k: list(v) for k, v in data.get("likelihoods", {}).items()},
            )
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ModelError(f"malformed model definition: {exc}") from exc


def load_model(path) -> BayesModel:
    with open(path) as fh:
        return BayesModel.from_dict(json.load(fh))


def posterior_ratios(model: BayesModel, k) -> tuple:
    """``P([S=s] | k) / P([S=0] | k)`` by marginalizing F in the joint table."""
    lik = model.likelihood(k)
    marg = [sum(model.prior[s][f] * lik[s][f] for f in range(model.n_f)) for s in range(model.n_s)]
    if marg[0] == 0:
        raise ZeroReferenceError("P([S=0] | k) is zero; ratios undefined")
    return tuple(m / marg[0] for m in marg)


def likelihood_inputs(model: BayesModel, k) -> tuple:
    """Input vector ``x_{s,f} = P(k|s,f) / P(k|0,0)``, flattened row-major."""
    lik = model.likelihood(k)
    ref = lik[0][0]
    if ref == 0:
        raise ZeroReferenceError("P(k|[S=0],[F=0]) is zero")
    return tuple(p / ref for row in lik for p in row)


def _weighted_sum(coeffs, indices):
    """``sum(a_i * x_i)`` as an expression; ``x_0`` is the constant 1."""
    terms = []
    for a, i in zip(coeffs, indices):
        if a == 0:
            continue
        terms.append(Const(a) if i == 0 else Product(Const(a), Input(i)))
    if not terms:
        return Const(0)
    node = terms[0]
    for t in terms[1:]:
        node = Sum(node, t)
    return node


def model_to_rfnc(model: BayesModel) -> tuple[list[str], list[RfncExpr]]:
    """Posterior ratios as RFNCs of the likelihood-ratio input vector.

    Returns the observation labels (whose input vectors come from
    :func:`likelihood_inputs`) and one expression per value of S, with
    ``y_s = sum_f a_{s,f} x_{s,f} / sum_f a_{0,f} x_{0,f}``. The reference
    component ``x_{0,0}`` is identically 1 and is folded into constants.
    """
    a = model.prior_ratios()
    n_f = model.n_f
    ref_idx = list(range(n_f))
    denominator = _weighted_sum([a[i] for i in ref_idx], ref_idx)
    exprs: list[RfncExpr] = [Const(1)]
    for s in range(1, model.n_s):
        idx = [s * n_f + f for f in range(n_f)]
        numerator = _weighted_sum([a[i] for i in idx], idx)
        if denominator == Const(1):
            exprs.append(numerator)
        else:
            exprs.append(Quotient(numerator, denominator))
    return model.labels, exprs


def enumerate_posterior(model: BayesModel, k) -> tuple:
    """Brute-force ``P(S | k)`` over every joint cell; used as an oracle."""
    lik = model.likelihood(k)
    joint = {}
    for s, f in itertools.product(range(model.n_s), range(model.n_f)):
        joint[s, f] = model.prior[s][f] * lik[s][f]
    evidence = sum(joint.values())
    if evidence == 0:
        raise ZeroReferenceError("observation has zero evidence")
    return tuple(sum(joint[s, f] for f in range(model.n_f)) / evidence for s in range(model.n_s))


def enumerate_posterior_ratios(model: BayesModel, k) -> tuple:
    post = enumerate_posterior(model, k)
    if post[0] == 0:
        raise ZeroReferenceError("P([S=0] | k) is zero")
    return tuple(p / post[0] for p in post)


def random_model(
    rng: random.Random,
    max_s: int = 4,
    max_f: int = 4,
    max_observations: int = 5,
    allow_zeros: bool = True,
) -> BayesModel:
    """Random model with exact rational tables satisfying every invariant."""
    n_s = rng.randint(2, max_s)
    n_f = rng.randint(1, max_f)
    lo = 0 if allow_zeros else 1
    weights = [rng.randint(lo, 9) for _ in range(n_s * n_f)]
    weights[0] = rng.randint(1, 9)
    total = sum(weights)
    prior = [Fraction(w, total) for w in weights]
    likelihoods = {}
    for j in range(rng.randint(1, max_observations)):
        table = [Fraction(rng.randint(lo, 12), 12) for _ in range(n_s * n_f)]
        table[0] = Fraction(rng.randint(1, 12), 12)
        likelihoods[f"k{j}"] = table
    return BayesModel(n_s, n_f, prior, likelihoods)


def basic_model(a, likelihood_ratio) -> BayesModel:
    """Binary S with prior odds ``a`` and one observation of ratio ``x``.

    The single observation ``"k"`` has ``P(k|S=0) = 1/(1+x)`` and
    ``P(k|S=1) = x/(1+x)``.
    """
    a = to_fraction(a)
    x = to_fraction(likelihood_ratio)
    return BayesModel(
        n_s=2,
        n_f=1,
        prior=[1 / (1 + a), a / (1 + a)],
        likelihoods={"k": [1 / (1 + x), x / (1 + x)]},
    )
