"""Compile an RFNC into a generative metamodel with coherence variables.

Each internal node owns a fresh binary searched variable ``S`` with a
uniform prior, tied to the searched variables of its two submodels by a
coherence variable ``Lambda`` with ``P([Lambda=1] | S=i, S1=j, S2=k) =
q[i, j, k]``. All submodels share the observation through ``Gamma`` (a
Dirac on ``K = K1 = K2``), which here means every leaf reads the same input
vector ``x``. Conditioning every ``Lambda`` and ``Gamma`` on 1 gives the
posterior odds

    (q100 + q110 h1 + q101 h2 + q111 h1 h2) / (q000 + q010 h1 + q001 h2 + q011 h1 h2)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from biocascade.bayes.model import BayesModel
from biocascade.errors import DivisionByZeroError, ModelError
from biocascade.rfnc import Const, Input, Product, Quotient, RfncExpr, Sum, to_fraction

STATES3 = tuple(itertools.product((0, 1), repeat=3))


def _q_table(ones):
    return {key: Fraction(int(key in ones)) for key in STATES3}


Q_SUM = _q_table({(1, 1, 0), (1, 0, 1), (0, 0, 0)})
Q_PRODUCT = _q_table({(1, 1, 1), (0, 0, 0)})
Q_QUOTIENT = _q_table({(1, 1, 0), (0, 0, 1)})

Q_TABLES = {"sum": Q_SUM, "product": Q_PRODUCT, "quotient": Q_QUOTIENT}
_COMBINATOR_NAME = {Sum: "sum", Product: "product", Quotient: "quotient"}
_COMBINATOR_TYPE = {v: k for k, v in _COMBINATOR_NAME.items()}


@dataclass(frozen=True)
class ConstLeaf:
    """Binary S with prior odds ``odds`` and an uninformative likelihood."""

    odds: Fraction

    def __post_init__(self):
        odds = to_fraction(self.odds)
        if odds < 0:
            raise ModelError("prior odds must be >= 0")
        object.__setattr__(self, "odds", odds)

    def prior(self):
        return (1 / (1 + self.odds), self.odds / (1 + self.odds))

    def likelihood(self, x):
        return (Fraction(1), Fraction(1))

    def odds_at(self, x):
        return self.odds

    def as_bayes_model(self, x=None) -> BayesModel:
        return BayesModel(2, 1, list(self.prior()), {"k": [1, 1]})


@dataclass(frozen=True)
class InputLeaf:
    """Binary S with even prior odds and likelihood ratio ``x[index]``."""

    index: int

    def prior(self):
        return (Fraction(1, 2), Fraction(1, 2))

    def likelihood(self, x):
        v = to_fraction(x[self.index])
        return (1 / (1 + v), v / (1 + v))

    def odds_at(self, x):
        return to_fraction(x[self.index])

    def as_bayes_model(self, x) -> BayesModel:
        return BayesModel(2, 1, list(self.prior()), {"k": list(self.likelihood(x))})


@dataclass(frozen=True)
class MetaNode:
    combinator: str
    q: dict
    left: "MetaModel"
    right: "MetaModel"

    def __post_init__(self):
        if set(self.q) != set(STATES3):
            raise ModelError("q table must cover every (i, j, k) in {0,1}^3")
        if any(not 0 <= v <= 1 for v in self.q.values()):
            raise ModelError("q entries must lie in [0, 1]")
        if self.combinator not in Q_TABLES or dict(self.q) != Q_TABLES[self.combinator]:
            raise ModelError(f"q table does not match the {self.combinator!r} pattern")

    def __hash__(self):
        return hash((self.combinator, self.left, self.right))


MetaModel = Union[ConstLeaf, InputLeaf, MetaNode]


def compile_rfnc_to_model(expr: RfncExpr) -> MetaModel:
    if isinstance(expr, Const):
        return ConstLeaf(expr.value)
    if isinstance(expr, Input):
        return InputLeaf(expr.index)
    name = _COMBINATOR_NAME[type(expr)]
    return MetaNode(name, dict(Q_TABLES[name]), compile_rfnc_to_model(expr.left), compile_rfnc_to_model(expr.right))


def metamodel_posterior_odds(meta: MetaModel, x: Sequence):
    """Posterior odds on the root S, by recursive application of the q-formula."""
    if isinstance(meta, (ConstLeaf, InputLeaf)):
        return meta.odds_at(x)
    h1 = metamodel_posterior_odds(meta.left, x)
    h2 = metamodel_posterior_odds(meta.right, x)
    q = meta.q
    num = q[1, 0, 0] + q[1, 1, 0] * h1 + q[1, 0, 1] * h2 + q[1, 1, 1] * h1 * h2
    den = q[0, 0, 0] + q[0, 1, 0] * h1 + q[0, 0, 1] * h2 + q[0, 1, 1] * h1 * h2
    if den == 0:
        raise DivisionByZeroError("metamodel odds denominator is zero")
    return num / den


def metamodel_to_expr(meta: MetaModel) -> RfncExpr:
    if isinstance(meta, ConstLeaf):
        return Const(meta.odds)
    if isinstance(meta, InputLeaf):
        return Input(meta.index)
    return _COMBINATOR_TYPE[meta.combinator](metamodel_to_expr(meta.left), metamodel_to_expr(meta.right))


def count_variables(meta: MetaModel) -> int:
    """Binary searched variables in the metamodel (one per tree node)."""
    if isinstance(meta, (ConstLeaf, InputLeaf)):
        return 1
    return 1 + count_variables(meta.left) + count_variables(meta.right)


def combine_binary_models(models: Sequence[MetaModel], x: Sequence) -> tuple:
    """Posterior ratios of an (n+1)-valued S glued to n binary submodels.

    ``S = 0`` is the reference (all ``S_i = 0``) and ``S = i`` holds exactly
    when ``S_i = 1`` and every other ``S_j = 0``; the coherence variable
    ``Psi`` enforces this one-hot relation. With a uniform prior on S the
    ratio for ``S = i`` reduces to the i-th submodel's odds.
    """
    if not models:
        raise ValueError("need at least one submodel")
    return (Fraction(1),) + tuple(metamodel_posterior_odds(m, x) for m in models)


def to_dict(meta: MetaModel) -> dict:
    if isinstance(meta, ConstLeaf):
        return {"kind": "const", "odds": str(meta.odds)}
    if isinstance(meta, InputLeaf):
        return {"kind": "input", "index": meta.index}
    return {
        "kind": meta.combinator,
        "q": {"".join(map(str, k)): str(v) for k, v in sorted(meta.q.items())},
        "left": to_dict(meta.left),
        "right": to_dict(meta.right),
    }


def from_dict(data: dict) -> MetaModel:
    kind = data["kind"]
    if kind == "const":
        return ConstLeaf(to_fraction(data["odds"]))
    if kind == "input":
        return InputLeaf(int(data["index"]))
    q = {tuple(int(c) for c in key): to_fraction(v) for key, v in data["q"].items()}
    return MetaNode(kind, q, from_dict(data["left"]), from_dict(data["right"]))
