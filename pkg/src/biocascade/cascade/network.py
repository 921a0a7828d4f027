"""Feed-forward cascades of producer/remover macromolecule pairs.

Each node releases one messenger. At equilibrium production
``a_P m_P P*(Q | inputs)`` balances removal ``a_R m_R P*(Q' | inputs) y``,
which fixes ``y``. Nodes are evaluated in topological order.
"""

from __future__ import annotations

import functools
import graphlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from biocascade.cascade.gadget import GadgetParams, gadget, gadget_state_params
from biocascade.errors import NetworkError, NoEquilibriumError
from biocascade.markov.spec import MacromoleculeSpec, single_site
from biocascade.markov.symbolic import stationary_symbolic
from biocascade.rfnc import Const, Input, Product, Quotient, RfncExpr, Sum, to_fraction
from biocascade.rfnc.expr import n_inputs as expr_n_inputs


def _positive(value, name):
    value = value if isinstance(value, float) else to_fraction(value)
    if value <= 0:
        raise NetworkError(f"{name} must be > 0")
    return value


@dataclass(frozen=True)
class CascadeNode:
    output: str
    inputs: tuple
    producer: MacromoleculeSpec
    remover: MacromoleculeSpec
    a_p: object = Fraction(1)
    a_r: object = Fraction(1)
    m_p: int = 1
    m_r: int = 1

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "a_p", _positive(self.a_p, "a_P"))
        object.__setattr__(self, "a_r", _positive(self.a_r, "a_R"))
        if int(self.m_p) < 1 or int(self.m_r) < 1:
            raise NetworkError("site counts m_P and m_R must be >= 1")
        for spec in (self.producer, self.remover):
            if spec.n_messengers > len(self.inputs):
                raise NetworkError(f"node {self.output!r} spec reads more messengers than it has inputs")

    def _local(self, conc: Mapping) -> list:
        return [conc[name] for name in self.inputs]

    def to_dict(self) -> dict:
        def num(v):
            return str(v) if isinstance(v, Fraction) else v

        return {
            "output": self.output,
            "inputs": list(self.inputs),
            "producer": self.producer.to_dict(),
            "remover": self.remover.to_dict(),
            "a_p": num(self.a_p),
            "a_r": num(self.a_r),
            "m_p": int(self.m_p),
            "m_r": int(self.m_r),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CascadeNode":
        return cls(
            output=str(data["output"]),
            inputs=tuple(data["inputs"]),
            producer=MacromoleculeSpec.from_dict(data["producer"]),
            remover=MacromoleculeSpec.from_dict(data["remover"]),
            a_p=data.get("a_p", 1),
            a_r=data.get("a_r", 1),
            m_p=int(data.get("m_p", 1)),
            m_r=int(data.get("m_r", 1)),
        )


@functools.lru_cache(maxsize=512)
def _active_rfnc(spec: MacromoleculeSpec):
    return stationary_symbolic(spec).active()


def active_probability(spec: MacromoleculeSpec, x: Sequence):
    """Stationary active mass, via the cached symbolic stationary law."""
    return _active_rfnc(spec).evaluate(list(x))


def flux_production(node: CascadeNode, x: Sequence):
    return node.a_p * node.m_p * active_probability(node.producer, x)


def flux_removal(node: CascadeNode, x: Sequence, y):
    return node.a_r * node.m_r * active_probability(node.remover, x) * y


def node_equilibrium(node: CascadeNode, x: Sequence):
    removal = flux_removal(node, x, 1)
    if removal == 0:
        raise NoEquilibriumError(f"remover of {node.output!r} is never active at inputs {list(x)}")
    return flux_production(node, x) / removal


@dataclass(frozen=True)
class CascadeNetwork:
    """Acyclic network over named messengers.

    ``inputs`` are primary messenger names (bound to the concentration
    vector in order); ``constants`` are internal messengers held at fixed
    concentrations; ``nodes`` are stored in a topological order.
    """

    inputs: tuple
    nodes: tuple
    outputs: tuple
    constants: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "constants", {k: to_fraction(v) for k, v in dict(self.constants).items()})
        sources = list(self.inputs) + list(self.constants)
        if len(set(sources)) != len(sources):
            raise NetworkError("input and constant names must be distinct")
        produced = {}
        for node in self.nodes:
            if node.output in produced or node.output in sources:
                raise NetworkError(f"messenger {node.output!r} has more than one source")
            produced[node.output] = node
        graph = {n.output: [i for i in n.inputs if i in produced] for n in self.nodes}
        for n in self.nodes:
            for i in n.inputs:
                if i not in produced and i not in sources:
                    raise NetworkError(f"node {n.output!r} reads unknown messenger {i!r}")
        try:
            order = list(graphlib.TopologicalSorter(graph).static_order())
        except graphlib.CycleError as exc:
            raise NetworkError(f"cascade has a feedback loop: {exc.args[1]}") from None
        object.__setattr__(self, "nodes", tuple(produced[name] for name in order))
        for out in self.outputs:
            if out not in produced and out not in sources:
                raise NetworkError(f"output {out!r} is not produced")

    @property
    def output(self) -> str:
        return self.outputs[0]

    def __hash__(self):
        return hash((self.inputs, self.nodes, self.outputs))

    def to_dict(self) -> dict:
        return {
            "inputs": list(self.inputs),
            "constants": {k: str(v) for k, v in self.constants.items()},
            "nodes": [n.to_dict() for n in self.nodes],
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CascadeNetwork":
        try:
            outputs = data.get("outputs") or [data["output"]]
            return cls(
                inputs=tuple(data["inputs"]),
                nodes=tuple(CascadeNode.from_dict(n) for n in data["nodes"]),
                outputs=tuple(outputs),
                constants=data.get("constants", {}),
            )
        except (KeyError, TypeError) as exc:
            raise NetworkError(f"malformed network definition: {exc}") from exc


def load_network(path) -> CascadeNetwork:
    with open(path) as fh:
        return CascadeNetwork.from_dict(json.load(fh))


def save_network(network: CascadeNetwork, path) -> None:
    with open(path, "w") as fh:
        json.dump(network.to_dict(), fh, indent=2)
        fh.write("\n")


def equilibrium_concentration(network: CascadeNetwork, x: Sequence) -> dict:
    """Equilibrium concentration of every messenger at primary inputs ``x``."""
    x = list(x)
    if len(x) != len(network.inputs):
        raise NetworkError(f"network has {len(network.inputs)} inputs, got {len(x)} values")
    if any(v < 0 for v in x):
        raise NetworkError("concentrations must be >= 0")
    exact = all(isinstance(v, (int, Fraction)) for v in x)
    conc = {name: (to_fraction(v) if exact else float(v)) for name, v in zip(network.inputs, x)}
    for name, c in network.constants.items():
        conc[name] = c if exact else float(c)
    for node in network.nodes:
        conc[node.output] = node_equilibrium(node, node._local(conc))
    return conc


def network_outputs(network: CascadeNetwork, x: Sequence) -> tuple:
    conc = equilibrium_concentration(network, x)
    return tuple(conc[o] for o in network.outputs)


# -- node builders ---------------------------------------------------------


def passthrough_node(output: str, source: str, beta=1, alpha=1, a_p=1, a_r=1, m=1) -> CascadeNode:
    """Single-site node with ``y = (a_P / a_R) (beta / alpha) x``."""
    return CascadeNode(
        output=output,
        inputs=(source,),
        producer=single_site(beta, alpha, active="1"),
        remover=single_site(beta, alpha, active="0"),
        a_p=a_p,
        a_r=a_r,
        m_p=m,
        m_r=m,
    )


def gadget_node(op, output: str, inputs: Sequence[str], beta=1, k_act=1, a_r=1, m_p=1, m_r=1) -> CascadeNode:
    params: GadgetParams = gadget(op)
    a_r = a_r if isinstance(a_r, float) else to_fraction(a_r)
    a_p = params.ratio * a_r * m_r / m_p
    return CascadeNode(
        output=output,
        inputs=tuple(inputs),
        producer=gadget_state_params(params.producer_weights(), beta, k_act),
        remover=gadget_state_params(params.remover_weights(), beta, k_act),
        a_p=a_p,
        a_r=a_r,
        m_p=m_p,
        m_r=m_r,
    )


_OP = {Sum: "sum", Product: "product", Quotient: "quotient"}


class _Builder:
    def __init__(self):
        self.nodes = []
        self.constants = {}

    def fresh(self, prefix):
        return f"{prefix}{len(self.nodes)}"

    def build(self, expr: RfncExpr) -> str:
        if isinstance(expr, Input):
            out = self.fresh("y")
            self.nodes.append(passthrough_node(out, f"x{expr.index}"))
            return out
        if isinstance(expr, Const):
            src = f"c{len(self.constants)}"
            self.constants[src] = expr.value
            out = self.fresh("y")
            self.nodes.append(passthrough_node(out, src))
            return out
        left = self.build(expr.left)
        right = self.build(expr.right)
        out = self.fresh("y")
        self.nodes.append(gadget_node(_OP[type(expr)], out, (left, right)))
        return out


def compile_rfnc_to_cascade(expr, n_inputs: int | None = None) -> CascadeNetwork:
    """Cascade whose equilibrium output equals ``expr`` evaluated at ``x``.

    ``expr`` may also be a sequence of expressions; the network then has one
    output per expression, all sharing the same primary inputs.
    """
    exprs = list(expr) if isinstance(expr, (list, tuple)) else [expr]
    if n_inputs is None:
        n_inputs = max((expr_n_inputs(e) for e in exprs), default=0)
    b = _Builder()
    outputs = tuple(b.build(e) for e in exprs)
    return CascadeNetwork(
        inputs=tuple(f"x{i}" for i in range(n_inputs)),
        nodes=tuple(b.nodes),
        outputs=outputs,
        constants=b.constants,
    )


def basic_example_node(beta, alpha, a_p, a_r, m=1, source="x0", output="y") -> CascadeNode:
    """One receptor type driving both catalysts; ``y = (a_P/a_R) (beta x / alpha)``."""
    return passthrough_node(output, source, beta=beta, alpha=alpha, a_p=a_p, a_r=a_r, m=m)
