from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from biocascade.cascade import (
    GADGETS,
    CascadeNetwork,
    activity_fraction,
    basic_example_node,
    compile_rfnc_to_cascade,
    equilibrium_concentration,
    gadget,
    gadget_node,
    gadget_output,
    gadget_state_params,
    network_outputs,
    node_equilibrium,
    passthrough_node,
)
from biocascade.errors import DivisionByZeroError, NetworkError, NoEquilibriumError, UnreachableStateError
from biocascade.rfnc import evaluate, parse
from conftest import exprs, points

Y1, Y2 = sympy.symbols("y1 y2", positive=True)
TARGETS = {"sum": Y1 + Y2, "product": Y1 * Y2, "quotient": Y1 / Y2}


def chain_active_sympy(spec):
    # Independent oracle: solve Q pi = 0 symbolically and sum the active mass.
    n = spec.size
    Q = sympy.zeros(n, n)
    for t in spec.transitions:
        rate = sympy.nsimplify(t.coefficient)
        if t.messenger is not None:
            rate *= (Y1, Y2)[t.messenger]
        i, j = spec.index(t.target), spec.index(t.source)
        Q[i, j] += rate
        Q[j, j] -= rate
    (v,) = Q.nullspace()
    v = v / sum(v)
    return sympy.simplify(sum(v[i] for i, on in enumerate(spec.active_mask()) if on))


@pytest.mark.parametrize("name", sorted(GADGETS))
def test_gadget_identity_against_chain(name):
    params = GADGETS[name]
    p = chain_active_sympy(gadget_state_params(params.producer_weights(), beta=3, k_act=5))
    r = chain_active_sympy(gadget_state_params(params.remover_weights(), beta=3, k_act=5))
    z = sympy.nsimplify(params.ratio) * p / r
    assert sympy.simplify(z - TARGETS[name]) == 0


@pytest.mark.parametrize("name", sorted(GADGETS))
def test_gadget_output_exact(name):
    z = gadget_output(GADGETS[name])
    for y in ([Fraction(2), Fraction(3)], [Fraction(1, 7), Fraction(5, 2)]):
        want = {"sum": y[0] + y[1], "product": y[0] * y[1], "quotient": y[0] / y[1]}[name]
        assert z.evaluate(y) == want


def test_gadget_lookup_aliases():
    assert gadget("*") is gadget("product")
    assert gadget("/") is GADGETS["quotient"]


def test_activity_fraction_formula():
    f = activity_fraction((0, 1, 0, 0), (1, 0, 0, 0))
    assert f.evaluate([Fraction(3), Fraction(9)]) == Fraction(3, 4)


def test_unreachable_state():
    with pytest.raises(UnreachableStateError):
        gadget_state_params({(0, 0, 0): 1, (1, 1, 1): 1})


def test_basic_example_linear():
    node = basic_example_node(beta=2, alpha=5, a_p=3, a_r=4)
    assert node_equilibrium(node, [Fraction(10)]) == Fraction(3, 4) * Fraction(2, 5) * 10


def test_passthrough_is_identity():
    node = passthrough_node("y", "x0")
    assert node_equilibrium(node, [Fraction(7, 3)]) == Fraction(7, 3)


def test_no_equilibrium():
    node = gadget_node("quotient", "z", ("a", "b"))
    with pytest.raises(NoEquilibriumError):
        node_equilibrium(node, [Fraction(1), Fraction(0)])


def test_compile_product_network():
    net = compile_rfnc_to_cascade(parse("x0 * x1"))
    conc = equilibrium_concentration(net, [Fraction(3), Fraction(4)])
    assert conc[net.output] == 12
    assert CascadeNetwork.from_dict(net.to_dict()) == net


def test_constant_only_network():
    net = compile_rfnc_to_cascade(parse("5/2"))
    assert network_outputs(net, []) == (Fraction(5, 2),)


def test_network_validation():
    node = passthrough_node("y", "x0")
    with pytest.raises(NetworkError):
        CascadeNetwork(("x0",), (node, passthrough_node("y", "x0")), ("y",))
    with pytest.raises(NetworkError):
        CascadeNetwork(("x0",), (passthrough_node("a", "b"), passthrough_node("b", "a")), ("a",))
    with pytest.raises(NetworkError):
        CascadeNetwork(("x0",), (node,), ("missing",))


@given(exprs, points)
def test_compiled_cascade_equals_evaluation(e, x):
    try:
        v = evaluate(e, x)
    except DivisionByZeroError:
        return
    assert network_outputs(compile_rfnc_to_cascade(e, 3), x) == (v,)
