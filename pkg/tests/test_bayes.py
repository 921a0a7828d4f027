import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from biocascade.bayes import (
    BayesModel,
    basic_model,
    compile_rfnc_to_model,
    count_variables,
    enumerate_odds,
    likelihood_inputs,
    metamodel_posterior_odds,
    metamodel_to_expr,
    model_to_rfnc,
    posterior_ratios,
    random_model,
)
from biocascade.bayes.metamodel import from_dict, to_dict
from biocascade.errors import DivisionByZeroError, ModelError, ZeroReferenceError
from biocascade.rfnc import evaluate, parse
from conftest import exprs, points


def joint_oracle(model, k):
    # Bayes rule written out cell by cell, normalized at the end.
    lik = model.likelihood(k)
    post = [Fraction(0)] * model.n_s
    for s, f in itertools.product(range(model.n_s), range(model.n_f)):
        post[s] += model.prior[s][f] * lik[s][f]
    z = sum(post)
    post = [p / z for p in post]
    return tuple(p / post[0] for p in post)


def test_basic_example_is_linear():
    # Two-state model with prior odds a and likelihood ratio x gives y = a x.
    assert posterior_ratios(basic_model(2, 5), "k") == (1, 10)
    assert posterior_ratios(basic_model(Fraction(1, 3), 9), "k") == (1, 3)


def test_uniform_model_gives_ones():
    m = BayesModel(3, 2, [Fraction(1, 6)] * 6, {"k": [Fraction(1, 2)] * 6})
    assert posterior_ratios(m, "k") == (1, 1, 1)


def test_zero_reference_rejected():
    with pytest.raises(ZeroReferenceError):
        BayesModel(2, 1, [0, 1], {"k": [1, 1]})
    with pytest.raises(ZeroReferenceError):
        BayesModel(2, 1, [Fraction(1, 2)] * 2, {"k": [0, 1]})


def test_prior_must_normalize():
    with pytest.raises(ModelError):
        BayesModel(2, 1, [Fraction(1, 2), Fraction(1, 3)], {})


def test_dict_round_trip():
    m = random_model(random.Random(4))
    assert BayesModel.from_dict(m.to_dict()) == m


def test_sum_metamodel_q_table():
    meta = compile_rfnc_to_model(parse("x0 + x1"))
    assert meta.combinator == "sum"
    assert metamodel_posterior_odds(meta, [Fraction(2), Fraction(3)]) == 5


@given(st.integers(0, 2**32))
def test_model_to_rfnc_matches_joint(seed):
    m = random_model(random.Random(seed))
    _, rfnc = model_to_rfnc(m)
    for k in m.labels:
        x = likelihood_inputs(m, k)
        assert tuple(evaluate(e, x) for e in rfnc) == joint_oracle(m, k)


@given(exprs, points)
def test_metamodel_odds_equal_evaluation(e, x):
    meta = compile_rfnc_to_model(e)
    try:
        v = evaluate(e, x)
    except DivisionByZeroError:
        return
    assert metamodel_posterior_odds(meta, x) == v
    if count_variables(meta) <= 12:
        assert enumerate_odds(meta, x) == v


@given(exprs)
def test_metamodel_serialization(e):
    meta = compile_rfnc_to_model(e)
    assert from_dict(to_dict(meta)) == meta
    assert metamodel_to_expr(meta) == e
