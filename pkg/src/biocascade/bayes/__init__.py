"""Discrete Bayesian models and their correspondence with RFNCs."""

from biocascade.bayes.metamodel import (
    Q_PRODUCT,
    Q_QUOTIENT,
    Q_SUM,
    Q_TABLES,
    ConstLeaf,
    InputLeaf,
    MetaModel,
    MetaNode,
    combine_binary_models,
    compile_rfnc_to_model,
    count_variables,
    metamodel_posterior_odds,
    metamodel_to_expr,
)
from biocascade.bayes.model import (
    BayesModel,
    basic_model,
    enumerate_posterior,
    enumerate_posterior_ratios,
    likelihood_inputs,
    load_model,
    model_to_rfnc,
    posterior_ratios,
    random_model,
)
from biocascade.bayes.oracle import enumerate_combined, enumerate_odds, enumerate_weights

__all__ = [
    "BayesModel",
    "ConstLeaf",
    "InputLeaf",
    "MetaModel",
    "MetaNode",
    "Q_PRODUCT",
    "Q_QUOTIENT",
    "Q_SUM",
    "Q_TABLES",
    "basic_model",
    "combine_binary_models",
    "compile_rfnc_to_model",
    "count_variables",
    "enumerate_combined",
    "enumerate_odds",
    "enumerate_posterior",
    "enumerate_posterior_ratios",
    "enumerate_weights",
    "likelihood_inputs",
    "load_model",
    "metamodel_posterior_odds",
    "metamodel_to_expr",
    "model_to_rfnc",
    "posterior_ratios",
    "random_model",
]
