"""Rational functions with nonnegative coefficients (RFNCs)."""

from biocascade.rfnc.expr import (
    COMBINATORS,
    Const,
    Input,
    Product,
    Quotient,
    RfncExpr,
    Sum,
    complexity,
    decompose,
    depth,
    evaluate,
    is_leaf,
    leaves,
    n_inputs,
    normal_form,
    random_expr,
    recombine,
    to_fraction,
)
from biocascade.rfnc.poly import Polynomial, RationalPolyPair
from biocascade.rfnc.text import parse, to_text, to_tree

__all__ = [
    "COMBINATORS",
    "Const",
    "Input",
    "Polynomial",
    "Product",
    "Quotient",
    "RationalPolyPair",
    "RfncExpr",
    "Sum",
    "complexity",
    "decompose",
    "depth",
    "evaluate",
    "is_leaf",
    "leaves",
    "n_inputs",
    "normal_form",
    "parse",
    "random_expr",
    "recombine",
    "to_fraction",
    "to_text",
    "to_tree",
]
