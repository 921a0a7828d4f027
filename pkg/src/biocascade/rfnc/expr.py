"""Expression trees for rational functions with nonnegative coefficients."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from biocascade.errors import (
    DimensionMismatchError,
    DivisionByZeroError,
    NegativeConstantError,
)
from biocascade.rfnc.poly import Polynomial, RationalPolyPair


def to_fraction(value) -> Fraction:
    """Convert ints, strings ("3/4") and Fractions exactly; floats exactly too."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        value = to_fraction(self.value)
        if value < 0:
            raise NegativeConstantError(f"negative constant {value}")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class Input:
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"input index must be a nonnegative int, got {self.index!r}")


@dataclass(frozen=True)
class Sum:
    left: "RfncExpr"
    right: "RfncExpr"


@dataclass(frozen=True)
class Product:
    left: "RfncExpr"
    right: "RfncExpr"


@dataclass(frozen=True)
class Quotient:
    left: "RfncExpr"
    right: "RfncExpr"

    @property
    def numerator(self):
        return self.left

    @property
    def denominator(self):
        return self.right


RfncExpr = Union[Const, Input, Sum, Product, Quotient]
Leaf = (Const, Input)
COMBINATORS = (Sum, Product, Quotient)


def is_leaf(expr) -> bool:
    return isinstance(expr, Leaf)


def n_inputs(expr: RfncExpr) -> int:
    """Smallest input dimension the expression can be evaluated on."""
    if isinstance(expr, Input):
        return expr.index + 1
    if isinstance(expr, Const):
        return 0
    return max(n_inputs(expr.left), n_inputs(expr.right))


def depth(expr: RfncExpr) -> int:
    if is_leaf(expr):
        return 0
    return 1 + max(depth(expr.left), depth(expr.right))


def complexity(expr: RfncExpr) -> int:
    """Number of +, *, / operations needed to compute the expression."""
    if is_leaf(expr):
        return 0
    return 1 + complexity(expr.left) + complexity(expr.right)


def leaves(expr: RfncExpr) -> list:
    if is_leaf(expr):
        return [expr]
    return leaves(expr.left) + leaves(expr.right)


def evaluate(expr: RfncExpr, x: Sequence, dimension: int | None = None):
    """Evaluate ``expr`` at the input vector ``x``.

    Exact when ``x`` holds ints or Fractions; floats propagate as floats.
    Raises DimensionMismatchError when ``x`` does not have ``dimension``
    components (or is too short for the inputs used), and
    DivisionByZeroError when a denominator vanishes.
    """
    if dimension is not None and len(x) != dimension:
        raise DimensionMismatchError(f"expected {dimension} inputs, got {len(x)}")
    needed = n_inputs(expr)
    if len(x) < needed:
        raise DimensionMismatchError(f"expression uses x{needed - 1} but x has {len(x)} components")
    return _eval(expr, x)


def _eval(expr, x):
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Input):
        v = x[expr.index]
        return Fraction(v) if isinstance(v, int) else v
    a = _eval(expr.left, x)
    b = _eval(expr.right, x)
    if isinstance(expr, Sum):
        return a + b
    if isinstance(expr, Product):
        return a * b
    if b == 0:
        raise DivisionByZeroError("quotient denominator evaluates to zero")
    return a / b


def decompose(expr: RfncExpr):
    """Split at the root: ``None`` for leaves, else ``(combinator, h1, h2)``."""
    if is_leaf(expr):
        return None
    return type(expr), expr.left, expr.right


def recombine(combinator, h1: RfncExpr, h2: RfncExpr) -> RfncExpr:
    if combinator not in COMBINATORS:
        raise ValueError(f"unknown combinator {combinator!r}")
    return combinator(h1, h2)


def normal_form(expr: RfncExpr) -> RationalPolyPair:
    """Numerator/denominator polynomials, without cancelling common factors."""
    num, den = _normal(expr)
    return RationalPolyPair(num, den)


def _normal(expr):
    if isinstance(expr, Const):
        return Polynomial.constant(expr.value), Polynomial.constant(Fraction(1))
    if isinstance(expr, Input):
        return Polynomial.variable(expr.index), Polynomial.constant(Fraction(1))
    n1, d1 = _normal(expr.left)
    n2, d2 = _normal(expr.right)
    if isinstance(expr, Sum):
        return n1 * d2 + n2 * d1, d1 * d2
    if isinstance(expr, Product):
        return n1 * n2, d1 * d2
    return n1 * d2, d1 * n2


def random_expr(max_depth: int, n_inputs: int, seed: int, leaf_probability: float = 0.3) -> RfncExpr:
    """Deterministic random expression of depth at most ``max_depth``.

    Constants are drawn strictly positive so that every quotient denominator
    is positive at any strictly positive input vector.
    """
    if max_depth < 0 or n_inputs < 1:
        raise ValueError("need max_depth >= 0 and n_inputs >= 1")
    rng = random.Random(seed)
    return _random(rng, max_depth, n_inputs, leaf_probability)


def _random(rng, depth_left, n, p_leaf):
    if depth_left == 0 or rng.random() < p_leaf:
        if rng.random() < 0.35:
            return Const(Fraction(rng.randint(1, 6), rng.randint(1, 4)))
        return Input(rng.randrange(n))
    op = rng.choice(COMBINATORS)
    return op(_random(rng, depth_left - 1, n, p_leaf), _random(rng, depth_left - 1, n, p_leaf))
