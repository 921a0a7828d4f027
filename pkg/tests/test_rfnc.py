from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given

from biocascade.errors import DivisionByZeroError, NegativeConstantError, RfncSyntaxError
from biocascade.rfnc import (
    Const,
    Input,
    Polynomial,
    Product,
    Quotient,
    Sum,
    decompose,
    depth,
    evaluate,
    n_inputs,
    normal_form,
    parse,
    random_expr,
    recombine,
    to_text,
    to_tree,
)
from conftest import exprs, points

X = sympy.symbols("x0:3")


def to_sympy(e):
    if isinstance(e, Const):
        return sympy.Rational(e.value.numerator, e.value.denominator)
    if isinstance(e, Input):
        return X[e.index]
    a, b = to_sympy(e.left), to_sympy(e.right)
    return {Sum: a + b, Product: a * b, Quotient: a / b}[type(e)]


def poly_to_sympy(p: Polynomial):
    total = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, k in mono:
            term *= X[v] ** k
        total += term
    return total


def test_evaluate_basic():
    e = parse("x0 * x1 + 1/2")
    assert evaluate(e, [Fraction(3), Fraction(4)]) == Fraction(25, 2)


def test_rational_literal_vs_quotient_node():
    assert parse("1/2") == Const(Fraction(1, 2))
    assert parse("1 / 2") == Quotient(Const(1), Const(2))


def test_negative_constant_rejected():
    with pytest.raises(NegativeConstantError):
        Const(-1)
    with pytest.raises(NegativeConstantError):
        parse("x0 + -3")


def test_syntax_error_reports_position():
    with pytest.raises(RfncSyntaxError) as info:
        parse("x0 +")
    assert info.value.position == 4


def test_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        evaluate(parse("x0 / x1"), [Fraction(1), Fraction(0)])


def test_tree_and_inputs():
    e = parse("x0*(x2+1)")
    assert to_tree(e) == "Product(Input(0), Sum(Input(2), Const(1)))"
    assert n_inputs(e) == 3
    assert depth(e) == 2


def test_random_expr_is_seeded():
    assert random_expr(4, 3, 11) == random_expr(4, 3, 11)
    assert depth(random_expr(4, 3, 11)) <= 4


def test_decompose_recombine():
    e = parse("x0 + x1 * 2")
    comb, h1, h2 = decompose(e)
    assert recombine(comb, h1, h2) == e


def test_polynomial_text_parses_back():
    nf = normal_form(parse("(x0 + 1/2) * x1 / (x0 + 3)"))
    text = str(nf)
    again = normal_form(parse(text))
    x = [Fraction(2), Fraction(5), Fraction(1)]
    assert again.evaluate(x) == nf.evaluate(x)


@given(exprs)
def test_parse_print_round_trip(e):
    assert parse(to_text(e)) == e


@given(exprs, points)
def test_evaluate_matches_sympy(e, x):
    # Independent oracle: sympy's exact rational arithmetic.
    try:
        v = evaluate(e, x)
    except DivisionByZeroError:
        return
    ref = to_sympy(e).subs({X[i]: sympy.Rational(x[i].numerator, x[i].denominator) for i in range(3)})
    assert sympy.Rational(v.numerator, v.denominator) == ref


def _sympy_or_none(e):
    try:
        ref = to_sympy(e)
    except ZeroDivisionError:
        return None
    return None if ref.has(sympy.zoo, sympy.nan) else ref


@given(exprs)
def test_normal_form_is_nonnegative_and_equal(e):
    try:
        nf = normal_form(e)
    except DivisionByZeroError:
        # Only an identically-zero denominator may raise.
        assert _sympy_or_none(e) is None or sympy.denom(sympy.together(to_sympy(e))) == 0
        return
    assert nf.is_nonnegative()
    ref = _sympy_or_none(e)
    assume(ref is not None)
    lhs = poly_to_sympy(nf.numerator) / poly_to_sympy(nf.denominator)
    assert sympy.simplify(lhs - ref) == 0
