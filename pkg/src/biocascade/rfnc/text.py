"""Text form of RFNC expressions.

Grammar::

    expr   := term ('+' term)*
    term   := factor (('*' | '/') factor)*
    factor := 'x' INT | RATIONAL | '(' expr ')'

A rational literal is ``INT`` or ``INT/INT`` written without whitespace, so
``1/2`` is the constant one half while ``1 / 2`` is a quotient node. The
printer relies on this and always puts spaces around operators.
"""

from __future__ import annotations

import re
from fractions import Fraction

from biocascade.errors import NegativeConstantError, RfncSyntaxError
from biocascade.rfnc.expr import Const, Input, Product, Quotient, RfncExpr, Sum

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>x(?P<idx>\d+))
  | (?P<rat>\d+/\d+(?![\d]))
  | (?P<int>\d+)
  | (?P<neg>-\s*(?:\d|x|\())
  | (?P<op>[+*/()])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise RfncSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "idx":
            kind = "var"
        if kind == "neg":
            raise NegativeConstantError(f"negative term at position {pos}: RFNC coefficients must be >= 0")
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] == "+":
            self.take()
            node = Sum(node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.factor()
            node = Product(node, rhs) if op == "*" else Quotient(node, rhs)
        return node

    def factor(self):
        kind, value, pos = self.take()
        if kind == "var":
            return Input(int(value[1:]))
        if kind == "rat":
            num, den = value.split("/")
            if int(den) == 0:
                raise RfncSyntaxError("zero denominator in rational literal", pos)
            return Const(Fraction(int(num), int(den)))
        if kind == "int":
            return Const(Fraction(int(value)))
        if value == "(":
            node = self.expr()
            kind, value, pos = self.take()
            if value != ")":
                raise RfncSyntaxError("expected ')'", pos)
            return node
        what = "end of input" if kind == "end" else repr(value)
        raise RfncSyntaxError(f"unexpected {what}", pos)


def parse(text: str) -> RfncExpr:
    parser = _Parser(text)
    node = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise RfncSyntaxError(f"unexpected {value!r}", pos)
    return node


def to_text(expr: RfncExpr) -> str:
    """Print ``expr`` so that ``parse(to_text(e)) == e`` structurally."""
    if isinstance(expr, Const):
        v = expr.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(expr, Input):
        return f"x{expr.index}"
    if isinstance(expr, Sum):
        left = to_text(expr.left)
        right = to_text(expr.right)
        if isinstance(expr.right, Sum):
            right = f"({right})"
        return f"{left} + {right}"
    left = to_text(expr.left)
    if isinstance(expr.left, Sum):
        left = f"({left})"
    right = to_text(expr.right)
    if isinstance(expr.right, (Sum, Product, Quotient)):
        right = f"({right})"
    op = "*" if isinstance(expr, Product) else "/"
    return f"{left} {op} {right}"


def to_tree(expr: RfncExpr) -> str:
    """Constructor-style rendering, e.g. ``Product(Input(0), Input(1))``."""
    if isinstance(expr, Const):
        return f"Const({expr.value})"
    if isinstance(expr, Input):
        return f"Input({expr.index})"
    return f"{type(expr).__name__}({to_tree(expr.left)}, {to_tree(expr.right)})"
