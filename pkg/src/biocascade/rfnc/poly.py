"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are stored as sorted tuples of ``(variable, exponent)`` pairs so
that variables can be any orderable hashable: plain integers for RFNC input
components, ``(i, j)`` tuples for generic transition-matrix entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from biocascade.errors import DivisionByZeroError


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for var, exp in m2:
        out[var] = out.get(var, 0) + exp
    return tuple(sorted(out.items()))


class Polynomial:
    """Immutable polynomial ``sum(coeff * prod(var**exp))``."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff != 0:
                    clean[tuple(mono)] = coeff
        self._terms = clean

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def variable(cls, var) -> "Polynomial":
        return cls({((var, 1),): Fraction(1)})

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def coefficients(self):
        return list(self._terms.values())

    def variables(self) -> set:
        return {v for mono in self._terms for v, _ in mono}

    def degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self._terms), default=0)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            out[mono] = out.get(mono, 0) + coeff
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial.constant(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial({m: c * other for m, c in self._terms.items()})
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def evaluate(self, x):
        """Evaluate at ``x`` (a sequence indexed by variable, or a mapping)."""
        total = 0
        for mono, coeff in self._terms.items():
            term = coeff
            for var, exp in mono:
                term = term * x[var] ** exp
            total = total + term
        return total

    def __str__(self):
        """Text in the RFNC grammar (powers written as repeated products)."""
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self._terms.items()):
            factors = [f"x{v}" for v, exp in mono for _ in range(exp)]
            if coeff != 1 or not factors:
                factors.insert(0, str(coeff))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        if not self._terms:
            return "Polynomial(0)"
        parts = []
        for mono, coeff in sorted(self._terms.items()):
            factors = [f"x{v}" if exp == 1 else f"x{v}^{exp}" for v, exp in mono]
            parts.append("*".join([str(coeff)] + factors) if factors else str(coeff))
        return "Polynomial(" + " + ".join(parts) + ")"


@dataclass(frozen=True)
class RationalPolyPair:
    """An RFNC in canonical ``numerator / denominator`` form."""

    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        if self.denominator.is_zero():
            raise DivisionByZeroError("denominator polynomial is identically zero")

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.numerator.coefficients()) and all(
            c >= 0 for c in self.denominator.coefficients()
        )

    def evaluate(self, x):
        den = self.denominator.evaluate(x)
        if den == 0:
            raise DivisionByZeroError("denominator evaluates to zero")
        num = self.numerator.evaluate(x)
        if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
            return Fraction(num) / Fraction(den)
        return num / den
