"""Symbolic stationary distributions and the nonnegative-minor check.

Minors of ``I - T`` are expanded as polynomials. When the diagonal of
``I - T`` is written as the column exit mass ``s_j = sum_{i != j} T_ij``,
every monomial of ``det((I - T)^{k})`` has coefficient 0 or 1, so the
stationary law is a ratio of nonnegative polynomials in the rates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from biocascade.errors import CoefficientViolationError, StateSpaceTooLargeError
from biocascade.markov.linalg import det_cofactor, minor
from biocascade.markov.spec import MacromoleculeSpec
from biocascade.rfnc import Polynomial, RationalPolyPair, to_fraction

MAX_SYMBOLIC_STATES = 256
MAX_LEIBNIZ_SIZE = 7


@dataclass(frozen=True)
class SymbolicStationary:
    """One RFNC per state; variables are messenger indices."""

    labels: tuple
    components: tuple
    active_mask: tuple = ()

    def evaluate(self, x) -> tuple:
        return tuple(c.evaluate(x) for c in self.components)

    def active(self) -> RationalPolyPair:
        """Stationary mass of the active states as a single RFNC."""
        den = self.components[0].denominator
        num = Polynomial()
        for comp, on in zip(self.components, self.active_mask):
            if on:
                num = num + comp.numerator
        return RationalPolyPair(num, den)


def _check_nonnegative(poly: Polynomial, what: str):
    bad = [(m, c) for m, c in poly.terms.items() if c < 0]
    if bad:
        raise CoefficientViolationError(f"{what} has negative coefficients: {bad[:3]}")


def symbolic_rate_matrix(spec: MacromoleculeSpec) -> list:
    """Off-diagonal rates as polynomials in the messenger concentrations."""
    n = spec.size
    R = [[Polynomial() for _ in range(n)] for _ in range(n)]
    for t in spec.transitions:
        i, j = spec.index(t.target), spec.index(t.source)
        c = to_fraction(t.coefficient)
        term = Polynomial.constant(c) if t.messenger is None else Polynomial.variable(t.messenger) * c
        R[i][j] = R[i][j] + term
    return R


def _laplacian(off) -> list:
    """``I - T`` given off-diagonal entries: ``-T_ij`` off the diagonal, ``s_j`` on it."""
    n = len(off)
    M = [[-off[i][j] if i != j else Polynomial() for j in range(n)] for i in range(n)]
    for j in range(n):
        s = Polynomial()
        for i in range(n):
            if i != j:
                s = s + off[i][j]
        M[j][j] = s
    return M


def stationary_symbolic(spec: MacromoleculeSpec, dt=1) -> SymbolicStationary:
    """Exact stationary law of ``build_chain(spec, x, dt)`` with ``x`` symbolic.

    The step ``dt`` scales every minor by ``dt**(n-1)`` and so cancels; it is
    divided out to keep coefficients in rate units.
    """
    n = spec.size
    if n > MAX_SYMBOLIC_STATES:
        raise StateSpaceTooLargeError(f"{n} states exceeds the symbolic limit of {MAX_SYMBOLIC_STATES}")
    dt = to_fraction(dt)
    R = symbolic_rate_matrix(spec)
    off = [[R[i][j] * dt for j in range(n)] for i in range(n)]
    M = _laplacian(off)
    scale = 1 / dt ** (n - 1)
    one = Polynomial.constant(Fraction(1))
    minors = []
    for k in range(n):
        d = det_cofactor(minor(M, k), zero=Polynomial(), one=one) * scale
        _check_nonnegative(d, f"minor {spec.labels[k]}")
        minors.append(d)
    total = Polynomial()
    for d in minors:
        total = total + d
    comps = tuple(RationalPolyPair(d, total) for d in minors)
    return SymbolicStationary(spec.labels, comps, spec.active_mask())


def generic_matrix(n: int, zero_entries: Sequence = ()) -> list:
    """Off-diagonal entries ``T_ij`` as independent indeterminates ``(i, j)``."""
    zeros = {tuple(z) for z in zero_entries}
    return [
        [Polynomial() if i == j or (i, j) in zeros else Polynomial.variable((i, j)) for j in range(n)]
        for i in range(n)
    ]


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows) -> Polynomial:
    """Determinant as the signed sum over all permutations."""
    n = len(rows)
    total = Polynomial.constant(Fraction(1)) if n == 0 else Polynomial()
    for perm in itertools.permutations(range(n)):
        term = None
        for i, j in enumerate(perm):
            e = rows[i][j]
            if e.is_zero():
                term = None
                break
            term = e if term is None else term * e
        else:
            if term is not None:
                total = total + term if _perm_sign(perm) > 0 else total - term
    return total


@dataclass(frozen=True)
class TheoremReport:
    n: int
    minors: tuple  # Polynomial per deleted state k
    ok: bool

    def monomials(self, k: int) -> list:
        return sorted(self.minors[k].terms)

    def monomial_counts(self) -> tuple:
        return tuple(len(m.terms) for m in self.minors)

    def coefficient_set(self) -> set:
        return {c for m in self.minors for c in m.terms.values()}


def nonneg_theorem_check(T, zero_entries: Sequence = ()) -> TheoremReport:
    """Expand every principal minor of ``I - T`` and check coefficients in {0, 1}.

    ``T`` is either a size ``n`` (a generic chain, with ``zero_entries``
    forced to 0) or an ``n x n`` array of Polynomial off-diagonal entries;
    the diagonal is always replaced by the exit mass. Raises
    CoefficientViolationError if any coefficient falls outside {0, 1}.
    """
    off = generic_matrix(T, zero_entries) if isinstance(T, int) else [list(r) for r in T]
    n = len(off)
    if n > MAX_LEIBNIZ_SIZE:
        raise StateSpaceTooLargeError(f"Leibniz expansion limited to n <= {MAX_LEIBNIZ_SIZE}")
    M = _laplacian(off)
    minors = []
    for k in range(n):
        d = leibniz_det(minor(M, k))
        bad = [(m, c) for m, c in d.terms.items() if c not in (0, 1)]
        if bad:
            raise CoefficientViolationError(f"minor {k} has coefficients outside {{0, 1}}: {bad[:3]}")
        minors.append(d)
    return TheoremReport(n, tuple(minors), True)
