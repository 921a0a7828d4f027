from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from biocascade.errors import ReducibleError, SpecError, TimeStepTooLargeError
from biocascade.markov import (
    MacromoleculeSpec,
    TransitionMatrix,
    active_probability,
    build_chain,
    det_exact,
    detailed_balance_residual,
    nonneg_theorem_check,
    power_iteration,
    rate_matrix,
    single_site,
    stationary,
    stationary_symbolic,
    two_site_receptor,
)

RECEPTOR = two_site_receptor(
    Fraction(3), Fraction(5), Fraction(2), (Fraction(1), Fraction(2), Fraction(7)), (Fraction(4), 3, 1)
)


def nullspace_oracle(T):
    # Independent oracle: sympy's exact kernel of (T - I), normalized.
    M = sympy.Matrix(T.shape[0], T.shape[1], lambda i, j: sympy.nsimplify(T[i, j]))
    (v,) = (M - sympy.eye(T.shape[0])).nullspace()
    v = v / sum(v)
    return [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in v]


def random_exact_chain(rng, n):
    m = np.empty((n, n), dtype=object)
    for j in range(n):
        col = [Fraction(int(rng.integers(0, 5))) for _ in range(n)]
        col[(j + 1) % n] += 1  # ring edge keeps it irreducible
        col[j] = Fraction(0)
        total = sum(col) * 2
        for i in range(n):
            m[i, j] = col[i] / total
        m[j, j] = 1 - sum(m[i, j] for i in range(n) if i != j)
    return TransitionMatrix(m)


def test_single_site_binding_fraction():
    # Occupancy of one site is beta x / (alpha + beta x).
    spec = single_site(150, 8000)
    assert active_probability(spec, [Fraction(2)]) == Fraction(300, 8300)
    assert active_probability(spec, [Fraction(20)]) == Fraction(3000, 11000)


def test_det_exact():
    assert det_exact([[Fraction(2), 1], [3, 4]]) == 5


@given(st.integers(0, 2**32), st.integers(2, 6))
def test_stationary_matches_nullspace(seed, n):
    T = random_exact_chain(np.random.default_rng(seed), n)
    assert list(stationary(T)) == nullspace_oracle(T.matrix)


def test_stationary_invariant_to_dt():
    x = [Fraction(2)]
    a = stationary(build_chain(RECEPTOR, x, Fraction(1, 100)))
    b = stationary(build_chain(RECEPTOR, x, Fraction(1, 37)))
    assert list(a) == list(b)


def test_too_large_dt():
    with pytest.raises(TimeStepTooLargeError):
        build_chain(single_site(1, 1), [Fraction(1)], Fraction(2))


def test_reducible_chain_rejected():
    T = TransitionMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(ReducibleError):
        stationary(T)


def test_transient_state_allowed():
    # One closed class plus a transient state still has a unique law.
    T = TransitionMatrix.from_rows([[Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)],
                                    [Fraction(1, 2), Fraction(1, 2), 0],
                                    [0, 0, Fraction(1, 2)]])
    assert list(stationary(T)) == [Fraction(1, 2), Fraction(1, 2), 0]


def test_bad_columns_rejected():
    with pytest.raises(ValueError):
        TransitionMatrix.from_rows([[Fraction(1, 2), 0], [0, 1]])


def test_spec_round_trip_and_errors():
    assert MacromoleculeSpec.from_dict(RECEPTOR.to_dict()) == RECEPTOR
    with pytest.raises(SpecError):
        MacromoleculeSpec.from_dict({"n_r": 1})


def test_rate_matrix_uses_messenger():
    R = rate_matrix(single_site(3, 5), [Fraction(2)])
    assert R[1, 0] == 6 and R[0, 1] == 5


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_theorem_check_counts(n):
    # Each minor is a sum over spanning arborescences: n^(n-2) distinct terms.
    report = nonneg_theorem_check(n)
    assert report.coefficient_set() == {1}
    assert report.monomial_counts() == (n ** (n - 2),) * n


def test_theorem_check_with_zero_entries():
    report = nonneg_theorem_check(3, zero_entries=[(0, 1), (1, 0)])
    assert report.coefficient_set() <= {1}
    assert all(len(m.terms) < 3 for m in report.minors)


def test_symbolic_matches_numeric():
    sym = stationary_symbolic(RECEPTOR)
    for x in ([Fraction(1, 3)], [Fraction(4)]):
        exact = stationary(build_chain(RECEPTOR, x, Fraction(1, 100)))
        assert tuple(sym.evaluate(x)) == tuple(exact)
    assert sym.active().is_nonnegative()


@given(st.integers(0, 2**32), st.integers(2, 8))
def test_power_iteration_agrees(seed, n):
    rng = np.random.default_rng(seed)
    M = rng.random((n, n))
    np.fill_diagonal(M, 0)
    M /= M.sum(axis=0).max() * 1.5
    M += np.diag(1 - M.sum(axis=0))
    T = TransitionMatrix(M)
    pi = stationary(T)
    assert np.max(np.abs(pi - power_iteration(T))) <= 1e-10
    assert abs(pi.sum() - 1) <= 1e-12 and np.all(pi >= 0)


def test_detailed_balance_single_site():
    T = build_chain(single_site(2, 3), [Fraction(5)], Fraction(1, 20))
    assert detailed_balance_residual(T, stationary(T)) == 0
