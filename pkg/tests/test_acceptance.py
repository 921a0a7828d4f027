"""Acceptance gate: each test covers one criterion at its stated tolerance.

A summary with one PASS/FAIL line per criterion is printed at the end of
the pytest run.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy

from biocascade import cli
from biocascade.bayes import (
    compile_rfnc_to_model,
    count_variables,
    enumerate_odds,
    likelihood_inputs,
    metamodel_posterior_odds,
    model_to_rfnc,
    posterior_ratios,
    random_model,
)
from biocascade.cascade import GADGETS, compile_rfnc_to_cascade, gadget_output, gadget_state_params, network_outputs
from biocascade.errors import DivisionByZeroError
from biocascade.markov import TransitionMatrix, nonneg_theorem_check, power_iteration, rate_matrix, stationary, stationary_symbolic
from biocascade.rfnc import Polynomial, depth, evaluate, random_expr
from biocascade.sim.figures import TABLE1, figure1, figure2, figure3, table2_spec
from test_bayes import joint_oracle
from test_cascade import TARGETS, chain_active_sympy


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def failed_lines(result):
    return [c.line() for c in result.checks if not c.passed]


@pytest.mark.acceptance(1, "figure 1 plateaus and ODE band, N=500, < 30 s")
def test_criterion_1_figure1():
    res, secs = timed(figure1)
    beta, alpha = TABLE1["beta"], TABLE1["alpha"]
    # Single-site occupancy beta x / (alpha + beta x) at the two ligand levels.
    down, up = beta * 2 / (alpha + beta * 2), beta * 20 / (alpha + beta * 20)
    assert round(down, 4) == 0.0361 and round(up, 4) == 0.2727
    plateaus = [c for c in res.checks if "plateau" in c.name]
    assert [c.expected for c in plateaus] == pytest.approx([down, up, down], abs=1e-12)
    assert res.provenance["N"] == 500
    assert not failed_lines(res), failed_lines(res)
    assert secs < 30, f"{secs:.1f} s"


def nullspace_float(R):
    Q = sympy.Matrix(R.shape[0], R.shape[1], lambda i, j: sympy.nsimplify(R[i, j]))
    Q -= sympy.diag(*[sum(Q[:, j]) for j in range(Q.shape[1])])
    (v,) = Q.nullspace()
    return np.array([float(c) for c in v / sum(v)])


@pytest.mark.acceptance(2, "figure 2 plateaus vs determinant stationary law, < 60 s")
def test_criterion_2_figure2():
    res, secs = timed(figure2)
    spec = table2_spec()
    mask = np.array(spec.active_mask())
    for level, key in ((2.0, "stationary_down"), (20.0, "stationary_up")):
        pi = nullspace_float(rate_matrix(spec, [level]).astype(float))
        assert res.extra[key] == pytest.approx(pi[mask].sum(), abs=1e-12)
    assert sum("plateau" in c.name for c in res.checks) == 3
    assert not failed_lines(res), failed_lines(res)
    assert secs < 60, f"{secs:.1f} s"


@pytest.mark.acceptance(3, "figure 3 product grid, ODE rel err <= 5%, SSA within 4 SE, < 120 s")
def test_criterion_3_figure3():
    res, secs = timed(figure3)
    target = res.columns["x1x2"]
    assert len(target) >= 64
    assert len(set(res.columns["x1_uM"])) >= 8 and min(res.columns["x1_uM"]) == 1 and max(res.columns["x1_uM"]) == 10
    rel = np.max(np.abs(res.columns["z_ode_scaled"] - target) / target)
    assert rel <= 0.05
    assert not failed_lines(res), failed_lines(res)
    assert secs < 120, f"{secs:.1f} s"


@pytest.mark.acceptance(4, "gadget identities exact")
@pytest.mark.parametrize("name", sorted(GADGETS))
def test_criterion_4_gadgets(name):
    params = GADGETS[name]
    y1, y2 = Polynomial.variable(0), Polynomial.variable(1)
    want = {"sum": (y1 + y2, Polynomial.constant(1)), "product": (y1 * y2, Polynomial.constant(1)),
            "quotient": (y1, y2)}[name]
    z = gadget_output(params)
    assert z.numerator * want[1] == want[0] * z.denominator
    # Same identity through the package's symbolic stationary solver.
    p = stationary_symbolic(gadget_state_params(params.producer_weights())).active()
    r = stationary_symbolic(gadget_state_params(params.remover_weights())).active()
    assert params.ratio * p.numerator * r.denominator * want[1] == want[0] * p.denominator * r.numerator
    # And through sympy, independently of the package's solver.
    zs = sympy.nsimplify(params.ratio) * chain_active_sympy(gadget_state_params(params.producer_weights())) / (
        chain_active_sympy(gadget_state_params(params.remover_weights())))
    assert sympy.simplify(zs - TARGETS[name]) == 0


@pytest.mark.acceptance(5, "round trip A on 100 random models, exact")
def test_criterion_5_round_trip_a():
    rng = random.Random(5)
    for _ in range(100):
        model = random_model(rng, max_s=4, max_f=4, max_observations=5)
        _, exprs = model_to_rfnc(model)
        for k in model.labels:
            x = likelihood_inputs(model, k)
            got = tuple(evaluate(e, x) for e in exprs)
            assert got == posterior_ratios(model, k) == joint_oracle(model, k)


@pytest.mark.acceptance(6, "round trip B on 200 random RFNCs with enumeration, exact")
def test_criterion_6_round_trip_b():
    rng = random.Random(6)
    enumerated = 0
    for c in range(200):
        e = random_expr(4, 3, rng.randrange(1 << 30))
        assert depth(e) <= 4
        meta = compile_rfnc_to_model(e)
        x = [Fraction(rng.randint(1, 30), rng.randint(1, 7)) for _ in range(3)]
        try:
            v = evaluate(e, x)
        except DivisionByZeroError:
            continue
        assert metamodel_posterior_odds(meta, x) == v
        if count_variables(meta) <= 20:
            assert enumerate_odds(meta, x) == v
            enumerated += 1
    assert enumerated >= 100


@pytest.mark.acceptance(7, "Bayes to RFNC to cascade on 50 models, exact")
def test_criterion_7_triangle():
    rng = random.Random(7)
    for _ in range(50):
        model = random_model(rng)
        _, exprs = model_to_rfnc(model)
        net = compile_rfnc_to_cascade(exprs, model.dimension)
        for k in model.labels:
            x = likelihood_inputs(model, k)
            assert network_outputs(net, x) == posterior_ratios(model, k)


@pytest.mark.acceptance(8, "theorem check n <= 5 and 100 chains vs power iteration to 1e-10")
def test_criterion_8_theorem():
    for n in range(1, 6):
        report = nonneg_theorem_check(n)
        assert report.coefficient_set() <= {0, 1}
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        M = rng.random((n, n)) * (rng.random((n, n)) < 0.5)
        for i in range(n):
            M[(i + 1) % n, i] += 0.05 + rng.random()
        np.fill_diagonal(M, 0)
        M /= M.sum(axis=0).max() * (1 + rng.random())
        M += np.diag(1 - M.sum(axis=0))
        T = TransitionMatrix(M)
        assert np.max(np.abs(stationary(T) - power_iteration(T))) <= 1e-10


def _cli_bytes(tmp_path, name, argv):
    out = tmp_path / name
    code = cli.main(argv + ["--out", str(out)])
    return code, out.read_bytes()


@pytest.mark.acceptance(9, "figure and verify output byte-identical across runs")
@pytest.mark.parametrize("argv", [["figure1"], ["figure2"], ["figure3"],
                                  ["verify", "--seed", "7", "--cases", "50"]])
def test_criterion_9_determinism(tmp_path, argv):
    a = _cli_bytes(tmp_path, "a", argv)
    b = _cli_bytes(tmp_path, "b", argv)
    assert a[0] == 0 and a == b
