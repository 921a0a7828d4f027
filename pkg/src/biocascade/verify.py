"""Property suite run by ``biocascade verify``.

Every property draws its cases from a generator seeded by the suite seed
and a per-property offset, so the report is a pure function of
``(seed, cases)``. A property returns the number of cases checked or
raises; any exception is a failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from biocascade.bayes import (
    compile_rfnc_to_model,
    count_variables,
    enumerate_odds,
    enumerate_posterior_ratios,
    likelihood_inputs,
    metamodel_posterior_odds,
    model_to_rfnc,
    posterior_ratios,
    random_model,
)
from biocascade.cascade import (
    GADGETS,
    activity_fraction,
    compile_rfnc_to_cascade,
    gadget_output,
    gadget_state_params,
    network_outputs,
)
from biocascade.errors import DivisionByZeroError
from biocascade.markov import (
    TransitionMatrix,
    build_chain,
    detailed_balance_residual,
    nonneg_theorem_check,
    power_iteration,
    stationary,
    stationary_symbolic,
)
from biocascade.rfnc import Const, Polynomial, evaluate, normal_form, parse, random_expr, to_text
from biocascade.rfnc.expr import Sum

DEFAULT_CASES = 50
MAX_ENUM_VARIABLES = 20


class PropertyFailure(AssertionError):
    pass


def _require(cond, message):
    if not cond:
        raise PropertyFailure(message)


def random_point(rng: random.Random, n: int, positive: bool = True) -> list:
    lo = 1 if positive else 0
    return [Fraction(rng.randint(lo, 30), rng.randint(1, 7)) for _ in range(n)]


def _negate_first_constant(expr):
    """Rebuild ``expr`` with its first constant negated (harness self-test)."""
    if isinstance(expr, Const):
        return Const(-expr.value if expr.value else Fraction(-1))
    if hasattr(expr, "left"):
        return type(expr)(_negate_first_constant(expr.left), expr.right)
    return Sum(Const(Fraction(-1)), expr)


class Suite:
    def __init__(self, seed: int = 0, cases: int = DEFAULT_CASES, mutant: bool = False):
        self.seed = int(seed)
        self.cases = int(cases)
        self.mutant = mutant

    def rng(self, offset: int) -> random.Random:
        return random.Random(self.seed * 1009 + offset)

    def expr(self, max_depth, n_inputs, seed):
        e = random_expr(max_depth, n_inputs, seed)
        return _negate_first_constant(e) if self.mutant else e

    # -- rfnc ----------------------------------------------------------------
    def normal_form_soundness(self):
        rng = self.rng(1)
        for c in range(self.cases):
            e = self.expr(4, 3, rng.randrange(1 << 30))
            nf = normal_form(e)
            _require(nf.is_nonnegative(), "normal form has a negative coefficient")
            x = random_point(rng, 3)
            try:
                v = evaluate(e, x)
            except DivisionByZeroError:
                continue
            _require(v * nf.denominator.evaluate(x) == nf.numerator.evaluate(x), f"case {c}: normal form mismatch")
        return self.cases

    def parse_print_round_trip(self):
        rng = self.rng(2)
        for c in range(self.cases):
            e = self.expr(4, 3, rng.randrange(1 << 30))
            _require(parse(to_text(e)) == e, f"case {c}: parse(print(e)) != e")
        return self.cases

    # -- bayes ---------------------------------------------------------------
    def round_trip_a(self):
        rng = self.rng(3)
        for c in range(self.cases):
            model = random_model(rng)
            _, exprs = model_to_rfnc(model)
            for k in model.labels:
                x = likelihood_inputs(model, k)
                got = tuple(evaluate(e, x) for e in exprs)
                _require(got == posterior_ratios(model, k), f"case {c}: rfnc != posterior ratios")
                _require(got == enumerate_posterior_ratios(model, k), f"case {c}: rfnc != enumeration")
        return self.cases

    def round_trip_b(self):
        rng = self.rng(4)
        for c in range(self.cases):
            e = self.expr(4, 3, rng.randrange(1 << 30))
            meta = compile_rfnc_to_model(e)
            for _ in range(10):
                x = random_point(rng, 3)
                try:
                    v = evaluate(e, x)
                except DivisionByZeroError:
                    continue
                _require(metamodel_posterior_odds(meta, x) == v, f"case {c}: metamodel odds != eval")
                if count_variables(meta) <= MAX_ENUM_VARIABLES:
                    _require(enumerate_odds(meta, x) == v, f"case {c}: enumeration != eval")
        return self.cases

    # -- cascade -------------------------------------------------------------
    def gadget_identities(self):
        y1, y2 = Polynomial.variable(0), Polynomial.variable(1)
        targets = {"sum": (y1 + y2, Polynomial.constant(1)), "product": (y1 * y2, Polynomial.constant(1)),
                   "quotient": (y1, y2)}
        for name, params in GADGETS.items():
            z = gadget_output(params)
            num, den = targets[name]
            _require(z.numerator * den == num * z.denominator, f"{name} gadget is not an identity")
            for weights, which in ((params.producer_weights(), "producer"), (params.remover_weights(), "remover")):
                spec = gadget_state_params(weights)
                sym = stationary_symbolic(spec).active()
                ref = activity_fraction(params.a, params.b) if which == "producer" else activity_fraction(
                    params.a_prime, params.b_prime)
                _require(sym.numerator * ref.denominator == ref.numerator * sym.denominator,
                         f"{name} {which}: stationary activity differs from the weight formula")
        return len(GADGETS)

    def compiler_soundness(self):
        rng = self.rng(5)
        for c in range(self.cases):
            e = self.expr(4, 3, rng.randrange(1 << 30))
            net = compile_rfnc_to_cascade(e, 3)
            for _ in range(5):
                x = random_point(rng, 3)
                try:
                    v = evaluate(e, x)
                except DivisionByZeroError:
                    continue
                _require(network_outputs(net, x)[0] == v, f"case {c}: cascade equilibrium != eval")
        return self.cases

    def triangle_closure(self):
        rng = self.rng(6)
        n = max(1, self.cases // 2)
        for c in range(n):
            model = random_model(rng, max_s=3, max_f=3, max_observations=3)
            _, exprs = model_to_rfnc(model)
            net = compile_rfnc_to_cascade(exprs, model.dimension)
            for k in model.labels:
                x = likelihood_inputs(model, k)
                got = network_outputs(net, x)
                _require(got == posterior_ratios(model, k), f"case {c}: cascade ratios != posterior ratios")
        return n

    # -- markov --------------------------------------------------------------
    def nonneg_theorem(self):
        for n in range(2, 6):
            report = nonneg_theorem_check(n)
            _require(report.coefficient_set() <= {1}, f"n={n}: coefficient outside {{0,1}}")
            _require(report.monomial_counts() == (n ** (n - 2),) * n, f"n={n}: unexpected monomial count")
        return 4

    def stationary_vs_power(self):
        rng = np.random.default_rng(self.seed + 7)
        for c in range(self.cases):
            n = int(rng.integers(2, 9))
            M = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
            for i in range(n):
                M[(i + 1) % n, i] += rng.random() + 0.1  # a ring keeps the chain irreducible
            np.fill_diagonal(M, 0)
            M /= M.sum(axis=0).max() * (1 + rng.random())
            M += np.diag(1 - M.sum(axis=0))
            T = TransitionMatrix(M)
            pi = stationary(T)
            _require(np.max(np.abs(M @ pi - pi)) <= 1e-12, f"case {c}: fixed-point residual")
            _require(np.max(np.abs(pi - power_iteration(T))) <= 1e-10, f"case {c}: power iteration disagrees")
        return self.cases

    def detailed_balance(self):
        rng = self.rng(8)
        n = max(1, self.cases // 5)
        for c in range(n):
            weights = {s: Fraction(rng.randint(1, 9), rng.randint(1, 9))
                       for s in [(i & 1, (i >> 1) & 1, i >> 2) for i in range(8)]}
            weights[(0, 0, 0)] = Fraction(1)
            spec = gadget_state_params(weights, beta=rng.randint(1, 5), k_act=rng.randint(1, 5))
            x = [rng.uniform(0.1, 5), rng.uniform(0.1, 5)]
            T = build_chain(spec, x, 1e-3)
            _require(detailed_balance_residual(T, stationary(T)) <= 1e-12, f"case {c}: detailed balance residual")
        return n

    def symbolic_vs_numeric(self):
        rng = self.rng(9)
        n = max(1, self.cases // 5)
        for c in range(n):
            weights = {(0, 0, 0): Fraction(1)}
            for i in range(1, 8):
                if rng.random() < 0.8:
                    weights[(i & 1, (i >> 1) & 1, i >> 2)] = Fraction(rng.randint(1, 9), rng.randint(1, 4))
            try:
                spec = gadget_state_params(weights, beta=rng.randint(1, 5), k_act=rng.randint(1, 5))
            except ValueError:
                continue
            sym = stationary_symbolic(spec)
            for _ in range(5):
                x = [rng.uniform(0.1, 5), rng.uniform(0.1, 5)]
                numeric = stationary(build_chain(spec, x, 1e-3))
                _require(np.max(np.abs(np.array(sym.evaluate(x), dtype=float) - numeric)) <= 1e-10,
                         f"case {c}: symbolic and numeric stationary laws differ")
        return n

    def properties(self) -> list:
        return [
            ("normal_form_soundness", self.normal_form_soundness),
            ("parse_print_round_trip", self.parse_print_round_trip),
            ("round_trip_a", self.round_trip_a),
            ("round_trip_b", self.round_trip_b),
            ("gadget_identities", self.gadget_identities),
            ("compiler_soundness", self.compiler_soundness),
            ("triangle_closure", self.triangle_closure),
            ("nonneg_theorem", self.nonneg_theorem),
            ("stationary_vs_power", self.stationary_vs_power),
            ("detailed_balance", self.detailed_balance),
            ("symbolic_vs_numeric", self.symbolic_vs_numeric),
        ]


@dataclass(frozen=True)
class Outcome:
    name: str
    passed: bool
    cases: int
    detail: str

    def csv(self) -> str:
        detail = self.detail.replace('"', "'")
        return f'{self.name},{"PASS" if self.passed else "FAIL"},{self.cases},"{detail}"'


def run_suite(seed: int = 0, cases: int = DEFAULT_CASES, mutant: bool = False,
              only: Callable[[str], bool] | None = None) -> list:
    suite = Suite(seed, cases, mutant)
    outcomes = []
    for name, prop in suite.properties():
        if only is not None and not only(name):
            continue
        try:
            n = prop()
            outcomes.append(Outcome(name, True, n, "ok"))
        except Exception as exc:  # any exception is a property failure
            outcomes.append(Outcome(name, False, 0, f"{type(exc).__name__}: {exc}"))
    return outcomes


def report(outcomes) -> str:
    lines = ["property,status,cases,detail"]
    lines += [o.csv() for o in outcomes]
    failed = sum(not o.passed for o in outcomes)
    lines.append(f'summary,{"PASS" if failed == 0 else "FAIL"},{len(outcomes)},"{failed} failed"')
    return "\n".join(lines) + "\n"
