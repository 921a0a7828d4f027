"""Command-line entry point.

Exit codes: 0 ok, 1 property or check failure, 2 parse/format error,
3 model precondition violated, 4 compile check mismatch, 5 simulation error.
The default seed is fixed; ``BIOCASCADE_SEED`` overrides it.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

import numpy as np

from biocascade import errors

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_MODEL = 3
EXIT_COMPILE = 4
EXIT_SIMULATION = 5

FALLBACK_SEED = 20120901


def default_seed() -> int:
    value = os.environ.get("BIOCASCADE_SEED")
    return int(value) if value not in (None, "") else FALLBACK_SEED


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _fmt_value(v, as_float=False) -> str:
    if isinstance(v, Fraction) and not as_float:
        return str(v)
    return f"{float(v):.12g}"


def _parse_vector(text: str) -> list:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(EXIT_PARSE, f"bad vector {text!r}: {exc}") from None


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from None


def _emit(text: str, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------


def cmd_infer(args) -> int:
    from biocascade.bayes import BayesModel, enumerate_posterior_ratios, posterior_ratios

    model = BayesModel.from_dict(_load_json(args.model))
    labels = args.observation or model.labels
    lines = ["observation," + ",".join(f"S{s}" for s in range(model.n_s))]
    ok = True
    for k in labels:
        ratios = posterior_ratios(model, k)
        if args.verify:
            ok &= ratios == enumerate_posterior_ratios(model, k)
        lines.append(f"{k}," + ",".join(_fmt_value(r, args.float) for r in ratios))
    if args.verify:
        lines.append("verify," + ("OK" if ok else "MISMATCH"))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_PROPERTY


def _random_points(seed, n_inputs, count):
    rng = random.Random(seed)
    return [[Fraction(rng.randint(1, 30), rng.randint(1, 7)) for _ in range(n_inputs)] for _ in range(count)]


def cmd_compile(args) -> int:
    from biocascade.bayes import compile_rfnc_to_model, metamodel_posterior_odds
    from biocascade.bayes.metamodel import from_dict as meta_from_dict
    from biocascade.bayes.metamodel import to_dict as meta_to_dict
    from biocascade.cascade import CascadeNetwork, compile_rfnc_to_cascade, network_outputs
    from biocascade.rfnc import evaluate, n_inputs, parse

    expr = parse(args.rfnc)
    dim = max(n_inputs(expr), args.inputs or 0)
    if args.target == "bayes":
        artifact = meta_to_dict(compile_rfnc_to_model(expr))
        reloaded = meta_from_dict(json.loads(json.dumps(artifact)))

        def run(x):
            return metamodel_posterior_odds(reloaded, x)
    else:
        artifact = compile_rfnc_to_cascade(expr, dim).to_dict()
        network = CascadeNetwork.from_dict(json.loads(json.dumps(artifact)))

        def run(x):
            return network_outputs(network, x)[0]

    _emit(json.dumps(artifact, indent=2, sort_keys=True) + "\n", args.out)
    if not args.check:
        return EXIT_OK
    worst = Fraction(0)
    for x in _random_points(args.seed, dim, args.cases):
        try:
            want = evaluate(expr, x)
        except errors.DivisionByZeroError:
            continue
        worst = max(worst, abs(Fraction(run(x)) - want))
    tol = Fraction(args.tolerance)
    status = "OK" if worst <= tol else "MISMATCH"
    sys.stderr.write(f"check,{args.target},{args.cases},max_deviation={worst},{status}\n")
    return EXIT_OK if worst <= tol else EXIT_COMPILE


def cmd_equilibrium(args) -> int:
    from biocascade.cascade import CascadeNetwork, equilibrium_concentration

    network = CascadeNetwork.from_dict(_load_json(args.network))
    conc = equilibrium_concentration(network, _parse_vector(args.x))
    lines = ["messenger,concentration"]
    lines += [f"{k},{_fmt_value(v, args.float)}" for k, v in conc.items()]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_stationary(args) -> int:
    from biocascade.markov import MacromoleculeSpec, build_chain, stationary, stationary_symbolic
    from biocascade.markov.chain import admissible_dt

    spec = MacromoleculeSpec.from_dict(_load_json(args.spec))
    x = _parse_vector(args.x) if args.x else []
    mask = spec.active_mask()
    lines = ["state,probability,active"]
    if args.symbolic:
        sym = stationary_symbolic(spec)
        for lab, comp, on in zip(spec.labels, sym.components, mask):
            lines.append(f"{lab},{comp},{int(on)}")
        lines.append(f"ACTIVE,{sym.active()},")
    else:
        dt = Fraction(args.dt) if args.dt else admissible_dt(spec, x)
        pi = stationary(build_chain(spec, x, dt))
        for lab, p, on in zip(spec.labels, pi, mask):
            lines.append(f"{lab},{_fmt_value(p, args.float)},{int(on)}")
        lines.append(f"ACTIVE,{_fmt_value(sum(p for p, on in zip(pi, mask) if on), args.float)},")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from biocascade.sim import ensemble
    from biocascade.sim.io import system_from_dict

    system, schedule = system_from_dict(_load_json(args.system))
    grid = np.round(np.arange(0.0, args.t_end + args.grid / 2, args.grid), 12)
    stats = ensemble(system, args.replicates, args.t_end, args.seed, grid, schedule)
    lines = [f"# simulate seed={args.seed} N={args.replicates} t_end={args.t_end:.10g} grid={args.grid:.10g}"]
    if args.replicates == 1:
        lines.append("time," + ",".join(system.species))
        for g, t in enumerate(grid):
            lines.append(f"{t:.10g}," + ",".join(str(int(v)) for v in stats.mean[g]))
    else:
        lines.append("time," + ",".join(f"{s}_mean,{s}_std" for s in system.species))
        for g, t in enumerate(grid):
            vals = ",".join(f"{stats.mean[g, i]:.10g},{stats.std[g, i]:.10g}" for i in range(len(system.species)))
            lines.append(f"{t:.10g},{vals}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    from biocascade.sim.figures import FIGURES

    kwargs = {"seed": args.seed}
    if args.replicates is not None:
        kwargs["n"] = args.replicates
    if args.tolerance is not None:
        kwargs["n_sigma"] = args.tolerance
    result = FIGURES[args.figure](**kwargs)
    _emit(result.to_csv(), args.out)
    failed = [c for c in result.checks if not c.passed]
    sys.stderr.write(f"{result.name}: {len(result.checks) - len(failed)}/{len(result.checks)} checks passed\n")
    for c in failed:
        sys.stderr.write(c.line() + "\n")
    return EXIT_PROPERTY if (args.check and failed) else EXIT_OK


def cmd_verify(args) -> int:
    from biocascade.verify import report, run_suite

    outcomes = run_suite(args.seed, args.cases, mutant=args.inject_mutant)
    _emit(report(outcomes), args.out)
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_PROPERTY


def cmd_parse(args) -> int:
    from biocascade.rfnc import parse, to_text, to_tree

    expr = parse(args.rfnc)
    _emit((to_tree(expr) if args.tree else to_text(expr)) + "\n", args.out)
    return EXIT_OK


# -- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biocascade", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--out", help="write output here instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, default=default_seed(), help="master seed")
        return p

    p = common(sub.add_parser("infer", help="posterior ratios of a model file"))
    p.add_argument("model")
    p.add_argument("--observation", action="append", help="observation label (repeatable; default all)")
    p.add_argument("--verify", action="store_true", help="compare with brute-force enumeration")
    p.add_argument("--float", action="store_true", help="print decimals instead of fractions")
    p.set_defaults(func=cmd_infer)

    p = common(sub.add_parser("compile", help="compile an RFNC to a metamodel or cascade"), seed=True)
    p.add_argument("rfnc")
    p.add_argument("--target", choices=("bayes", "cascade"), default="cascade")
    p.add_argument("--inputs", type=int, help="input dimension (default: highest index + 1)")
    p.add_argument("--check", action="store_true", help="evaluate both sides at random points")
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--tolerance", default="0", help="allowed deviation for --check (exact rational)")
    p.set_defaults(func=cmd_compile)

    p = common(sub.add_parser("equilibrium", help="equilibrium concentrations of a network file"))
    p.add_argument("network")
    p.add_argument("--x", required=True, help="comma-separated primary input concentrations")
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=cmd_equilibrium)

    p = common(sub.add_parser("stationary", help="stationary law of a macromolecule spec"))
    p.add_argument("spec")
    p.add_argument("--x", default="", help="comma-separated messenger concentrations")
    p.add_argument("--dt", help="uniformization step (default: automatic)")
    p.add_argument("--symbolic", action="store_true", help="print the RFNC in the concentrations")
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=cmd_stationary)

    p = common(sub.add_parser("simulate", help="Gillespie ensemble of a reaction-system file"), seed=True)
    p.add_argument("system")
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--grid", type=float, required=True, help="output sampling step (s)")
    p.set_defaults(func=cmd_simulate)

    for n in (1, 2, 3):
        p = common(sub.add_parser(f"figure{n}", help=f"CSV behind figure {n}"), seed=True)
        p.add_argument("--replicates", type=int, default=None)
        p.add_argument("--check", action="store_true", help="exit 1 if any statistical check fails")
        p.add_argument("--tolerance", type=float, default=None, help="band width in standard errors")
        p.set_defaults(func=cmd_figure, figure=n)

    p = common(sub.add_parser("verify", help="run the property suite"), seed=True)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--inject-mutant", action="store_true", help="negate a constant to test the harness")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("parse", help="parse and reprint an RFNC"))
    p.add_argument("rfnc")
    p.add_argument("--tree", action="store_true", help="print constructor form")
    p.set_defaults(func=cmd_parse)
    return parser


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (errors.RfncSyntaxError, errors.NegativeConstantError, errors.SpecError,
                        errors.NetworkError, json.JSONDecodeError)):
        return EXIT_PARSE
    if isinstance(exc, (errors.ModelError, errors.NoEquilibriumError, errors.DivisionByZeroError,
                        errors.ReducibleError, errors.DimensionMismatchError, errors.NegativeRateError,
                        errors.UnreachableStateError)):
        return EXIT_MODEL
    if isinstance(exc, (errors.StalledError, errors.UnstableStepError, errors.TimeStepTooLargeError)):
        return EXIT_SIMULATION
    return EXIT_PARSE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (errors.BiocascadeError, KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
