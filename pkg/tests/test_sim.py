from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biocascade.errors import StalledError, UnstableStepError
from biocascade.markov import rate_matrix, single_site, stationary_distribution
from biocascade.sim import (
    ClampSchedule,
    InputSchedule,
    OdeConfig,
    Reaction,
    ReactionSystem,
    concentration_to_count,
    count_to_concentration,
    ensemble,
    gillespie_run,
    gillespie_step,
    macromolecule_reactions,
    ode_master,
    ode_mean_var,
    ode_relax_y,
    propensities,
    system_from_dict,
)
from biocascade.sim import ssa
from biocascade.sim.figures import Check, FigureResult, fit_scale

BIRTH_DEATH = ReactionSystem(
    ("X",), (Reaction(50.0, (), {"X": 1}, "birth"), Reaction(2.0, ("X",), {"X": -1}, "death")), (0,)
)


def test_unit_conversion():
    assert concentration_to_count(2.0) == 1204
    assert concentration_to_count(20.0) == 12044
    assert count_to_concentration(602214, 1000.0) == pytest.approx(1.0)


def test_propensity_repeated_reactant():
    sys_ = ReactionSystem(("A",), (Reaction(0.5, ("A", "A"), {"A": -2}),), (6,))
    a, a0 = propensities(sys_)
    assert a0 == 0.5 * 6 * 5 / 2


def test_step_stalls_without_propensity():
    with pytest.raises(StalledError):
        gillespie_step(ReactionSystem(("X",), (), (0,)), np.random.default_rng(0))


def test_step_updates_state():
    dt, r, x = gillespie_step(BIRTH_DEATH, np.random.default_rng(1))
    assert dt > 0 and r == 0 and list(x) == [1]


def test_birth_death_stationary_mean():
    # Immigration-death has a Poisson(lambda/mu) stationary law.
    grid = np.linspace(5.0, 6.0, 3)
    stats = ensemble(BIRTH_DEATH, 400, 6.0, master_seed=3, grid=grid)
    mean, std = stats.column("X")
    se = 5.0 / np.sqrt(400)
    assert np.all(np.abs(mean - 25.0) <= 4 * se)
    assert np.all(np.abs(std - 5.0) <= 1.0)


def test_same_seed_same_trajectory():
    a = gillespie_run(BIRTH_DEATH, 2.0, seed=9, replicate=2)
    b = gillespie_run(BIRTH_DEATH, 2.0, seed=9, replicate=2)
    c = gillespie_run(BIRTH_DEATH, 2.0, seed=9, replicate=3)
    assert np.array_equal(a.times, b.times) and np.array_equal(a.states, b.states)
    assert not np.array_equal(a.states[:50], c.states[:50])


def test_stream_independent_of_chunk_size(monkeypatch):
    ref = gillespie_run(BIRTH_DEATH, 3.0, seed=5)
    monkeypatch.setattr(ssa, "UNIFORM_CHUNK", 7)
    small = gillespie_run(BIRTH_DEATH, 3.0, seed=5)
    assert np.array_equal(ref.times, small.times) and np.array_equal(ref.states, small.states)


def test_clamp_schedule_holds_counts():
    spec = single_site(150.0, 8000.0)
    names, rx = macromolecule_reactions(spec, "R", ["X"], volume=1.0)
    system = ReactionSystem(("X",) + tuple(names), tuple(rx), (0, 100, 0), clamped=("X",))
    sched = ClampSchedule.from_concentrations(("X",), (0.01,), [2.0, 20.0])
    grid = np.array([0.0, 0.005, 0.0099, 0.0101, 0.02])
    stats = ensemble(system, 3, 0.02, 1, grid, sched)
    assert list(stats.mean[:, 0]) == [1204, 1204, 1204, 12044, 12044]
    assert np.all(stats.mean[:, 1] + stats.mean[:, 2] == 100)


def test_binding_consumes_messenger():
    _, rx = macromolecule_reactions(single_site(1.0, 1.0), "R", ["X"])
    assert rx[0].change == {"R0": -1, "R1": 1, "X": -1}
    assert rx[1].change == {"R1": -1, "R0": 1, "X": 1}


def test_ode_mean_var_relaxes_to_binomial():
    alpha, beta, x = 8000.0, 150.0, 20.0
    t, q, v = ode_mean_var(alpha, beta, InputSchedule((), (x,)), OdeConfig(t_end=0.01), q0=0.0, v0=0.0)
    p = beta * x / (alpha + beta * x)
    assert q[-1] == pytest.approx(p, abs=1e-9)
    assert v[-1] == pytest.approx(p * (1 - p), abs=1e-9)


def test_ode_unstable_step():
    with pytest.raises(UnstableStepError):
        ode_mean_var(8000.0, 150.0, InputSchedule((), (20.0,)), OdeConfig(dt=1e-3))


def test_master_equation_reaches_stationary():
    spec = single_site(Fraction(150), Fraction(8000))
    rate_fn = lambda x: rate_matrix(spec, [x]).astype(float)
    t, p = ode_master(rate_fn, [1.0, 0.0], InputSchedule((), (2.0,)), OdeConfig(t_end=0.01))
    assert np.allclose(p[-1], stationary_distribution(spec, [Fraction(2)]).astype(float), atol=1e-10)


def test_relax_y_fixed_point():
    t, y = ode_relax_y(lambda x: 3.0 * x, lambda x: 2.0, InputSchedule((), (4.0,)), OdeConfig(dt=0.01, tau=0.1, t_end=2.0))
    assert y[-1] == pytest.approx(6.0, rel=1e-9)


def test_system_file():
    data = {
        "volume": 1.0,
        "species": ["X"], "initial": [0],
        "macromolecules": [{"prefix": "R", "spec": single_site(150, 8000).to_dict(), "messengers": ["X"], "count": 10}],
        "clamped": ["X"],
        "schedule": {"times": [0.01], "concentrations": [2.0, 20.0]},
    }
    system, sched = system_from_dict(data)
    assert system.species == ("X", "R0", "R1") and system.initial == (0, 10, 0)
    assert sched.counts == ((1204,), (12044,))


def test_check_and_csv():
    ok = Check("a", 1.0, 1.05, 0.1)
    assert ok.passed and ok.line().startswith("PASS")
    res = FigureResult("demo", {"t": [0.0, 1.0], "n": np.array([1, 2])}, {"seed": 3}, [ok])
    assert res.to_csv() == "# demo seed=3\nt,n\n0,1\n1,2\n"


@settings(max_examples=25)
@given(st.lists(st.floats(0.1, 10), min_size=2, max_size=10), st.floats(0.2, 5))
def test_fit_scale_recovers_factor(target, k):
    t = np.array(target)
    assert fit_scale(t / k, t) == pytest.approx(k, rel=1e-9)
