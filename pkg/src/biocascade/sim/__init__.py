"""Stochastic simulation, moment ODEs and the reproduction protocols."""

from biocascade.sim.figures import DEFAULT_SEED, FIGURES, Check, FigureResult, figure1, figure2, figure3
from biocascade.sim.io import load_system, system_from_dict
from biocascade.sim.ode import (
    DEFAULT_DT,
    InputSchedule,
    OdeConfig,
    generator_matrix,
    ode_master,
    ode_mean_var,
    ode_relax_y,
)
from biocascade.sim.ssa import EnsembleStats, Trajectory, ensemble, gillespie_run, replicate_rng
from biocascade.sim.system import (
    ClampSchedule,
    Reaction,
    ReactionSystem,
    gillespie_step,
    macromolecule_reactions,
    propensities,
)
from biocascade.sim.units import (
    MOLECULES_PER_UM_UM3,
    bimolecular_constant,
    concentration_to_count,
    count_to_concentration,
)

__all__ = [
    "Check",
    "DEFAULT_SEED",
    "FIGURES",
    "FigureResult",
    "figure1",
    "figure2",
    "figure3",
    "load_system",
    "system_from_dict",
    "ClampSchedule",
    "EnsembleStats",
    "InputSchedule",
    "MOLECULES_PER_UM_UM3",
    "OdeConfig",
    "DEFAULT_DT",
    "Reaction",
    "ReactionSystem",
    "Trajectory",
    "bimolecular_constant",
    "concentration_to_count",
    "count_to_concentration",
    "ensemble",
    "generator_matrix",
    "gillespie_run",
    "gillespie_step",
    "macromolecule_reactions",
    "ode_master",
    "ode_mean_var",
    "ode_relax_y",
    "propensities",
    "replicate_rng",
]
