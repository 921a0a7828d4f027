"""Conformational Markov chains of macromolecules."""

from biocascade.markov.chain import (
    TransitionMatrix,
    active_probability,
    admissible_dt,
    build_chain,
    closed_classes,
    detailed_balance_residual,
    is_irreducible,
    power_iteration,
    rate_matrix,
    residual,
    stationary,
    stationary_distribution,
)
from biocascade.markov.linalg import det_cofactor, det_exact, minor
from biocascade.markov.spec import (
    MacromoleculeSpec,
    Transition,
    label,
    load_spec,
    parse_state,
    single_site,
    two_site_receptor,
)
from biocascade.markov.symbolic import (
    SymbolicStationary,
    TheoremReport,
    generic_matrix,
    leibniz_det,
    nonneg_theorem_check,
    stationary_symbolic,
    symbolic_rate_matrix,
)

__all__ = [
    "MacromoleculeSpec",
    "SymbolicStationary",
    "TheoremReport",
    "Transition",
    "TransitionMatrix",
    "active_probability",
    "admissible_dt",
    "build_chain",
    "closed_classes",
    "det_cofactor",
    "det_exact",
    "detailed_balance_residual",
    "generic_matrix",
    "is_irreducible",
    "label",
    "leibniz_det",
    "load_spec",
    "minor",
    "nonneg_theorem_check",
    "parse_state",
    "power_iteration",
    "rate_matrix",
    "residual",
    "single_site",
    "stationary",
    "stationary_distribution",
    "stationary_symbolic",
    "symbolic_rate_matrix",
    "two_site_receptor",
]
