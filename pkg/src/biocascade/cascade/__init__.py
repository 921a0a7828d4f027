"""Biochemical cascades: equilibrium messenger concentrations and the RFNC compiler."""

from biocascade.cascade.gadget import (
    A_STATES,
    B_STATES,
    GADGETS,
    GadgetParams,
    activity_fraction,
    check_reachable,
    gadget,
    gadget_output,
    gadget_state_params,
    state_weights,
)
from biocascade.cascade.network import (
    CascadeNetwork,
    CascadeNode,
    active_probability,
    basic_example_node,
    compile_rfnc_to_cascade,
    equilibrium_concentration,
    flux_production,
    flux_removal,
    gadget_node,
    load_network,
    network_outputs,
    node_equilibrium,
    passthrough_node,
    save_network,
)

__all__ = [
    "A_STATES",
    "B_STATES",
    "CascadeNetwork",
    "CascadeNode",
    "GADGETS",
    "GadgetParams",
    "active_probability",
    "activity_fraction",
    "basic_example_node",
    "check_reachable",
    "compile_rfnc_to_cascade",
    "equilibrium_concentration",
    "flux_production",
    "flux_removal",
    "gadget",
    "gadget_node",
    "gadget_output",
    "gadget_state_params",
    "load_network",
    "network_outputs",
    "node_equilibrium",
    "passthrough_node",
    "save_network",
    "state_weights",
]
