"""JSON reaction-system files for the ``simulate`` subcommand.

Layout::

    {
      "volume": 1.0,
      "species": ["X"], "initial": [0],
      "reactions": [{"rate": 1.0, "reactants": ["X"], "change": {"X": -1}}],
      "macromolecules": [
        {"prefix": "R", "spec": {...}, "messengers": ["X"], "count": 100, "state": "0"}
      ],
      "clamped": ["X"],
      "schedule": {"times": [0.01], "concentrations": [[2.0], [20.0]]}
    }

Raw ``reactions`` carry stochastic constants directly. Macromolecule specs
use macroscopic units (uM, s) and are converted with the volume. The
schedule may give ``counts`` instead of ``concentrations``.
"""

from __future__ import annotations

import json
from typing import Mapping

from biocascade.markov.spec import MacromoleculeSpec, label, parse_state
from biocascade.sim.system import ClampSchedule, Reaction, ReactionSystem, macromolecule_reactions


def system_from_dict(data: Mapping):
    volume = float(data.get("volume", 1.0))
    species = list(data.get("species", []))
    initial = [int(v) for v in data.get("initial", [0] * len(species))]
    if len(initial) != len(species):
        raise ValueError("one initial count per species")
    counts = dict(zip(species, initial))
    reactions = [
        Reaction(float(r["rate"]), tuple(r.get("reactants", ())), dict(r.get("change", {})), r.get("name", ""))
        for r in data.get("reactions", [])
    ]
    for mm in data.get("macromolecules", []):
        spec = MacromoleculeSpec.from_dict(mm["spec"])
        prefix = mm.get("prefix", "M")
        names, rx = macromolecule_reactions(spec, prefix, list(mm.get("messengers", [])), volume)
        for name in names:
            if name not in counts:
                species.append(name)
                counts[name] = 0
        start = parse_state(mm.get("state", label(spec.states[0])))
        counts[f"{prefix}{label(start)}"] = int(mm.get("count", 0))
        reactions.extend(rx)
    for r in reactions:
        for s in list(r.reactants) + list(r.change):
            if s not in counts:
                species.append(s)
                counts[s] = 0
    clamped = tuple(data.get("clamped", ()))
    system = ReactionSystem(tuple(species), tuple(reactions), tuple(counts[s] for s in species), clamped, volume)
    schedule = None
    sched = data.get("schedule")
    if sched is not None:
        which = tuple(sched.get("species", clamped))
        if "counts" in sched:
            schedule = ClampSchedule(which, tuple(sched.get("times", ())), tuple(map(tuple, sched["counts"])))
        else:
            schedule = ClampSchedule.from_concentrations(
                which, tuple(sched.get("times", ())), [tuple(v) if isinstance(v, list) else v
                                                      for v in sched["concentrations"]], volume
            )
    return system, schedule


def load_system(path):
    with open(path) as fh:
        return system_from_dict(json.load(fh))
