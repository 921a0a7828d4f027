"""Exact Bayesian inference, RFNCs and biochemical cascades.

Subpackages:

* :mod:`biocascade.rfnc` - expression trees and canonical forms
* :mod:`biocascade.bayes` - discrete models, model<->RFNC compilers
* :mod:`biocascade.markov` - conformational Markov chains, stationary laws
* :mod:`biocascade.cascade` - producer/remover networks and gadgets
* :mod:`biocascade.sim` - Gillespie direct method and ODE companions
"""

__version__ = "0.1.0"
