"""Entanglement measures and monogamy lower bounds for small qubit systems."""

from .bounds import (
    BoundReport,
    BoundSpec,
    EntanglementProfile,
    Family,
    chain_new,
    chain_prior,
    check_conditions,
    coefficient_M,
    lemma1_gap,
    tripartite_family,
    tripartite_new,
)
from .gsd import SchmidtParams, gsd_analytic_measures, make_gsd_state
from .measures import (
    concurrence_pure,
    concurrence_two_qubit,
    cren_two_qubit,
    negativity,
    negativity_pure,
)

__version__ = "0.1.0"
