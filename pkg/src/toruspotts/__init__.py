"""Exact cluster-weight decompositions and transfer matrices on finite tori.

The package computes, in exact rational arithmetic, the decomposition of
the random-cluster partition function on an L x N torus into level and
irrep resolved transfer-matrix characters, the eigenvalue amplitudes that
weigh them (by two independent routes), and brute-force enumeration
oracles that verify every identity on finite lattices.
"""

__version__ = "0.1.0"

from .exact import ComplexF, PolyQ, Rat, as_rat, rat_str
from .lattice import CouplingSpec, Edge, TorusGraph, build_torus
from .homotopy import (
    ClusterInfo,
    ConfigSummary,
    HomotopyClass,
    classify_cluster,
    find_clusters,
    summarize_config,
)
from .numtheory import (
    amplitude_closed_form,
    amplitude_table,
    annulus_state_count,
    class_character_sum,
    class_members,
    cycle_class_weight,
    divisors,
    level_amplitude_sum,
    level_amplitude_term,
    loop_weight,
    mobius,
    sector_amplitude,
    sum_of_sector_amplitudes,
    totient,
)
from .oracle import (
    OracleCharacters,
    RestrictedZTable,
    characters_from_table,
    partition_function,
    reconstruction_residuals,
    restricted_z_table,
)
from .states import (
    ConnState,
    MarkPermutation,
    apply_mark_shift,
    canonical_labels,
    enumerate_states,
    labeled_states,
)
from .transfer import (
    RowCouplings,
    RowOperator,
    SectorSpectrum,
    build_row_operator,
    class_trace,
    irrep_trace,
    level_trace,
    sector_spectrum,
    twisted_trace,
)
from .verify import (
    VerificationReport,
    desk_suite,
    quick_suite,
    verify_amplitudes,
    verify_graph,
    verify_spectral,
)
