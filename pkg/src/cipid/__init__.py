"""Partial information decomposition over finite discrete distributions.

The package decomposes the information several predictor groups carry
about a target into redundant, unique, and synergistic parts.  The
central measures are a union information built from conditional
independence constraints and the synergy it induces; alongside them
live the classical comparison measures (whole-minus-sum synergy, the
Williams and Beer lattice, the correlational-importance penalty) and
two optimization-based measures (union information over couplings with
fixed per-source channels, and redundancy as the best common
degradation of the source channels).
"""

__version__ = "0.1.0"

from .errors import (
    ArgumentError,
    ConsistencyError,
    DomainError,
    IterationLimitError,
    ParseError,
    PidError,
    SolverError,
    UnsupportedError,
)
from .distribution import (
    Channel,
    JointDistribution,
    VariableSet,
    channel_from,
    conditional_mutual_information,
    entropy,
    kl_divergence,
    marginalize,
    mutual_information,
)
from .sources import (
    CiPartition,
    Source,
    SourceCollection,
    enumerate_ci_partitions,
    is_deterministic,
    normalize_sources,
)
from .ci import (
    PidResult,
    build_q,
    ci_bivariate_decomposition,
    ci_synergy,
    ci_union_information,
)
from .classic import (
    RedundancyLattice,
    delta_i_synergy,
    dep_synergy,
    iep_bivariate_from_redundancy,
    imin_redundancy,
    maxent_ipf,
    redundancy_lattice,
    specific_information,
    wb_pid,
    wb_synergy,
    wb_union_information,
    wms_synergy,
)
from .simplex import LpSolution, solve_lp
from .channels import (
    DegradationWitness,
    OptimizationReport,
    degradation_leq,
    degradation_redundancy,
    s_d,
    vk_union_information,
)
from .corpus import (
    CORPUS,
    canonical,
    corpus_names,
    load_distribution,
    save_distribution,
)
from .axioms import PropertyReport, run_axiom_suite

__all__ = [
    "__version__",
    "PidError",
    "ArgumentError",
    "DomainError",
    "ParseError",
    "SolverError",
    "IterationLimitError",
    "UnsupportedError",
    "ConsistencyError",
    "VariableSet",
    "JointDistribution",
    "Channel",
    "channel_from",
    "entropy",
    "mutual_information",
    "conditional_mutual_information",
    "marginalize",
    "kl_divergence",
    "Source",
    "SourceCollection",
    "CiPartition",
    "normalize_sources",
    "is_deterministic",
    "enumerate_ci_partitions",
    "PidResult",
    "build_q",
    "ci_union_information",
    "ci_synergy",
    "ci_bivariate_decomposition",
    "wms_synergy",
    "specific_information",
    "imin_redundancy",
    "RedundancyLattice",
    "redundancy_lattice",
    "wb_pid",
    "wb_synergy",
    "wb_union_information",
    "delta_i_synergy",
    "maxent_ipf",
    "dep_synergy",
    "iep_bivariate_from_redundancy",
    "LpSolution",
    "solve_lp",
    "DegradationWitness",
    "OptimizationReport",
    "degradation_leq",
    "degradation_redundancy",
    "vk_union_information",
    "s_d",
    "CORPUS",
    "corpus_names",
    "canonical",
    "load_distribution",
    "save_distribution",
    "PropertyReport",
    "run_axiom_suite",
]
