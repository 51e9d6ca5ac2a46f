"""Hamiltonian cycles in Cayley graphs of metacyclic groups of square-free order."""

from .errors import (
    CayleyHamError,
    NotConnectedError,
    NotGeneratingError,
    OracleTimeoutError,
    PreconditionError,
    RoleSwapLoopError,
    SizeGuardError,
    StructureError,
    TheoremViolationError,
    UnsupportedOrderError,
)
from .groups import (
    CentreInfo,
    GroupElement,
    GroupSpec,
    centre,
    commutator_subgroup,
    commutator_subgroup_order,
    crt_decompose,
    crt_recombine,
    element_order,
    generated_subgroup_order,
    in_commutator_subgroup,
    inv,
    is_generating_set,
    is_prime,
    mul,
    power,
    quotient_by_cyclic,
    square_free_prime_factors,
)
from .cayley import (
    GenWord,
    HamCertificate,
    VoltageRecord,
    check_hamiltonian_cycle,
    eval_walk,
    export_dot,
    is_hamiltonian_cycle,
)
from .fgl import fgl_lift, generates_cyclic, normal_easy_lift, voltage, voltage_projections
from .construct import (
    Companion,
    NormalizedGens,
    candidate_cycles,
    construct_case2,
    construct_case3,
    construct_hamiltonian,
    irredundant_subset,
    normalize_generators,
)
from .search import (
    SearchConfig,
    brute_force_ham,
    case2_generating_sets,
    case3_generating_set,
    cross_validate,
    enumerate_groups,
    oracle_cycle,
    sample_generating_sets,
)

__version__ = "0.1.0"

__all__ = [
    "CayleyHamError",
    "CentreInfo",
    "Companion",
    "GenWord",
    "GroupElement",
    "GroupSpec",
    "HamCertificate",
    "NormalizedGens",
    "NotConnectedError",
    "NotGeneratingError",
    "OracleTimeoutError",
    "PreconditionError",
    "RoleSwapLoopError",
    "SearchConfig",
    "SizeGuardError",
    "StructureError",
    "TheoremViolationError",
    "UnsupportedOrderError",
    "VoltageRecord",
    "brute_force_ham",
    "candidate_cycles",
    "case2_generating_sets",
    "case3_generating_set",
    "centre",
    "check_hamiltonian_cycle",
    "commutator_subgroup",
    "commutator_subgroup_order",
    "construct_case2",
    "construct_case3",
    "construct_hamiltonian",
    "cross_validate",
    "crt_decompose",
    "crt_recombine",
    "element_order",
    "enumerate_groups",
    "eval_walk",
    "export_dot",
    "fgl_lift",
    "generated_subgroup_order",
    "generates_cyclic",
    "in_commutator_subgroup",
    "inv",
    "irredundant_subset",
    "is_generating_set",
    "is_hamiltonian_cycle",
    "is_prime",
    "mul",
    "normal_easy_lift",
    "normalize_generators",
    "oracle_cycle",
    "power",
    "quotient_by_cyclic",
    "sample_generating_sets",
    "square_free_prime_factors",
    "voltage",
    "voltage_projections",
]
