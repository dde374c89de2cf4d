"""Exact finite analysis of local group actions.

Everything is computed on explicit finite instances: a finite group acting on
a finite point set, with finite families of point sets and identity
neighbourhoods.  The package provides local saturations and orbits, reach
sets, Vaught transforms, the level-by-level canonical piece partitions with
their ranks, the refined piece topologies with openness checks, the
classification report, and a differential oracle harness that validates the
structural identities the engine relies on.
"""

from .algebra import (
    Group,
    GroupError,
    NeighborhoodFamily,
    all_subgroups,
    build_group,
    close_neighborhood_family,
    conjugate,
    cyclic_group,
    dihedral_group,
    direct_product,
    group_from_generators,
    group_from_table,
    symmetric_closure,
    symmetric_group_3,
)
from .bits import bits, is_subset, mask_of, to_list, universe
from .classify import (
    classification_report,
    eventual_openness,
    invariant_containment_check,
)
from .gspace import (
    ActionInstance,
    InstanceError,
    NAMED_INSTANCES,
    SetFamily,
    build_instance,
    instance_from_families,
    make_coset_action,
    make_cyclic_self,
    make_product,
    make_random,
    make_swap_fix,
    make_z4_coarse,
    make_z4_pairs,
    named_instance,
    orbit,
    translate_set,
)
from .harness import (
    InstanceFormatError,
    SUITES,
    build_analysis,
    instance_to_dict,
    load_instance,
    parse_instance,
    run_oracles,
    serialize_analysis,
    serialize_instance,
)
from .saturation import (
    group_coset_partition,
    is_locally_invariant,
    local_orbit,
    orbit_partition,
    reach_common,
    reach_sets,
    saturate,
)
from .scott import (
    PieceTable,
    STABLE,
    Signature,
    analyze,
    pattern_partition,
    piece,
    piece_from_decomposition,
    scott_rank,
    signature,
    stable_partition,
)
from .topology import (
    FiniteTopology,
    RelativeAnalysis,
    generate_topology,
    minimal_neighborhood,
    open_map_check,
    refined_family,
    refined_space,
    relative_pieces,
)
from .transforms import (
    delta,
    local_delta,
    local_delta_n,
    local_star,
    local_star_n,
    star,
)

__version__ = "0.1.0"

__all__ = [
    "ActionInstance",
    "FiniteTopology",
    "Group",
    "GroupError",
    "InstanceError",
    "InstanceFormatError",
    "NAMED_INSTANCES",
    "NeighborhoodFamily",
    "PieceTable",
    "RelativeAnalysis",
    "STABLE",
    "SUITES",
    "SetFamily",
    "Signature",
    "all_subgroups",
    "analyze",
    "bits",
    "build_analysis",
    "build_group",
    "build_instance",
    "classification_report",
    "close_neighborhood_family",
    "conjugate",
    "cyclic_group",
    "delta",
    "dihedral_group",
    "direct_product",
    "eventual_openness",
    "generate_topology",
    "group_coset_partition",
    "group_from_generators",
    "group_from_table",
    "instance_from_families",
    "instance_to_dict",
    "invariant_containment_check",
    "is_locally_invariant",
    "is_subset",
    "load_instance",
    "local_delta",
    "local_delta_n",
    "local_orbit",
    "local_star",
    "local_star_n",
    "make_coset_action",
    "make_cyclic_self",
    "make_product",
    "make_random",
    "make_swap_fix",
    "make_z4_coarse",
    "make_z4_pairs",
    "mask_of",
    "minimal_neighborhood",
    "named_instance",
    "open_map_check",
    "orbit",
    "orbit_partition",
    "parse_instance",
    "pattern_partition",
    "piece",
    "piece_from_decomposition",
    "reach_common",
    "reach_sets",
    "refined_family",
    "refined_space",
    "relative_pieces",
    "run_oracles",
    "saturate",
    "scott_rank",
    "serialize_analysis",
    "serialize_instance",
    "signature",
    "stable_partition",
    "star",
    "symmetric_closure",
    "symmetric_group_3",
    "to_list",
    "translate_set",
    "universe",
]
