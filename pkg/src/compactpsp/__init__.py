"""Compact set packing: gadgets, reductions from subgraph isomorphism, exact solvers."""

from __future__ import annotations

__version__ = "0.1.0"

from .core import (
    BitSet,
    Graph,
    Isomorphism,
    PackingWitness,
    PspInstance,
    SetFamily,
    SubIsoInstance,
    XcoverInstance,
    complement,
    is_exact_cover,
    is_injective_homomorphism,
    is_packing,
    restrict,
)
from .errors import (
    ArgumentError,
    BudgetError,
    CompactPspError,
    EquivalenceFailure,
    PreconditionError,
    RangeError,
    SoundnessViolation,
    WitnessNotFoundError,
)
from .gadget import IssPair, build_compatible_iss, check_compatible_pair
from .reduction import (
    OrderedPattern,
    ReducedPspInstance,
    base_gadget_size,
    build_psp_instance,
    build_xcover_instance,
    embed_isomorphism_as_packing,
    enumerate_orderings,
    lift_packing_to_isomorphism,
    sort_pattern_for,
    vectorize_instance,
)

__all__ = [
    "ArgumentError",
    "BitSet",
    "BudgetError",
    "CompactPspError",
    "EquivalenceFailure",
    "Graph",
    "Isomorphism",
    "IssPair",
    "OrderedPattern",
    "PackingWitness",
    "PreconditionError",
    "PspInstance",
    "RangeError",
    "ReducedPspInstance",
    "SetFamily",
    "SoundnessViolation",
    "SubIsoInstance",
    "WitnessNotFoundError",
    "XcoverInstance",
    "base_gadget_size",
    "build_compatible_iss",
    "build_psp_instance",
    "build_xcover_instance",
    "check_compatible_pair",
    "complement",
    "embed_isomorphism_as_packing",
    "enumerate_orderings",
    "is_exact_cover",
    "is_injective_homomorphism",
    "is_packing",
    "lift_packing_to_isomorphism",
    "restrict",
    "sort_pattern_for",
    "vectorize_instance",
]
