"""Exact core computations for housing markets with weak preferences."""

from .blocking import (
    CONCEPTS,
    BlockWitness,
    better_and_same,
    control_set,
    exclusion_blocks,
    find_block,
    rectification_blocks,
    rectified_exclusion_blocks,
    strongly_blocks,
    weakly_blocks,
)
from .market import (
    Allocation,
    Market,
    compare,
    cycle_groups,
    enumerate_allocations,
    equivalent,
    favorites,
    indiff_set,
    is_individually_rational,
    is_pareto_efficient,
    mask_of,
    members,
    pareto_improvement,
)

__all__ = [
    "Allocation",
    "BlockWitness",
    "CONCEPTS",
    "Market",
    "better_and_same",
    "compare",
    "control_set",
    "cycle_groups",
    "enumerate_allocations",
    "equivalent",
    "exclusion_blocks",
    "favorites",
    "find_block",
    "indiff_set",
    "is_individually_rational",
    "is_pareto_efficient",
    "mask_of",
    "members",
    "pareto_improvement",
    "rectification_blocks",
    "rectified_exclusion_blocks",
    "strongly_blocks",
    "weakly_blocks",
]
