"""Problem plugins: feasibility structures and relaxation oracles."""

from .oracles import (
    ORACLES,
    default_epsilon,
    exact_handle,
    exact_oracle,
    greedy_wis_handle,
    greedy_wis_oracle,
    local_ratio_handle,
    local_ratio_interval_oracle,
    oracle_by_name,
    price_lagrangian,
    size_cap,
)
from .structures import (
    FreeStructure,
    GapStructure,
    GraphStructure,
    GroupedStructure,
    IntervalStructure,
    Placement,
    Slot,
    Structure,
)


def feasible(structure, member_ids) -> bool:
    """Exact domain membership of ``member_ids`` under ``structure``."""
    return structure.feasible(list(member_ids))
