"""Adiabatic number-partitioning laboratory (C++ core bindings)."""

from ._qlab import (
    QlabError,
    brute_force,
    budget,
    classify_threshold_times,
    criterion_ratio,
    evaluate_ising,
    gap_profile,
    generate_instance,
    ising_diagonal,
    propagate,
    reconstruct_product_state,
    threshold_time,
    verify_zero_ground,
)

__all__ = [
    "QlabError",
    "brute_force",
    "budget",
    "classify_threshold_times",
    "criterion_ratio",
    "evaluate_ising",
    "gap_profile",
    "generate_instance",
    "ising_diagonal",
    "propagate",
    "reconstruct_product_state",
    "threshold_time",
    "verify_zero_ground",
]
__version__ = "0.1.0"
