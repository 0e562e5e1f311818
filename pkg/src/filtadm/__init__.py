"""Exact-arithmetic toolkit for admissible filtrations on block-chain
Frobenius modules: canonical summand ordering, slope chain checks, the
shuffle valuation condition, Frobenius modification, transverse filtration
construction, and brute-force admissibility verification."""

__version__ = "0.1.0"

from .model import (
    Config,
    Family,
    GoodSubobject,
    ModuleSpec,
    SpecError,
    Summand,
    WeightProfile,
    level_decomposition,
    spec_violations,
    t_n,
    validate_spec,
)
from .ordering import canonical_order, check_not_precede, group_and_order
from .slopes import check_all_block_orders, check_slope_chain
from .frobenius import build_modified_frobenius, hom_dim, realize_matrices
from .subobjects import (
    alpha_ratio,
    enumerate_concrete_subobjects,
    enumerate_good_subobjects,
    greedy_flag,
    omega_from_flag,
    special_pair_from_flag,
)
from .filtration import build_transverse_filtration, check_admissible, t_h
from .pairs import (
    SpecialPair,
    assemble_global,
    check_weighted_inequality,
    is_special,
    solve_t,
)
from .emerton import check_emerton_condition, enumerate_candidates

__all__ = [
    "Config",
    "Family",
    "Summand",
    "ModuleSpec",
    "WeightProfile",
    "GoodSubobject",
    "SpecError",
    "validate_spec",
    "spec_violations",
    "t_n",
    "level_decomposition",
    "canonical_order",
    "group_and_order",
    "check_not_precede",
    "check_slope_chain",
    "check_all_block_orders",
    "hom_dim",
    "build_modified_frobenius",
    "realize_matrices",
    "enumerate_good_subobjects",
    "enumerate_concrete_subobjects",
    "alpha_ratio",
    "greedy_flag",
    "omega_from_flag",
    "special_pair_from_flag",
    "build_transverse_filtration",
    "t_h",
    "check_admissible",
    "SpecialPair",
    "is_special",
    "solve_t",
    "check_weighted_inequality",
    "assemble_global",
    "check_emerton_condition",
    "enumerate_candidates",
]
