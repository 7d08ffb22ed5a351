"""Primal-dual greedy algorithms for integer covering over greedy systems."""

from .errors import BudgetExceeded, DualUnbounded, GreedyCoverError, InstanceError, LatticeError
from .lattice import BooleanLattice, ExplicitLattice, IdealLattice, ValidationReport, verify_modular, verify_phi_order_preserving
from .oracle import OracleResult, approximation_ratio, exact_opt, truncation_equivalence
from .product import (
    ProductSystem,
    TupleIndex,
    WitnessReport,
    find_witness,
    lex_max_tuples,
    revised_solve,
    witness_cover_diagnostics,
)
from .solver import Certificate, DualChain, RunResult, build_certificate, check_feasibility, solve
from .system import GreedySystem, TruncatedSystem, compute_b_flag, compute_delta, truncate, validate_greedy_properties

__all__ = [
    "BooleanLattice",
    "BudgetExceeded",
    "Certificate",
    "DualChain",
    "DualUnbounded",
    "ExplicitLattice",
    "GreedyCoverError",
    "GreedySystem",
    "IdealLattice",
    "InstanceError",
    "LatticeError",
    "OracleResult",
    "ProductSystem",
    "RunResult",
    "TruncatedSystem",
    "TupleIndex",
    "ValidationReport",
    "WitnessReport",
    "approximation_ratio",
    "build_certificate",
    "check_feasibility",
    "compute_b_flag",
    "compute_delta",
    "exact_opt",
    "find_witness",
    "lex_max_tuples",
    "revised_solve",
    "solve",
    "truncate",
    "truncation_equivalence",
    "validate_greedy_properties",
    "verify_modular",
    "verify_phi_order_preserving",
    "witness_cover_diagnostics",
]
