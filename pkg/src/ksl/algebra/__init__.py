"""Exact verification engine for the coefficient algebra.

ring:   sparse polynomials, rational functions, single-radical expressions.
terms:  the formal integral calculus and its axioms.
checks: the derivation-chain verifiers and their reports.
"""

from .checks import (
    CoefficientSet,
    PassReport,
    StepCheck,
    run_all,
    verify_antihol_completion_bound,
    verify_base_chain,
    verify_chain_consistency,
    verify_grad_box_elimination,
    verify_midpoint_obstruction,
    verify_mixed_completion_bound,
    verify_radical_gap_monotone,
    verify_refined_chain,
    verify_substitution_identities,
)
from .ring import (
    Poly,
    RadExpr,
    RationalFunction,
    rad_equal,
    rescale_radicand,
    rf,
    rf_equal,
    v,
)
from .terms import (
    FormalExpr,
    FormalTerm,
    J,
    K,
    anticross_identity,
    cauchy_schwarz_defect,
    eq_in_boxsq,
    eq_in_gradbox,
    ibp,
    mixcross_identity,
    pure_hessian_upper_bound,
)

__all__ = [
    "CoefficientSet",
    "FormalExpr",
    "FormalTerm",
    "J",
    "K",
    "PassReport",
    "Poly",
    "RadExpr",
    "RationalFunction",
    "StepCheck",
    "anticross_identity",
    "cauchy_schwarz_defect",
    "eq_in_boxsq",
    "eq_in_gradbox",
    "ibp",
    "mixcross_identity",
    "pure_hessian_upper_bound",
    "rad_equal",
    "rescale_radicand",
    "rf",
    "rf_equal",
    "run_all",
    "v",
    "verify_antihol_completion_bound",
    "verify_base_chain",
    "verify_chain_consistency",
    "verify_grad_box_elimination",
    "verify_midpoint_obstruction",
    "verify_mixed_completion_bound",
    "verify_radical_gap_monotone",
    "verify_refined_chain",
    "verify_substitution_identities",
]
