"""Gauge duality mappings, generalized resolvents, and their certification.

The package computes duality mappings J_phi with arbitrary gauge functions on
finite-dimensional lp spaces (1 < p < inf), solves the regularized inclusion
defining the generalized resolvent and Yosida-type approximant of a monotone
operator, and ships sampled certification probes for the identities,
inequalities, and convergence statements the construction rests on.
"""

from .analysis import (
    ProbeReport,
    PsiCurve,
    alber_margin,
    alber_report,
    boundedness_probe,
    check_convergence_corollary,
    check_lower_bound,
    check_s_plus,
    continuity_probe,
    duality_axiom_report,
    estimate_psi,
    homogeneity_probe,
    homotopy_check,
    homotopy_lambda,
    round_trip_report,
)
from .gauges import (
    Gauge,
    ValidationReport,
    catalog,
    eval_antiderivative,
    eval_gauge,
    eval_inverse,
    expm1_gauge,
    log1p_gauge,
    power_gauge,
    validate_gauge,
)
from .gauges import from_label as gauge_from_label
from .operators import (
    MonotoneOperator,
    combine,
    evaluate,
    identity_operator,
    make_gradient,
    make_linear_psd,
    monotonicity_margin,
    quartic_operator,
    softplus_operator,
    zero_operator,
)
from .operators import from_label as operator_from_label
from .resolvent import (
    ResolventSolve,
    SolverError,
    SolveStatus,
    euclidean_oracle,
    solve_inclusion,
    surjectivity_solve,
    yosida,
)
from .spaces import (
    PNormSpace,
    dual_norm,
    dual_pairing,
    gauge_duality,
    gauge_duality_batch,
    inverse_gauge_duality,
    normalized_duality,
    pnorm,
)

__version__ = "0.1.0"

__all__ = [
    "Gauge",
    "MonotoneOperator",
    "PNormSpace",
    "ProbeReport",
    "PsiCurve",
    "ResolventSolve",
    "SolveStatus",
    "SolverError",
    "ValidationReport",
    "alber_margin",
    "alber_report",
    "boundedness_probe",
    "catalog",
    "check_convergence_corollary",
    "check_lower_bound",
    "check_s_plus",
    "combine",
    "continuity_probe",
    "dual_norm",
    "dual_pairing",
    "duality_axiom_report",
    "estimate_psi",
    "euclidean_oracle",
    "eval_antiderivative",
    "eval_gauge",
    "eval_inverse",
    "evaluate",
    "expm1_gauge",
    "gauge_duality",
    "gauge_duality_batch",
    "gauge_from_label",
    "homogeneity_probe",
    "homotopy_check",
    "homotopy_lambda",
    "identity_operator",
    "inverse_gauge_duality",
    "log1p_gauge",
    "make_gradient",
    "make_linear_psd",
    "monotonicity_margin",
    "normalized_duality",
    "operator_from_label",
    "pnorm",
    "power_gauge",
    "quartic_operator",
    "round_trip_report",
    "softplus_operator",
    "solve_inclusion",
    "surjectivity_solve",
    "validate_gauge",
    "yosida",
    "zero_operator",
]
