from ._wqcopt import (
    CgDiagnostics,
    ConditionEstimate,
    GradientCheckResult,
    IterateRecord,
    Lemma1Report,
    Objective,
    OmegaSequence,
    OrthogonalityResidual,
    Sampler,
    SmoothnessEstimate,
    SolverAbort,
    StarConvexityReport,
    Trace,
    ZooEntry,
    abs_one_minus_exp,
    cg_cycle_length,
    check_gradient,
    check_star_convexity,
    custom_objective,
    estimate_pl_mu,
    estimate_qg_mu,
    estimate_smoothness_L,
    estimate_weak_pl_mu,
    estimate_wqc_alpha,
    finite_difference_gradient,
    lemma1_crosscheck,
    quadratic,
    random_quadratic,
    run_solver,
    sphere_quartic,
    theoretical_bound,
    zoo,
)

__all__ = [
    "CgDiagnostics",
    "ConditionEstimate",
    "GradientCheckResult",
    "IterateRecord",
    "Lemma1Report",
    "Objective",
    "OmegaSequence",
    "OrthogonalityResidual",
    "Sampler",
    "SmoothnessEstimate",
    "SolverAbort",
    "StarConvexityReport",
    "Trace",
    "ZooEntry",
    "abs_one_minus_exp",
    "cg_cycle_length",
    "check_gradient",
    "check_star_convexity",
    "custom_objective",
    "estimate_pl_mu",
    "estimate_qg_mu",
    "estimate_smoothness_L",
    "estimate_weak_pl_mu",
    "estimate_wqc_alpha",
    "finite_difference_gradient",
    "lemma1_crosscheck",
    "quadratic",
    "random_quadratic",
    "run_solver",
    "sphere_quartic",
    "theoretical_bound",
    "zoo",
]
