"""Sparse drift estimation for high-dimensional Ornstein-Uhlenbeck models."""

from ._core import (  # noqa: F401
    ConeSpec,
    DantzigConfig,
    DomainError,
    ErgodicConstants,
    EstimateResult,
    HCertificate,
    LassoConfig,
    Method,
    ModelSpec,
    OracleBounds,
    Path,
    ReTimeThreshold,
    Scheme,
    SimConfig,
    SolveStatus,
    SufficientStats,
    SupportMetrics,
    __version__,
    check_assumption_h,
    dantzig,
    dantzig_feasibility,
    ergodic_constants,
    generate_sparse_stable,
    in_cone,
    lambda_rule,
    lambda_rule_plugin,
    lasso,
    lasso_gradient,
    lasso_kkt_residual,
    lasso_objective,
    martingale_time_threshold,
    mle,
    norm_l0,
    norm_l1,
    norm_linf,
    norm_fro,
    oracle_bounds,
    re_time_threshold,
    restricted_eigenvalue_empirical,
    simulate_path,
    soft_threshold,
    solve_lyapunov,
    sufficient_stats,
    support_count,
    support_metrics,
    tail_exponent,
    top_s_coordinates,
    transition_kernel,
)
