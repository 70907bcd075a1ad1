from .constants import(
    DEFAULT_PRIME,
    FALLBACK_PRIME,
    PRIME_ENV_VAR,
    DEFAULT_TRIALS,
    RATIONAL_NCOEFF_LIMIT,
    SCALAR_PRIME,
    SCALAR_RATIONAL,
    SCALAR_COMPLEX,
    NUMERICAL_RANK_TOL,
    HESSIAN_TOL,
    SINGULAR_POINT_TOL,
    POINT_MATCH_TOL,
    COMMON_FACTOR_TOL,
    SEARCH_STARTS,
    CHART_CHANGES,
    CHART_RADIUS_SLACK,
    CURVE_SAMPLES,
    CONVERGENCE_TOL,
    DAMPING_INITIAL,
    DAMPING_INCREASE,
    DAMPING_DECREASE,
    DAMPING_MAX,
    MAX_ITERATIONS,
    SEARCH_ITERATIONS,
    CLUSTER_TOL,
    CLUSTER_SWEEP,
    MIN_CONVERGED,
    CANONICAL_ROUNDING,
    CANONICAL_ZERO_TOL,
    LOG_FORMAT
)

