
# Default modulus for exact elimination (2^31 - 1)
DEFAULT_PRIME=2147483647

# Second prime used on the final retry of a deficient system
FALLBACK_PRIME=2147483629

# Environment variable overriding the default prime
PRIME_ENV_VAR="WARING_LAB_PRIME"

# Number of independent trials before a deficiency is reported
DEFAULT_TRIALS=3

# Largest coefficient count accepted for exact rational elimination
RATIONAL_NCOEFF_LIMIT=500

# Scalar kinds
SCALAR_PRIME="prime"
SCALAR_RATIONAL="rational"
SCALAR_COMPLEX="complex"

# Relative singular value threshold for numerical rank and kernels
NUMERICAL_RANK_TOL=1e-9

# Smallest / largest singular value ratio of a nondegenerate Hessian
HESSIAN_TOL=1e-8

# Normalized value + gradient residual accepted as a singular point
SINGULAR_POINT_TOL=1e-7

# Fubini-Study distance under which two points are the same
POINT_MATCH_TOL=1e-6

# Singular value ratio under which a Sylvester matrix is treated as singular
COMMON_FACTOR_TOL=1e-9

# Minimum number of starts of the heuristic singularity search
SEARCH_STARTS=200

# Random unitary frames used to move points at infinity into a chart
CHART_CHANGES=3

# Slack on the unit polydisc of a chart
CHART_RADIUS_SLACK=1e-6

# Sample lines used to trace a positive-dimensional singular locus
CURVE_SAMPLES=6

# Relative residual under which a fit is converged
CONVERGENCE_TOL=1e-8

# Damping schedule of the least-squares descent
DAMPING_INITIAL=1e-3
DAMPING_INCREASE=10.0
DAMPING_DECREASE=0.3
DAMPING_MAX=1e12

# Iteration budget of one descent
MAX_ITERATIONS=500

# Iteration budget of one singular point refinement
SEARCH_ITERATIONS=60

# Cluster tolerance after canonicalization, and the sensitivity sweep
CLUSTER_TOL=1e-4
CLUSTER_SWEEP=(1e-3, 1e-5)

# Fewer converged starts than this makes a nu experiment inconclusive
MIN_CONVERGED=10

# Decimals kept in the sort key of canonical terms
CANONICAL_ROUNDING=6

# Modulus below which a linear form coordinate counts as vanishing
CANONICAL_ZERO_TOL=1e-12

# Log line layout used by the command line
LOG_FORMAT="%(asctime)s %(name)s %(levelname)s %(message)s"
