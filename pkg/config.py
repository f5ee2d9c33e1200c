
"""
Configuration settings for the deformed-space ground-state bound solver
"""

# Physical defaults
# All nondimensional results are independent of these; they only matter
# when converting to physical units
DEFAULT_HBAR = 1.0
DEFAULT_MASS = 1.0

# Root refinement settings
ROOT_TOLERANCE = 1e-12      # |f| target for bisection refinement
ROOT_MAX_ITERATIONS = 400   # bisection halves the bracket at most this many times

# Log-spaced xi grid used by solve_full (min, max, points)
SOLVE_GRID_MIN = 1e-6
SOLVE_GRID_MAX = 1e3
SOLVE_GRID_POINTS = 400

# Log-spaced xi grid used by the existence scanner (sign change method)
SCAN_GRID_MIN = 1e-6
SCAN_GRID_MAX = 1e3
SCAN_GRID_POINTS = 2000

# Steep-potential refinement of the xi grid
# An interval over which ln(V~) changes by more than REFINE_MAX_LOG_STEP is
# split into log-spaced sub-intervals, at most REFINE_MAX_SUBDIVISIONS of them
REFINE_MAX_LOG_STEP = 0.25
REFINE_MAX_SUBDIVISIONS = 4096

# Bracket for the undeformed root xi_0
XI0_BRACKET_MIN = 1e-9
XI0_BRACKET_MAX = 1e9
XI0_BRACKET_POINTS = 400
# Each failed bracket search widens the range on the side where the root lies
XI0_BRACKET_WIDEN = 1e9
XI0_BRACKET_WIDENINGS = 30

# Oracle settings (direct minimization along the uncertainty boundary)
ORACLE_POINTS = 2000        # log-spaced points per boundary branch
ORACLE_GRID_MIN = 1e-6
ORACLE_GRID_MAX = 1e3
ORACLE_XTOL = 1e-10         # golden-section tolerance in xi

# Brute-force 2D grid (xi, q)
BRUTE_RANGE = (0.0, 3.0)
BRUTE_POINTS = 500

# Existence region scan settings
REGION_POINTS = 200         # grid points along alpha and along beta
REGION_MAX = 1.2            # grids cover (0, REGION_MAX]
SCAN_WORKERS = 1            # threads used for row-parallel region scans

# Beta limit settings
BETA_LIMIT_TOLERANCE = 1e-4
BETA_LIMIT_START = 1.0      # first trial upper bound, doubled until no solution
BETA_LIMIT_CEILING = 1e6    # past this the limit is reported as unbounded

# Output settings
OUTPUT_FORMATS = ("json", "csv")
