"""Central tolerance table.

Every numerical threshold used by the library lives here so that tests and
callers can refer to one place.
"""

# Hermitian check: max |a_ij - conj(a_ji)| <= HERMITIAN_TOL * (1 + max|a_ij|)
HERMITIAN_TOL = 1e-12

# EigDecomposition invariants
EIG_ORTHO_TOL = 1e-10
EIG_RECON_TOL = 1e-9

# Jacobi sweeps stop when off-diagonal Frobenius mass < JACOBI_TOL * ||A||_F
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60

CHOLESKY_TOL = 1e-10

# symbols
SYMBOL_HERMITIAN_TOL = 1e-12
DEFAULT_EPS_SEQUENCE = tuple(10.0 ** -k for k in range(1, 9))
DEFAULT_STAB_TOL = 1e-6
DEFAULT_GRID_X = 50
DEFAULT_GRID_THETA = 40

# Karcher iteration
KARCHER_MAX_ITER = 200
KARCHER_RESIDUAL_TOL = 1e-10
KARCHER_THETA_HALVINGS = 10
# |c - 1| below this uses the analytic limit log(c)/(c-1) -> 1
KARCHER_C_LIMIT_TOL = 1e-12

# spectral
DEFAULT_THRESHOLD = 0.1
DEFAULT_TRIM = 4

# full Curie-Weiss size guard
CW_FULL_MAX_N = 14
