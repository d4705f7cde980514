"""glt_lab: structured matrices, matrix geometric means and spectral
symbols of generalized locally Toeplitz sequences."""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, GLTLabError, InvalidInputError,
                     InvalidParameterError, NotPositiveDefiniteError, SizeError)
from .linalg import (EigDecomposition, check_hermitian, cholesky, eig_hermitian,
                     eigvals_hermitian, expm_h, hpd_function, invsqrtm_h, jacobi_eigh,
                     logm_h, powm_h, schatten_norm, sqrtm_h)
from .symbols import (GridSymbol, SymbolFn, TrigPolynomial, candidate_symbol,
                      geometric_mean_symbol, rearrange, sample_symbol)
from .structured import (MultiIndex, circulant, circulant_eigenvalues, diagonal_sampling,
                         hankel, omega_circulant, tau_eigenvalues, tau_matrix, toeplitz,
                         toeplitz_matvec)
from .geomean import KarcherConfig, KarcherResult, alm_mean, karcher_mean
from .spectral import (SequenceSpec, SpectralReport, compare_distribution, extremal_decay,
                       zero_distribution_test)
from .discretizations import (CWParams, bspline_symbol, curie_weiss_full,
                              curie_weiss_restricted, curie_weiss_symbol, fd4_matrix)
from .experiments import ExperimentConfig, run_cw_experiment, run_gm_example
