"""Geometric means of Hermitian positive definite matrices.

Two-matrix ALM mean in closed form, an inversion-free surrogate for
commuting pairs, and the Karcher mean of ``k >= 2`` matrices by a
Richardson iteration with an adaptive step.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.linalg import solve_triangular

from . import constants as C
from .errors import (DomainError, InvalidInputError, InvalidParameterError,
                     NotPositiveDefiniteError)
from .linalg import (check_hermitian, cholesky, eig_hermitian, eigvals_hermitian,
                     hermitian_part, hpd_function)

__all__ = [
    "alm_mean", "alm_mean_batch", "commuting_form_mean", "karcher_step_theta",
    "karcher_mean", "karcher_residual", "KarcherConfig", "KarcherResult",
]


def _same_shape(A, B):
    if A.shape != B.shape:
        raise InvalidInputError(f"shape mismatch {A.shape} vs {B.shape}")


def _require_hpd(A, name="matrix"):
    """Raise with lambda_min if ``A`` is not HPD (Cholesky as the cheap test)."""
    try:
        return cholesky(A)
    except NotPositiveDefiniteError:
        lmin = float(eigvals_hermitian(A, check=False)[0])
        raise NotPositiveDefiniteError(
            f"{name} is not positive definite (lambda_min = {lmin:.6e})",
            lambda_min=lmin) from None


def alm_mean(A, B) -> np.ndarray:
    """ALM geometric mean ``A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}``.

    Parameters
    ----------
    A, B : array_like
        HPD matrices of equal order.

    Returns
    -------
    ndarray
        The HPD geometric mean, symmetrized.

    Raises
    ------
    NotPositiveDefiniteError
        If either input is not HPD; ``err.lambda_min`` is set.

    Notes
    -----
    The inner matrix is HPD in exact arithmetic.  With very ill-conditioned
    ``A`` rounding can push its smallest eigenvalues a hair below zero; those
    are clipped to zero before the square root.
    """
    A = check_hermitian(A)
    B = check_hermitian(B)
    _same_shape(A, B)
    dec = eig_hermitian(A)
    w, V = dec.eigenvalues, dec.eigenvectors
    if w.size and not w[0] > 0:
        raise NotPositiveDefiniteError(
            f"A is not positive definite (lambda_min = {w[0]:.6e})", lambda_min=float(w[0]))
    _require_hpd(B, "B")
    sw = np.sqrt(w)
    Ah = (V * sw) @ V.conj().T
    Aih = (V / sw) @ V.conj().T
    M = hermitian_part(Aih @ B @ Aih)
    mu, U = np.linalg.eigh(M)
    Mh = (U * np.sqrt(np.clip(mu, 0.0, None))) @ U.conj().T
    return hermitian_part(Ah @ Mh @ Ah)


def alm_mean_batch(A, B) -> np.ndarray:
    """ALM mean of stacks of small HPD matrices, shape ``(m, r, r)``.

    Raises
    ------
    DomainError
        If some ``A[i]`` is not positive definite.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape or A.ndim != 3:
        raise InvalidInputError("expected two stacks of equal shape (m, r, r)")
    A = 0.5 * (A + np.conj(np.swapaxes(A, -1, -2)))
    B = 0.5 * (B + np.conj(np.swapaxes(B, -1, -2)))
    w, V = np.linalg.eigh(A)
    if w.size and not np.min(w) > 0:
        lmin = float(np.min(w))
        raise DomainError(f"first argument singular or indefinite (lambda_min = {lmin:.3e})",
                          lambda_min=lmin)
    Vh = np.conj(np.swapaxes(V, -1, -2))
    sw = np.sqrt(w)[:, None, :]
    Ah = (V * sw) @ Vh
    Aih = (V / sw) @ Vh
    M = Aih @ B @ Aih
    M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
    mu, U = np.linalg.eigh(M)
    Mh = (U * np.sqrt(np.clip(mu, 0.0, None))[:, None, :]) @ np.conj(np.swapaxes(U, -1, -2))
    G = Ah @ Mh @ Ah
    return 0.5 * (G + np.conj(np.swapaxes(G, -1, -2)))


def commuting_form_mean(A, B) -> np.ndarray:
    """Inversion-free surrogate ``(A B^2 A)^{1/4}``.

    Agrees with :func:`alm_mean` whenever ``A`` and ``B`` commute, and is
    defined for positive semidefinite inputs.
    """
    A = check_hermitian(A)
    B = check_hermitian(B)
    _same_shape(A, B)
    AB = A @ B
    return hpd_function(hermitian_part(AB @ AB.conj().T), lambda x: x ** 0.25,
                        positive=False)


# ---------------------------------------------------------------------------
# Karcher mean
# ---------------------------------------------------------------------------

InitMode = Union[str, np.ndarray]


@dataclass
class KarcherConfig:
    """Settings for :func:`karcher_mean`.

    Attributes
    ----------
    max_iterations : int
    residual_tol : float
        Stop when the Frobenius norm of the log-sum gradient is below this.
    theta_mode : "adaptive" or float
        Fixed step length when a number is given.
    init_mode : {"arithmetic_mean", "first_matrix", "identity"} or ndarray
    use_cholesky_form : bool
        Use the inversion-free update built on the Cholesky factor of the
        iterate instead of its square root.
    """
    max_iterations: int = C.KARCHER_MAX_ITER
    residual_tol: float = C.KARCHER_RESIDUAL_TOL
    theta_mode: Union[str, float] = "adaptive"
    init_mode: InitMode = "arithmetic_mean"
    use_cholesky_form: bool = True

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise InvalidParameterError("residual_tol must be positive")
        if int(self.max_iterations) < 1:
            raise InvalidParameterError("max_iterations must be >= 1")
        self.max_iterations = int(self.max_iterations)
        if isinstance(self.theta_mode, str):
            if self.theta_mode != "adaptive":
                try:
                    self.theta_mode = float(self.theta_mode)
                except ValueError:
                    raise InvalidParameterError(
                        f"theta_mode must be 'adaptive' or a number, got {self.theta_mode!r}") from None
        if not isinstance(self.theta_mode, str) and not self.theta_mode > 0:
            raise InvalidParameterError("fixed theta must be positive")
        if isinstance(self.init_mode, str) and self.init_mode not in (
                "arithmetic_mean", "first_matrix", "identity"):
            raise InvalidParameterError(f"unknown init_mode {self.init_mode!r}")


@dataclass
class KarcherResult:
    """Outcome of :func:`karcher_mean`.

    Attributes
    ----------
    mean : ndarray
        Last iterate (the mean when ``converged``).
    iterations : int
        Number of updates applied.
    residual_history : ndarray
        Residual of every iterate, starting with ``X_0``.
    converged : bool
    theta_history : ndarray
        Step length used at each update.
    message : str
    """
    mean: np.ndarray
    iterations: int
    residual_history: np.ndarray
    converged: bool
    theta_history: np.ndarray = field(default_factory=lambda: np.zeros(0))
    message: str = ""


def _log_ratio(c):
    """``log(c)/(c-1)`` with the limit value 1 near ``c = 1``."""
    c = np.asarray(c, dtype=float)
    near = np.abs(c - 1.0) < C.KARCHER_C_LIMIT_TOL
    safe = np.where(near, 2.0, c)
    return np.where(near, 1.0, np.log(safe) / (safe - 1.0))


def _theta_from_c(c):
    c = np.asarray(c, dtype=float)
    lr = _log_ratio(c)
    beta = float(np.sum(lr))
    gamma = float(np.sum(c * lr))
    return 2.0 / (gamma + beta), beta, gamma


def karcher_step_theta(G, A_list):
    """Adaptive step length for the Karcher iteration at ``G``.

    With ``M_j = G^{1/2} A_j^{-1} G^{1/2}`` and ``c_j`` the spectral
    condition number of ``M_j``::

        beta  = sum_j log(c_j) / (c_j - 1)
        gamma = sum_j c_j log(c_j) / (c_j - 1)
        theta = 2 / (gamma + beta)

    Returns
    -------
    theta, beta, gamma : float
    c : ndarray
    """
    G = check_hermitian(G)
    Gh = hpd_function(G, "sqrt")
    _require_hpd(G, "G")
    cs = []
    for j, A in enumerate(A_list):
        A = check_hermitian(A)
        _same_shape(G, A)
        L = _require_hpd(A, f"A[{j}]")
        Z = solve_triangular(L, Gh, lower=True)
        mu = eigvals_hermitian(hermitian_part(Z.conj().T @ Z), check=False)
        if not mu[0] > 0:
            raise NotPositiveDefiniteError("intermediate matrix lost definiteness",
                                           lambda_min=float(mu[0]))
        cs.append(mu[-1] / mu[0])
    c = np.array(cs)
    theta, beta, gamma = _theta_from_c(c)
    return theta, beta, gamma, c


def _logs_cholesky(X, A_list):
    """Return ``(L, sum_i log(L^{-1} A_i L^{-*}), c)`` where ``X = L L*``."""
    L = cholesky(X)
    S = np.zeros_like(X, dtype=np.result_type(X, *A_list))
    c = np.empty(len(A_list))
    for i, A in enumerate(A_list):
        Z = solve_triangular(L, A, lower=True)
        Y = solve_triangular(L, Z.conj().T, lower=True).conj().T
        mu, U = np.linalg.eigh(hermitian_part(Y))
        if not mu[0] > 0:
            raise NotPositiveDefiniteError("intermediate matrix lost definiteness",
                                           lambda_min=float(mu[0]))
        S += (U * np.log(mu)) @ U.conj().T
        c[i] = mu[-1] / mu[0]
    return L, hermitian_part(S), c


def _logs_sqrt(X, A_chols):
    """Return ``(X^{1/2}, sum_i log(X^{1/2} A_i^{-1} X^{1/2}), c)``."""
    Xh = hpd_function(X, "sqrt")
    S = np.zeros_like(X, dtype=np.result_type(X, *A_chols))
    c = np.empty(len(A_chols))
    for i, L in enumerate(A_chols):
        Z = solve_triangular(L, Xh, lower=True)
        mu, U = np.linalg.eigh(hermitian_part(Z.conj().T @ Z))
        if not mu[0] > 0:
            raise NotPositiveDefiniteError("intermediate matrix lost definiteness",
                                           lambda_min=float(mu[0]))
        S += (U * np.log(mu)) @ U.conj().T
        c[i] = mu[-1] / mu[0]
    return Xh, hermitian_part(S), c


def karcher_residual(X, A_list) -> float:
    """Frobenius norm of ``sum_i log(X^{1/2} A_i^{-1} X^{1/2})``."""
    X = check_hermitian(X)
    _require_hpd(X, "X")
    chols = []
    for j, A in enumerate(A_list):
        A = check_hermitian(A)
        _same_shape(X, A)
        chols.append(_require_hpd(A, f"A[{j}]"))
    _, S, _ = _logs_sqrt(X, chols)
    return float(np.linalg.norm(S))


def _initial_iterate(A_list, mode):
    if isinstance(mode, str):
        if mode == "arithmetic_mean":
            return hermitian_part(sum(A_list) / len(A_list))
        if mode == "first_matrix":
            return A_list[0].copy()
        return np.eye(A_list[0].shape[0], dtype=A_list[0].dtype)
    X0 = check_hermitian(mode)
    _same_shape(A_list[0], X0)
    return X0.copy()


def karcher_mean(A_list: Sequence, cfg: KarcherConfig | None = None) -> KarcherResult:
    """Karcher mean of HPD matrices by Richardson iteration.

    Solves ``sum_i log(X^{1/2} A_i^{-1} X^{1/2}) = 0``.  Each step is::

        X <- X - theta X^{1/2} (sum_i log(X^{1/2} A_i^{-1} X^{1/2})) X^{1/2}

    or, with ``use_cholesky_form`` and ``X = R* R``, the algebraically equal::

        X <- X + theta R* (sum_i log(R^{-*} A_i R^{-1})) R

    If an update is not positive definite the step is halved (at most 10
    times) before giving up.

    Parameters
    ----------
    A_list : sequence of array_like
        At least two HPD matrices of equal order.
    cfg : KarcherConfig, optional

    Returns
    -------
    KarcherResult
    """
    cfg = cfg or KarcherConfig()
    if len(A_list) < 1:
        raise InvalidInputError("need at least one matrix")
    mats = [check_hermitian(A) for A in A_list]
    for A in mats[1:]:
        _same_shape(mats[0], A)
    chols = [_require_hpd(A, f"A[{j}]") for j, A in enumerate(mats)]
    X = _initial_iterate(mats, cfg.init_mode)
    _require_hpd(X, "initial iterate")

    def evaluate(X):
        if cfg.use_cholesky_form:
            F, S, c = _logs_cholesky(X, mats)
        else:
            F, S, c = _logs_sqrt(X, chols)
        return F, S, c

    residuals = []
    thetas = []
    F, S, c = evaluate(X)
    res = float(np.linalg.norm(S))
    residuals.append(res)
    converged = res < cfg.residual_tol
    message = "converged" if converged else ""
    it = 0
    while not converged and it < cfg.max_iterations:
        if cfg.theta_mode == "adaptive":
            theta = _theta_from_c(c)[0]
        else:
            theta = float(cfg.theta_mode)
        if cfg.use_cholesky_form:
            D = F @ S @ F.conj().T
            sign = 1.0
        else:
            D = F @ S @ F
            sign = -1.0
        for _ in range(C.KARCHER_THETA_HALVINGS + 1):
            Xn = hermitian_part(X + sign * theta * D)
            try:
                Fn, Sn, cn = evaluate(Xn)
                break
            except NotPositiveDefiniteError:
                theta *= 0.5
        else:
            message = "iterate lost positive definiteness"
            break
        X, F, S, c = Xn, Fn, Sn, cn
        it += 1
        thetas.append(theta)
        res = float(np.linalg.norm(S))
        residuals.append(res)
        converged = res < cfg.residual_tol
    if converged:
        message = "converged"
    elif not message:
        message = "maximum iterations reached"
    hist = np.array(residuals)
    if converged and hist.size > 4 and np.any(np.diff(hist[3:]) > 0):
        warnings.warn("Karcher residual history not monotone after the third iterate",
                      RuntimeWarning, stacklevel=2)
    return KarcherResult(mean=X, iterations=it, residual_history=hist,
                         converged=bool(converged), theta_history=np.array(thetas),
                         message=message)
