"""Dense Hermitian linear algebra kernels.

Everything here works on plain ``numpy`` arrays.  A "Hermitian matrix" is a
square array passing :func:`check_hermitian`; real symmetric inputs keep
their real dtype so LAPACK can take the cheaper real path.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.linalg import lapack

from . import constants as C
from .errors import (DomainError, InvalidInputError, InvalidParameterError,
                     NotPositiveDefiniteError)

__all__ = [
    "EigDecomposition", "check_hermitian", "hermitian_part", "eig_hermitian",
    "eigvals_hermitian", "jacobi_eigh", "hpd_function", "sqrtm_h", "invsqrtm_h",
    "logm_h", "expm_h", "powm_h", "cholesky", "schatten_norm", "kron",
]


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenpairs of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray, shape (n,)
        Real, ascending.
    eigenvectors : ndarray, shape (n, n)
        Unitary; column ``j`` pairs with ``eigenvalues[j]``.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _as_square(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {A.shape}")
    if not np.issubdtype(A.dtype, np.number):
        raise InvalidInputError("matrix entries must be numeric")
    if np.iscomplexobj(A):
        return A.astype(np.complex128, copy=False)
    return A.astype(np.float64, copy=False)


def check_hermitian(A, tol: float = C.HERMITIAN_TOL) -> np.ndarray:
    """Validate Hermitian structure and return ``A`` as a float/complex array.

    Raises
    ------
    InvalidInputError
        If ``max|a_ij - conj(a_ji)| > tol * (1 + max|a_ij|)`` or if ``A``
        contains non-finite values.
    """
    A = _as_square(A)
    if A.size and not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix contains non-finite entries")
    if A.size == 0:
        return A
    dev = np.max(np.abs(A - A.conj().T))
    scale = 1.0 + np.max(np.abs(A))
    if dev > tol * scale:
        raise InvalidInputError(
            f"matrix is not Hermitian (deviation {dev:.3e} > {tol * scale:.3e})")
    return A


def hermitian_part(A) -> np.ndarray:
    """Return ``(A + A*) / 2``."""
    A = _as_square(A)
    return 0.5 * (A + A.conj().T)


# ---------------------------------------------------------------------------
# eigensolvers
# ---------------------------------------------------------------------------

def _round_robin(m):
    """Circle-method pairings of ``m`` (even) players; ``m - 1`` rounds."""
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        half = m // 2
        rounds.append([(players[i], players[m - 1 - i]) for i in range(half)])
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(A, tol: float = C.JACOBI_TOL,
                max_sweeps: int = C.JACOBI_MAX_SWEEPS) -> EigDecomposition:
    """Cyclic Jacobi eigensolver for Hermitian matrices.

    Rotations are scheduled in round-robin order so that each round touches
    disjoint index pairs; a round is then applied as one vectorized update.

    Parameters
    ----------
    A : array_like
        Hermitian matrix.
    tol : float
        Stop once the off-diagonal Frobenius mass drops below
        ``tol * ||A||_F``.
    max_sweeps : int
        Hard cap on full sweeps.

    Returns
    -------
    EigDecomposition
    """
    A = check_hermitian(A)
    n = A.shape[0]
    cplx = np.iscomplexobj(A)
    W = hermitian_part(A).astype(np.complex128 if cplx else np.float64, copy=True)
    V = np.eye(n, dtype=W.dtype)
    if n <= 1:
        return EigDecomposition(np.real(np.diag(W)).copy(), V)

    fro = np.linalg.norm(W)
    target = tol * fro
    m = n + (n % 2)
    schedule = []
    for pairs in _round_robin(m):
        pq = np.array([(p, q) if p < q else (q, p) for p, q in pairs
                       if p < n and q < n], dtype=int)
        schedule.append((pq[:, 0], pq[:, 1]))

    def off_norm(M):
        return np.linalg.norm(M - np.diag(np.diag(M)))

    for _ in range(max_sweeps):
        if off_norm(W) < target:
            break
        for P, Q in schedule:
            apq = W[P, Q]
            r = np.abs(apq)
            app = np.real(W[P, P])
            aqq = np.real(W[Q, Q])
            active = r > 0.0
            safe_r = np.where(active, r, 1.0)
            tau = (aqq - app) / (2.0 * safe_r)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            c = np.where(active, c, 1.0)
            s = np.where(active, s, 0.0)
            if cplx:
                ph = np.where(active, apq / safe_r, 1.0)
                phc = ph.conj()
            else:
                ph = np.where(active, np.sign(apq), 1.0)
                phc = ph
            # U restricted to (p, q): [[c, s], [-s*conj(ph), c*conj(ph)]]
            upp, upq, uqp, uqq = c, s, -s * phc, c * phc
            Wp = W[:, P].copy()
            Wq = W[:, Q]
            W[:, P] = Wp * upp + Wq * uqp
            W[:, Q] = Wp * upq + Wq * uqq
            Wp = W[P, :].copy()
            Wq = W[Q, :]
            W[P, :] = np.conj(upp)[:, None] * Wp + np.conj(uqp)[:, None] * Wq
            W[Q, :] = np.conj(upq)[:, None] * Wp + np.conj(uqq)[:, None] * Wq
            W[P, Q] = 0.0
            W[Q, P] = 0.0
            Vp = V[:, P].copy()
            Vq = V[:, Q]
            V[:, P] = Vp * upp + Vq * uqp
            V[:, Q] = Vp * upq + Vq * uqq
    lam = np.real(np.diag(W))
    order = np.argsort(lam, kind="stable")
    return EigDecomposition(lam[order], V[:, order])


def eig_hermitian(A, method: str = "lapack") -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    A : array_like
        Hermitian within :data:`constants.HERMITIAN_TOL`.
    method : {"lapack", "jacobi"}
        ``"lapack"`` calls the divide-and-conquer driver behind
        :func:`numpy.linalg.eigh`; ``"jacobi"`` uses :func:`jacobi_eigh`.

    Returns
    -------
    EigDecomposition
        Ascending eigenvalues, unitary eigenvectors.
    """
    A = check_hermitian(A)
    if method == "jacobi":
        return jacobi_eigh(A)
    if method != "lapack":
        raise InvalidParameterError(f"unknown eigensolver {method!r}")
    w, V = np.linalg.eigh(hermitian_part(A))
    return EigDecomposition(w, V)


def eigvals_hermitian(A, check: bool = True) -> np.ndarray:
    """Ascending eigenvalues only (cheaper than :func:`eig_hermitian`)."""
    A = check_hermitian(A) if check else _as_square(A)
    return np.linalg.eigvalsh(hermitian_part(A))


# ---------------------------------------------------------------------------
# spectral functions
# ---------------------------------------------------------------------------

_NAMED = {
    # name: (callable, needs strictly positive spectrum)
    "sqrt": (np.sqrt, False),
    "invsqrt": (lambda x: 1.0 / np.sqrt(x), True),
    "log": (np.log, True),
    "exp": (np.exp, None),
    "inv": (lambda x: 1.0 / x, True),
}

FunctionLike = Union[str, Callable[[np.ndarray], np.ndarray]]


def hpd_function(A, f: FunctionLike, *, positive: bool | None = None,
                 clip_tol: float = 1e-12) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Computes ``V diag(f(lambda)) V*``.

    Parameters
    ----------
    A : array_like
        Hermitian matrix.
    f : str or callable
        ``"sqrt"``, ``"invsqrt"``, ``"log"``, ``"exp"``, ``"inv"``, or a
        vectorized callable on real arrays.
    positive : bool, optional
        Domain restriction for callables.  ``True`` demands a strictly
        positive spectrum; ``False`` demands a nonnegative one (eigenvalues
        within ``clip_tol * max|lambda|`` of zero are clipped to zero);
        ``None`` means no restriction.  Named functions carry their own.

    Returns
    -------
    ndarray
        Hermitian result, same dtype kind as ``A``.

    Raises
    ------
    DomainError
        If the spectrum leaves the domain; ``err.lambda_min`` holds the
        smallest eigenvalue.
    """
    if isinstance(f, str):
        try:
            func, dom = _NAMED[f]
        except KeyError:
            raise InvalidParameterError(f"unknown named function {f!r}") from None
        if positive is None:
            positive = dom
    else:
        func = f
    dec = eig_hermitian(A)
    w = dec.eigenvalues
    if w.size:
        lmin = float(w[0])
        if positive is True and not lmin > 0.0:
            raise DomainError(f"spectrum must be positive, lambda_min = {lmin:.6e}",
                              lambda_min=lmin)
        if positive is False:
            floor = -clip_tol * max(np.max(np.abs(w)), 1.0)
            if lmin < floor:
                raise DomainError(f"spectrum must be nonnegative, lambda_min = {lmin:.6e}",
                                  lambda_min=lmin)
            w = np.clip(w, 0.0, None)
    fw = np.asarray(func(w))
    V = dec.eigenvectors
    out = (V * fw) @ V.conj().T
    out = 0.5 * (out + out.conj().T)
    if not np.iscomplexobj(V) and np.iscomplexobj(out):
        out = out.real
    return out


def sqrtm_h(A) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix."""
    return hpd_function(A, "sqrt")


def invsqrtm_h(A) -> np.ndarray:
    """Inverse square root of an HPD matrix."""
    return hpd_function(A, "invsqrt")


def logm_h(A) -> np.ndarray:
    """Principal logarithm of an HPD matrix."""
    return hpd_function(A, "log")


def expm_h(A) -> np.ndarray:
    """Exponential of a Hermitian matrix."""
    return hpd_function(A, "exp")


def powm_h(A, p: float) -> np.ndarray:
    """Real power of a Hermitian PSD (``p > 0``) or HPD (``p <= 0``) matrix."""
    return hpd_function(A, lambda x: np.power(x, p), positive=(p <= 0))


# ---------------------------------------------------------------------------
# factorizations and norms
# ---------------------------------------------------------------------------

def cholesky(A) -> np.ndarray:
    """Lower Cholesky factor ``R`` with ``A = R R*``.

    Raises
    ------
    NotPositiveDefiniteError
        With ``err.index`` set to the 1-based failing pivot.
    """
    A = check_hermitian(A)
    n = A.shape[0]
    if n == 0:
        return A.copy()
    H = hermitian_part(A)
    potrf = lapack.zpotrf if np.iscomplexobj(H) else lapack.dpotrf
    R, info = potrf(H, lower=1, clean=1)
    if info > 0:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite (pivot {info} <= 0)", index=int(info))
    if info < 0:  # pragma: no cover - argument error inside LAPACK
        raise InvalidInputError(f"potrf rejected argument {-info}")
    return np.tril(R)


def schatten_norm(A, p: float = 2.0, hermitian: bool = False) -> float:
    """Schatten ``p``-norm: the ``l^p`` norm of the singular values.

    Parameters
    ----------
    A : array_like
        Square matrix.
    p : float
        ``1 <= p <= inf``; ``np.inf`` gives the spectral norm.
    hermitian : bool
        Use ``|eigenvalues|`` as singular values (faster, caller vouches
        for the structure).
    """
    if not (p >= 1):
        raise InvalidParameterError(f"Schatten norm needs p >= 1, got {p}")
    A = _as_square(A)
    if A.size == 0:
        return 0.0
    if hermitian:
        s = np.abs(np.linalg.eigvalsh(hermitian_part(A)))
    else:
        s = np.linalg.svd(A, compute_uv=False)
    if np.isinf(p):
        return float(np.max(s))
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    return float(np.sum(s ** p) ** (1.0 / p))


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices (left to right)."""
    if not mats:
        raise InvalidInputError("kron needs at least one factor")
    out = np.atleast_2d(np.asarray(mats[0]))
    for M in mats[1:]:
        out = np.kron(out, np.atleast_2d(np.asarray(M)))
    return out
