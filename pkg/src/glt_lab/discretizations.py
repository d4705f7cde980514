"""Concrete matrix families: 4th-order finite differences, B-spline Toeplitz
blocks and Curie-Weiss Hamiltonians."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import constants as C
from .errors import InvalidParameterError, SizeError
from .structured import SamplingFn, toeplitz
from .symbols import SymbolFn, TrigPolynomial

__all__ = [
    "CWParams", "fd4_matrix", "fd4_matrix_2d", "fd4_symbol", "bspline_symbol",
    "bspline_toeplitz", "curie_weiss_restricted", "curie_weiss_symbol",
    "curie_weiss_extremes", "curie_weiss_full", "curie_weiss_full_kron",
    "schrodinger_fd",
]

_KP = TrigPolynomial.scalar({0: 1.0, -1: -2.0, -2: 1.0})
_K0 = TrigPolynomial.scalar({0: 4.0, 1: -2.0, -1: -2.0})
_KM = TrigPolynomial.scalar({0: 1.0, 1: -2.0, 2: 1.0})


def _scalar_fn(alpha):
    if isinstance(alpha, SamplingFn):
        return lambda x: alpha.eval(np.asarray(x).reshape(-1, 1))[:, 0, 0]
    return alpha


def fd4_matrix(n: int, alpha: Callable) -> np.ndarray:
    """Variable-coefficient discretization of ``(alpha u'')''`` on ``(0,1)``.

    With ``h = 1/(n+3)`` and ``x_i = i h``::

        B_n = D+ K+ + D K + D- K-

    where ``D+, D, D- = diag(alpha(x_{i+2})), diag(alpha(x_{i+1})),
    diag(alpha(x_i))`` for ``i = 1..n``, ``K+`` has ``(1, -2, 1)`` on the
    diagonal and the first two superdiagonals, ``K = tridiag(-2, 4, -2)``
    and ``K- = (K+)^T``.  No ``h^4`` scaling is applied.

    Parameters
    ----------
    n : int
    alpha : callable or SamplingFn
        Vectorized nonnegative coefficient on ``[0, 1]``.
    """
    if n < 1:
        raise InvalidParameterError("n must be positive")
    f = _scalar_fn(alpha)
    h = 1.0 / (n + 3)
    x = np.arange(n + 4) * h
    a = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    i = np.arange(1, n + 1)
    with warnings.catch_warnings():
        # stencils wider than a tiny n are truncated on purpose
        warnings.simplefilter("ignore", RuntimeWarning)
        B = (a[i + 2][:, None] * toeplitz(n, _KP) + a[i + 1][:, None] * toeplitz(n, _K0)
             + a[i][:, None] * toeplitz(n, _KM))
    return B


def fd4_matrix_2d(n1: int, n2: int, alpha: Callable) -> np.ndarray:
    """Kronecker sum ``B_{n1}(alpha) (x) I + I (x) B_{n2}(alpha)``."""
    return (np.kron(fd4_matrix(n1, alpha), np.eye(n2))
            + np.kron(np.eye(n1), fd4_matrix(n2, alpha)))


def fd4_symbol(alpha: Callable, d: int = 1) -> SymbolFn:
    """``sum_l alpha(x_l) (2 - 2cos theta_l)^2``."""
    f = _scalar_fn(alpha)

    def func(x, th):
        return sum(np.asarray(f(x[:, l])) * (2 - 2 * np.cos(th[:, l])) ** 2 for l in range(d))

    return SymbolFn(d, 1, func, name="fd4")


# ---------------------------------------------------------------------------
# B-splines
# ---------------------------------------------------------------------------

_BSPLINE = {
    ("quadratic_C0", "stiffness"): (1 / 3, {1: [[0, -2], [0, -2]], 0: [[4, -2], [-2, 8]],
                                            -1: [[0, 0], [-2, -2]]}),
    ("quadratic_C0", "mass"): (1 / 30, {1: [[0, 3], [0, 1]], 0: [[4, 3], [3, 12]],
                                        -1: [[0, 0], [3, 1]]}),
    ("cubic_C1", "stiffness"): (1 / 40, {1: [[-15, -15], [-3, -15]], 0: [[48, 0], [0, 48]],
                                         -1: [[-15, -3], [-15, -15]]}),
    ("cubic_C1", "mass"): (1 / 560, {1: [[9, 53], [1, 9]], 0: [[128, 80], [80, 128]],
                                     -1: [[9, 1], [53, 9]]}),
}


def bspline_symbol(kind: str, which: str) -> TrigPolynomial:
    """2x2 generating function of the normalized stiffness (``f``), mass
    (``h``) or combined (``f + h``) matrices.

    Parameters
    ----------
    kind : {"quadratic_C0", "cubic_C1"}
    which : {"stiffness", "mass", "sum"}
    """
    if which == "sum":
        return bspline_symbol(kind, "stiffness") + bspline_symbol(kind, "mass")
    try:
        s, blocks = _BSPLINE[(kind, which)]
    except KeyError:
        raise InvalidParameterError(f"unknown B-spline family {kind!r}/{which!r}") from None
    return TrigPolynomial({k: s * np.array(v, dtype=float) for k, v in blocks.items()})


def bspline_toeplitz(kind: str, which: str, n: int) -> np.ndarray:
    """``T_n`` of :func:`bspline_symbol` (order ``2n``); boundary rows of the
    assembled matrices are not reproduced."""
    if n < 2:
        raise InvalidParameterError("n must be >= 2")
    return toeplitz(n, bspline_symbol(kind, which))


# ---------------------------------------------------------------------------
# Curie-Weiss
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CWParams:
    """Coupling ``gamma > 0``, transverse field ``B``, spin count ``N >= 1``."""
    gamma: float
    B: float
    N: int

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidParameterError("gamma must be positive")
        if int(self.N) < 1:
            raise InvalidParameterError("N must be >= 1")
        object.__setattr__(self, "N", int(self.N))


def curie_weiss_restricted(p: CWParams, normalization: str = "size") -> np.ndarray:
    """Tridiagonal Curie-Weiss matrix on the symmetric subspace, order ``N+1``.

    Parameters
    ----------
    p : CWParams
    normalization : {"size", "spin"}
        ``"size"`` (default) samples on the midpoint nodes of the matrix
        order ``N+1``::

            diag_k  = -(gamma/2) (2(k+1/2)/(N+1) - 1)^2
            off_k   = -B sqrt((N-k)(k+1)) / (N+1)            k = 0..N

        ``"spin"`` is the exact ``1/N`` mean-field scaling::

            diag_k  = -(gamma/2) (2k/N - 1)^2
            off_k   = -B sqrt(1 - k/N) sqrt((k+1)/N)

        Both share the symbol of :func:`curie_weiss_symbol`; only ``"size"``
        keeps the spectrum inside the symbol range at small ``N``.
    """
    N = p.N
    k = np.arange(N + 1, dtype=float)
    if normalization == "size":
        diag = -(p.gamma / 2) * (2 * (k + 0.5) / (N + 1) - 1) ** 2
        off = -p.B * np.sqrt((N - k[:-1]) * (k[:-1] + 1)) / (N + 1)
    elif normalization == "spin":
        diag = -(p.gamma / 2) * (2 * k / N - 1) ** 2
        off = -p.B * np.sqrt(1 - k[:-1] / N) * np.sqrt((k[:-1] + 1) / N)
    else:
        raise InvalidParameterError(f"unknown normalization {normalization!r}")
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def curie_weiss_symbol(gamma: float, B: float) -> SymbolFn:
    """``-(gamma/2)(2x-1)^2 - 2B sqrt(x(1-x)) cos(theta)``."""
    def func(x, th):
        x = np.clip(x[:, 0], 0.0, 1.0)
        return -(gamma / 2) * (2 * x - 1) ** 2 - 2 * B * np.sqrt(x * (1 - x)) * np.cos(th[:, 0])

    return SymbolFn(1, 1, func, name="curie_weiss")


def curie_weiss_extremes(gamma: float, B: float):
    """Exact ``(min, max)`` of :func:`curie_weiss_symbol`.

    With ``s = sqrt(x(1-x))`` in ``[0, 1/2]`` the symbol is
    ``-gamma/2 + 2 gamma s^2 -/+ 2|B| s``; the maximum is ``|B|`` and the
    minimum ``-gamma/2 - B^2/(2 gamma)`` if ``|B| <= gamma``, else ``-|B|``.
    """
    b = abs(B)
    lo = -gamma / 2 - b * b / (2 * gamma) if b <= gamma else -b
    return lo, b


def _check_full(p: CWParams):
    if p.N > C.CW_FULL_MAX_N:
        raise SizeError(f"N = {p.N} exceeds the dense limit {C.CW_FULL_MAX_N}")


def curie_weiss_full(p: CWParams) -> np.ndarray:
    """Normalized full Hamiltonian ``H / N`` on ``(C^2)^{(x) N}``.

    ``H = -(gamma/(2N)) sum_{x,y} s3(x) s3(y) - B sum_x s1(x)``.  The
    ``s3`` part is diagonal in the product basis (``(sum_x s_x)^2``) and each
    ``s1(x)`` flips one bit, so the matrix is filled directly; see
    :func:`curie_weiss_full_kron` for the literal Pauli-product build.
    """
    _check_full(p)
    N = p.N
    dim = 1 << N
    states = np.arange(dim)
    # bit x set <-> spin down (s3 = -1), with site 1 the most significant factor
    bits = (states[:, None] >> np.arange(N)[None, :]) & 1
    m = N - 2 * bits.sum(axis=1)
    H = np.zeros((dim, dim))
    H[states, states] = -(p.gamma / (2 * N)) * m.astype(float) ** 2
    for x in range(N):
        H[states, states ^ (1 << x)] -= p.B
    return H / N


_S1 = np.array([[0.0, 1.0], [1.0, 0.0]])
_S3 = np.array([[1.0, 0.0], [0.0, -1.0]])


def _site_op(op, x, N):
    out = np.ones((1, 1))
    for y in range(N):
        out = np.kron(out, op if y == x else np.eye(2))
    return out


def curie_weiss_full_kron(p: CWParams) -> np.ndarray:
    """Same matrix as :func:`curie_weiss_full`, assembled from Kronecker
    products of Pauli matrices (slow; reference implementation)."""
    _check_full(p)
    N = p.N
    s3 = [_site_op(_S3, x, N) for x in range(N)]
    S3 = sum(s3)
    H = -(p.gamma / (2 * N)) * (S3 @ S3) - p.B * sum(_site_op(_S1, x, N) for x in range(N))
    return H / N


def schrodinger_fd(N: int, gamma: float, B: float, coefficient: str = "consistent") -> np.ndarray:
    """Second-difference Schrodinger-type matrix of order ``N+1``.

    ``D_a^{1/2} tridiag(-1, 2, -1) D_a^{1/2} + diag(c)`` on the nodes
    ``x_i = (i+1/2)/(N+1)``, with potential
    ``c(x) = -(gamma/2)(2x-1)^2 - 2B sqrt(x(1-x))``.  The differences are in
    grid units (the operator carries its own ``1/(N+1)^2``), so the symbol is
    ``a(x)(2 - 2cos theta) + c(x)``.

    Parameters
    ----------
    coefficient : {"consistent", "literal"}
        ``"consistent"`` uses ``a = B sqrt(x(1-x))``, for which the symbol
        equals :func:`curie_weiss_symbol`; ``"literal"`` uses
        ``a = 2B sqrt(x(1-x))``.
    """
    if coefficient == "consistent":
        scale = 1.0
    elif coefficient == "literal":
        scale = 2.0
    else:
        raise InvalidParameterError(f"unknown coefficient choice {coefficient!r}")
    x = (np.arange(N + 1) + 0.5) / (N + 1)
    s = np.sqrt(x * (1 - x))
    a = scale * B * s
    c = -(gamma / 2) * (2 * x - 1) ** 2 - 2 * B * s
    K = 2 * np.eye(N + 1) - np.eye(N + 1, k=1) - np.eye(N + 1, k=-1)
    ra = np.sqrt(np.abs(a))
    sgn = -1.0 if B < 0 else 1.0
    return sgn * (ra[:, None] * K * ra[None, :]) + np.diag(c)
