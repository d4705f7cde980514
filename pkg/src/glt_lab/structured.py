"""Structured matrix builders and fast products.

Multilevel matrices are dense and ordered "space-major": the multi-index
``i = (i_1, ..., i_d)`` runs lexicographically on the outside and each entry
is an ``r x r`` block, so ``T_n(f (x) A) = T_n(f) (x) A``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .fft import dft, dst1, fft, ifft, is_pow2, next_pow2
from .symbols import TrigPolynomial

__all__ = [
    "MultiIndex", "SamplingFn", "shift_matrix", "toeplitz", "circulant",
    "circulant_eigenvalues", "circulant_matvec", "toeplitz_matvec",
    "omega_circulant", "omega_circulant_eigenvalues", "dst_matrix",
    "tau_generator", "tau_matrix", "tau_eigenvalues", "hankel",
    "diagonal_sampling", "exchange_matrix",
]


@dataclass(frozen=True)
class MultiIndex:
    """Vector of positive sizes ``n = (n_1, ..., n_d)``."""
    components: tuple

    def __post_init__(self):
        comps = tuple(int(v) for v in np.atleast_1d(self.components))
        if not comps or min(comps) < 1:
            raise InvalidParameterError("multi-index components must be positive")
        object.__setattr__(self, "components", comps)

    @property
    def d(self) -> int:
        return len(self.components)

    @property
    def N(self) -> int:
        return int(np.prod(self.components))

    @classmethod
    def of(cls, n) -> "MultiIndex":
        return n if isinstance(n, MultiIndex) else cls(n)


@dataclass(frozen=True)
class SamplingFn:
    """Block-valued function on ``[0,1]^d`` for diagonal sampling.

    ``func`` takes an array of shape ``(m, d)`` and returns ``(m,)`` (scalar
    case) or ``(m, r, r)``.
    """
    d: int
    r: int
    func: Callable

    def eval(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, self.d)
        v = np.asarray(self.func(x))
        m = x.shape[0]
        if self.r == 1:
            return np.broadcast_to(v.reshape(-1), (m,)).reshape(m, 1, 1)
        return np.broadcast_to(v, (m, self.r, self.r))


NLike = Union[int, Sequence[int], MultiIndex]


def shift_matrix(n: int, k: int) -> np.ndarray:
    """``J_n^{(k)}``: ones where ``i - j = k``; zero matrix when ``|k| >= n``."""
    return np.eye(n, k=-k)


def exchange_matrix(n: int) -> np.ndarray:
    """Anti-identity (flip) matrix."""
    return np.fliplr(np.eye(n))


def _lex_indices(comps):
    grids = np.meshgrid(*[np.arange(c) for c in comps], indexing="ij")
    return [g.ravel() for g in grids]


def toeplitz(n: NLike, p: TrigPolynomial) -> np.ndarray:
    """Multilevel block Toeplitz matrix ``T_n(p)``.

    Entry ``(i, j)`` (multi-indices) is the block ``F_{i-j}``.  Coefficients
    with ``|k_l| >= n_l`` in some level cannot appear and are dropped with a
    warning.

    Returns
    -------
    ndarray, shape (N r, N r)
        Real when every coefficient is real.
    """
    n = MultiIndex.of(n)
    if n.d != p.d:
        raise InvalidInputError(f"multi-index has d={n.d}, polynomial has d={p.d}")
    comps = n.components
    r = p.r
    span = [2 * c - 1 for c in comps]
    table = np.zeros(tuple(span) + (r, r), dtype=np.complex128)
    dropped = []
    for k, F in p.coeffs.items():
        if any(abs(kl) >= cl for kl, cl in zip(k, comps)):
            if np.any(F != 0):
                dropped.append(k)
            continue
        table[tuple(kl + cl - 1 for kl, cl in zip(k, comps))] += F
    if dropped:
        warnings.warn(f"ignored {len(dropped)} coefficient(s) outside the matrix support",
                      RuntimeWarning, stacklevel=2)
    idx = _lex_indices(comps)
    diff = tuple((a[:, None] - a[None, :]) + c - 1 for a, c in zip(idx, comps))
    blocks = table[diff]                      # (N, N, r, r)
    N = n.N
    T = blocks.transpose(0, 2, 1, 3).reshape(N * r, N * r)
    if np.all(table.imag == 0):
        T = T.real.copy()
    return T


def circulant(n: int, first_column) -> np.ndarray:
    """Circulant matrix with entries ``a_{(i-j) mod n}``."""
    a = np.asarray(first_column)
    if a.shape != (n,):
        raise InvalidInputError(f"first column must have length {n}")
    i = np.arange(n)
    return a[(i[:, None] - i[None, :]) % n]


def circulant_eigenvalues(first_column) -> np.ndarray:
    """``lambda_j = sum_k a_k exp(2 pi i jk/n)``, ``j = 0..n-1``.

    ``lambda_j`` pairs with the eigenvector ``[exp(-2 pi i jk/n)]_k``.
    """
    a = np.asarray(first_column, dtype=np.complex128)
    return len(a) * ifft(a)


def circulant_matvec(first_column, x) -> np.ndarray:
    """``C x`` in ``O(n log n)`` for power-of-two ``n`` (dense DFT otherwise)."""
    a = np.asarray(first_column)
    x = np.asarray(x)
    if x.shape[0] != a.shape[0]:
        raise InvalidInputError("length mismatch")
    y = ifft(fft(a) * fft(x))
    if not (np.iscomplexobj(a) or np.iscomplexobj(x)):
        y = y.real
    return y


def toeplitz_matvec(n: int, p: TrigPolynomial, x) -> np.ndarray:
    """``T_n(p) x`` by circulant embedding of order ``next_pow2(2n - 1)``."""
    if p.d != 1 or p.r != 1:
        raise InvalidInputError("toeplitz_matvec handles scalar univariate symbols")
    x = np.asarray(x)
    if x.shape != (n,):
        raise InvalidInputError(f"x must have length {n}")
    m = next_pow2(2 * n - 1)
    c = np.zeros(m, dtype=np.complex128)
    for (k,), F in p.coeffs.items():
        if abs(k) < n:
            c[k % m] += F[0, 0]
    xp = np.zeros(m, dtype=np.complex128)
    xp[:n] = x
    y = ifft(fft(c) * fft(xp))[:n]
    if np.all(c.imag == 0) and not np.iscomplexobj(x):
        y = y.real
    return y


def omega_circulant(n: int, omega: complex, coeffs) -> np.ndarray:
    """``omega``-circulant ``sum_k a_k (Z^omega)^k``: entries ``a_{(i-j) mod n}``,
    times ``omega`` strictly above the diagonal (``a_0`` stays unscaled)."""
    if omega == 0:
        raise InvalidParameterError("omega must be nonzero")
    C = circulant(n, np.asarray(coeffs))
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    out = C.astype(np.result_type(C, type(omega)))
    out[upper] = omega * out[upper]
    return out


def omega_circulant_eigenvalues(omega: complex, coeffs) -> np.ndarray:
    """``p(2 pi j/n)`` with ``p(theta) = sum_k omega^{k/n} a_k exp(ik theta)``.

    ``omega^{1/n}`` is the principal branch.
    """
    if omega == 0:
        raise InvalidParameterError("omega must be nonzero")
    a = np.asarray(coeffs, dtype=np.complex128)
    n = len(a)
    root = np.exp(np.log(complex(omega)) / n)
    return circulant_eigenvalues(a * root ** np.arange(n))


def dst_matrix(n: int) -> np.ndarray:
    """Sine matrix ``Q_n = sqrt(2/(n+1)) [sin(rs pi/(n+1))]_{r,s=1..n}``."""
    r = np.arange(1, n + 1)
    return np.sqrt(2.0 / (n + 1)) * np.sin(np.outer(r, r) * np.pi / (n + 1))


def tau_generator(n: int) -> np.ndarray:
    """``W_n = tridiag(1, 0, 1)``."""
    return np.eye(n, k=1) + np.eye(n, k=-1)


def tau_matrix(n: int, coeffs) -> np.ndarray:
    """``sum_k a_k W_n^k`` (powers by repeated shift-add, exact for integers)."""
    a = np.asarray(coeffs)
    if a.shape[0] > n:
        raise InvalidInputError("at most n coefficients")
    S = np.zeros((n, n), dtype=np.result_type(a, float))
    P = np.eye(n)
    for k, ak in enumerate(a):
        if k:
            Q = np.zeros_like(P)
            Q[1:] += P[:-1]
            Q[:-1] += P[1:]
            P = Q
        if ak != 0:
            S = S + ak * P
    return S


def tau_eigenvalues(first_column) -> np.ndarray:
    """Eigenvalues of a tau matrix from its first column via the DST.

    ``S = Q diag(lambda) Q`` gives ``Q s = diag(lambda) Q e_1``, so the
    eigenvalues are the transformed column divided by ``Q e_1``; entry ``j``
    pairs with eigenvector ``Q e_j``.
    """
    s = np.asarray(first_column)
    n = s.shape[0]
    e1 = np.zeros(n)
    e1[0] = 1.0
    return dst1(s) / dst1(e1)


def hankel(n: int, coeffs) -> np.ndarray:
    """Hankel matrix ``[a_{i+j}]_{i,j=1..n}`` from ``(a_2, ..., a_{2n})``."""
    a = np.asarray(coeffs)
    if a.shape != (2 * n - 1,):
        raise InvalidInputError(f"need {2 * n - 1} coefficients")
    i = np.arange(n)
    return a[i[:, None] + i[None, :]]


def diagonal_sampling(n: NLike, a: Union[SamplingFn, Callable], r: int | None = None) -> np.ndarray:
    """Block diagonal ``diag_{i=1..n} a(i/n)`` in lexicographic order.

    Parameters
    ----------
    n : int, sequence or MultiIndex
    a : SamplingFn or callable
        A bare callable is treated as scalar and vectorized over nodes of
        shape ``(m, d)`` (for ``d = 1`` it also accepts a 1-D array).
    """
    n = MultiIndex.of(n)
    if not isinstance(a, SamplingFn):
        f = a
        if n.d == 1:
            a = SamplingFn(1, r or 1, lambda x, f=f: f(x[:, 0]))
        else:
            a = SamplingFn(n.d, r or 1, lambda x, f=f: f(*[x[:, l] for l in range(x.shape[1])]))
    if a.d != n.d:
        raise InvalidInputError("sampling function dimension mismatch")
    idx = _lex_indices(n.components)
    x = np.stack([(i + 1) / c for i, c in zip(idx, n.components)], axis=1)
    blocks = a.eval(x)
    rr = a.r
    N = n.N
    if rr == 1:
        return np.diag(blocks[:, 0, 0])
    out = np.zeros((N * rr, N * rr), dtype=blocks.dtype)
    for i in range(N):
        out[i * rr:(i + 1) * rr, i * rr:(i + 1) * rr] = blocks[i]
    return out
