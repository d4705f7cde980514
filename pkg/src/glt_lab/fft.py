"""Radix-2 FFT and the transforms built on it.

Convention matches :func:`numpy.fft.fft`: ``X_j = sum_k x_k exp(-2 pi i jk/n)``.
Lengths that are not powers of two go through a dense DFT.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

__all__ = ["is_pow2", "next_pow2", "fft", "ifft", "dft", "dst1"]


def is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def next_pow2(n: int) -> int:
    """Smallest power of two ``>= n``."""
    return 1 if n <= 1 else 1 << (int(n) - 1).bit_length()


_BITREV_CACHE: dict = {}


def _bitrev(n):
    perm = _BITREV_CACHE.get(n)
    if perm is None:
        bits = n.bit_length() - 1
        idx = np.arange(n)
        perm = np.zeros(n, dtype=np.int64)
        for b in range(bits):
            perm |= ((idx >> b) & 1) << (bits - 1 - b)
        _BITREV_CACHE[n] = perm
    return perm


def _fft_pow2(x, sign):
    n = x.shape[-1]
    a = np.asarray(x, dtype=np.complex128)[..., _bitrev(n)].copy()
    size = 2
    while size <= n:
        half = size // 2
        w = np.exp(sign * 2j * np.pi * np.arange(half) / size)
        a = a.reshape(a.shape[:-1] + (n // size, size))
        even = a[..., :half].copy()
        odd = a[..., half:] * w
        a[..., :half] = even + odd
        a[..., half:] = even - odd
        a = a.reshape(a.shape[:-2] + (n,))
        size *= 2
    return a


def dft(x, sign: int = -1) -> np.ndarray:
    """Dense ``O(n^2)`` DFT along the last axis (fallback path)."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    k = np.arange(n)
    F = np.exp(sign * 2j * np.pi * np.outer(k, k) / n)
    return x @ F.T


def fft(x) -> np.ndarray:
    """Forward DFT along the last axis."""
    x = np.asarray(x)
    n = x.shape[-1]
    if n == 0:
        raise InvalidInputError("empty input")
    if is_pow2(n):
        return _fft_pow2(x, -1)
    return dft(x, -1)


def ifft(x) -> np.ndarray:
    """Inverse DFT along the last axis (with the ``1/n`` factor)."""
    x = np.asarray(x)
    n = x.shape[-1]
    if n == 0:
        raise InvalidInputError("empty input")
    if is_pow2(n):
        return _fft_pow2(x, +1) / n
    return dft(x, +1) / n


def dst1(x) -> np.ndarray:
    """Unnormalized DST-I: ``y_j = sum_k x_k sin(jk pi/(n+1))``, ``j, k = 1..n``.

    Computed from the odd extension of length ``2(n+1)``.
    """
    x = np.asarray(x)
    n = x.shape[-1]
    z = np.zeros(x.shape[:-1] + (2 * (n + 1),), dtype=np.result_type(x, float))
    z[..., 1:n + 1] = x
    z[..., n + 2:] = -x[..., ::-1]
    Z = fft(z)
    y = -0.5 * Z[..., 1:n + 1].imag if not np.iscomplexobj(x) else 0.5j * Z[..., 1:n + 1]
    return y
