import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from glt_lab.errors import InvalidParameterError
from glt_lab.fft import dft, dst1, fft, ifft, next_pow2
from glt_lab.structured import (MultiIndex, circulant, circulant_eigenvalues, circulant_matvec,
                                diagonal_sampling, dst_matrix, exchange_matrix, hankel,
                                omega_circulant, omega_circulant_eigenvalues, shift_matrix,
                                tau_eigenvalues, tau_generator, tau_matrix, toeplitz,
                                toeplitz_matvec)
from glt_lab.symbols import TrigPolynomial

LAPL = TrigPolynomial.scalar({0: 2.0, 1: -1.0, -1: -1.0})


# -- fft ---------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 8, 64, 3, 12])
def test_fft_matches_numpy(rng, n):
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    np.testing.assert_allclose(fft(x), np.fft.fft(x), atol=1e-12 * n)
    np.testing.assert_allclose(ifft(fft(x)), x, atol=1e-13 * n)


def test_dft_fallback_and_next_pow2():
    x = np.arange(6.0)
    np.testing.assert_allclose(dft(x), np.fft.fft(x), atol=1e-12)
    assert [next_pow2(v) for v in (1, 2, 3, 79, 128)] == [1, 2, 4, 128, 128]


def test_dst1_matches_matrix(rng):
    n = 9
    x = rng.standard_normal(n)
    S = np.sin(np.outer(np.arange(1, n + 1), np.arange(1, n + 1)) * np.pi / (n + 1))
    np.testing.assert_allclose(dst1(x), S @ x, atol=1e-12)


# -- basic builders ------------------------------------------------------------

def test_multi_index():
    n = MultiIndex((2, 3))
    assert n.d == 2 and n.N == 6
    with pytest.raises(InvalidParameterError):
        MultiIndex((2, 0))


def test_shift_matrix_examples():
    np.testing.assert_array_equal(shift_matrix(3, 0), np.eye(3))
    np.testing.assert_array_equal(shift_matrix(3, 1), np.eye(3, k=-1))
    np.testing.assert_array_equal(shift_matrix(2, -1), [[0, 1], [0, 0]])
    np.testing.assert_array_equal(shift_matrix(3, 5), np.zeros((3, 3)))


def test_toeplitz_examples():
    np.testing.assert_array_equal(toeplitz(3, LAPL), [[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    p = TrigPolynomial.separable_sum(LAPL, LAPL)
    expected = [[4, -1, -1, 0], [-1, 4, 0, -1], [-1, 0, 4, -1], [0, -1, -1, 4]]
    np.testing.assert_array_equal(toeplitz((2, 2), p), expected)
    T2 = toeplitz(2, LAPL)
    np.testing.assert_array_equal(toeplitz((2, 2), p),
                                  np.kron(T2, np.eye(2)) + np.kron(np.eye(2), T2))


def test_toeplitz_block_quadratic_bspline():
    F0 = np.array([[4.0, -2.0], [-2.0, 8.0]]) / 3
    F1 = np.array([[0.0, -2.0], [0.0, -2.0]]) / 3
    p = TrigPolynomial({0: F0, 1: F1, -1: F1.T})
    T = toeplitz(2, p)
    np.testing.assert_allclose(T[:2, :2], F0)
    np.testing.assert_allclose(T[2:, :2], F1)       # block (i, j) = F_{i-j}
    np.testing.assert_allclose(T[:2, 2:], F1.T)
    np.testing.assert_allclose(T, T.T)


def test_toeplitz_complex_hermitian(rng):
    c = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    p = TrigPolynomial({0: np.eye(2) * 3, 1: c, -1: c.conj().T, (2,): 0.5j * np.eye(2),
                        (-2,): -0.5j * np.eye(2)})
    assert p.hermitian
    T = toeplitz(5, p)
    assert np.abs(T - T.conj().T).max() <= 1e-12


def test_toeplitz_drops_far_coefficients_with_warning():
    p = TrigPolynomial.scalar({0: 1.0, 5: 2.0})
    with pytest.warns(RuntimeWarning):
        T = toeplitz(3, p)
    np.testing.assert_array_equal(T, np.eye(3))


def test_toeplitz_eigenvalues_in_symbol_range():
    for n in (5, 20, 60):
        lam = np.linalg.eigvalsh(toeplitz(n, LAPL))
        assert lam.min() > 0 and lam.max() < 4


def test_toeplitz_separable_product():
    f1 = TrigPolynomial.scalar({0: 3.0, 1: 1.0, -1: 1.0})
    f2 = TrigPolynomial.scalar({0: 1.0, 2: 0.5, -1: 0.25j})
    T = toeplitz((3, 4), TrigPolynomial.separable_product(f1, f2))
    np.testing.assert_allclose(T, np.kron(toeplitz(3, f1), toeplitz(4, f2)), atol=1e-15)


def test_circulant_examples():
    np.testing.assert_array_equal(circulant(3, np.array([1, 0, 0])), np.eye(3))
    Z = circulant(3, np.array([0, 1, 0]))
    np.testing.assert_array_equal(Z, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    C = circulant(3, np.array([2, -1, -1]))
    np.testing.assert_array_equal(C, C.T)
    np.testing.assert_array_equal(C.sum(axis=1), 0)


def test_circulant_eigenvalue_examples():
    np.testing.assert_allclose(circulant_eigenvalues(np.r_[1.0, 0, 0, 0]), np.ones(4))
    w = circulant_eigenvalues(np.array([0.0, 1.0, 0.0]))
    np.testing.assert_allclose(w, [cmath.exp(2j * math.pi * j / 3) for j in range(3)], atol=1e-15)
    np.testing.assert_allclose(circulant_eigenvalues(np.array([2.0, -1, -1])), [0, 3, 3],
                               atol=1e-14)


def test_circulant_matvec_examples():
    for col in ([1.0, 0, 0], [0.0, 1, 0], [2.0, -1, -1]):
        col = np.array(col)
        np.testing.assert_allclose(circulant_matvec(col, np.r_[1.0, 0, 0]), col, atol=1e-15)
    np.testing.assert_allclose(circulant_matvec(np.array([2.0, -1, -1]), np.ones(3)), 0,
                               atol=1e-14)


@settings(max_examples=50)
@given(n=st.integers(1, 512), seed=st.integers(0, 2 ** 32 - 1))
def test_circulant_matvec_random(n, seed):
    r = np.random.default_rng(seed)
    a = r.standard_normal(n) + 1j * r.standard_normal(n)
    x = r.standard_normal(n)
    y = circulant(n, a) @ x
    assert np.abs(circulant_matvec(a, x) - y).max() <= 1e-10 * max(1, np.abs(y).max())


def test_toeplitz_matvec_examples():
    e1 = np.r_[1.0, 0, 0, 0]
    np.testing.assert_allclose(toeplitz_matvec(4, LAPL, e1), [2, -1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(toeplitz_matvec(4, LAPL, np.ones(4)), [1, 0, 0, 1], atol=1e-15)


def test_omega_circulant_examples():
    a = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(omega_circulant(3, 1.0, a), circulant(3, a))
    np.testing.assert_array_equal(omega_circulant(2, -1.0, np.array([0.0, 1.0])),
                                  [[0, -1], [1, 0]])
    with pytest.raises(InvalidParameterError):
        omega_circulant(2, 0, np.array([0.0, 1.0]))


@pytest.mark.parametrize("omega", [-1.0, 1j, 2.0 - 0.5j, np.exp(0.3j)])
def test_omega_circulant_eigenvalues(rng, omega):
    n = 7
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    dense = np.linalg.eigvals(omega_circulant(n, omega, a))
    fast = omega_circulant_eigenvalues(omega, a)
    # match as multisets
    for z in fast:
        assert np.abs(dense - z).min() < 1e-10 * max(1, abs(z))


def test_dst_and_tau_examples():
    for n in (1, 4, 17):
        Q = dst_matrix(n)
        np.testing.assert_allclose(Q @ Q, np.eye(n), atol=1e-12)
    n = 6
    W = tau_matrix(n, np.r_[0.0, 1.0])
    np.testing.assert_array_equal(W, tau_generator(n))
    col = np.zeros(n)
    col[1] = 1
    lam = tau_eigenvalues(col)
    np.testing.assert_allclose(np.sort(lam), np.sort(2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))),
                               atol=1e-12)
    np.testing.assert_array_equal(tau_matrix(n, np.array([2.5])), 2.5 * np.eye(n))


def test_tau_cross_sum_exact(rng):
    n = 8
    S = tau_matrix(n, rng.integers(-5, 6, size=n).astype(float))
    P = np.pad(S, 1)
    lhs = P[:-2, 1:-1] + P[2:, 1:-1]
    rhs = P[1:-1, :-2] + P[1:-1, 2:]
    np.testing.assert_array_equal(lhs, rhs)


def test_hankel_examples():
    np.testing.assert_array_equal(hankel(2, np.array([1, 2, 3])), [[1, 2], [2, 3]])
    np.testing.assert_array_equal(hankel(3, np.zeros(5)), np.zeros((3, 3)))
    a = np.arange(1.0, 8.0)                  # a_2..a_8, n = 4
    n = 4
    # J T: rows reversed Toeplitz with t_{i-j} = a_{n+1-(i-j)}
    T = np.array([[a[(n - 1) - i + j] for j in range(n)] for i in range(n)])
    np.testing.assert_array_equal(hankel(n, a), exchange_matrix(n) @ T)


def test_diagonal_sampling_examples():
    np.testing.assert_array_equal(diagonal_sampling(3, lambda x: 0 * x + 2.0), 2 * np.eye(3))
    np.testing.assert_allclose(diagonal_sampling(4, lambda x: x), np.diag([0.25, 0.5, 0.75, 1.0]))
    np.testing.assert_allclose(diagonal_sampling((2, 2), lambda x, y: x), np.diag([0.5, 0.5, 1, 1]))
