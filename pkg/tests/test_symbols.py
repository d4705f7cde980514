import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_hpd
from glt_lab.errors import DomainError, InvalidInputError
from glt_lab.linalg import sqrtm_h
from glt_lab.symbols import (GridSymbol, SymbolFn, TrigPolynomial, candidate_symbol,
                             constant_symbol, eval_trig, geometric_mean_symbol,
                             read_grid_symbol, rearrange, sample_symbol, scalar_symbol,
                             write_grid_symbol)

LAPL = TrigPolynomial.scalar({0: 2.0, 1: -1.0, -1: -1.0})
A2 = np.array([[2.0, 1.0], [1.0, 2.0]])
B2 = np.array([[3.0, 1.0], [1.0, 1.0]])


def test_eval_trig_examples():
    assert eval_trig(LAPL, [0.0])[0, 0] == pytest.approx(0.0)
    assert eval_trig(LAPL, [math.pi])[0, 0] == pytest.approx(4.0)
    p = TrigPolynomial({0: np.eye(2)})
    np.testing.assert_allclose(eval_trig(p, [1.234]), np.eye(2))


def test_trig_hermitian_flag():
    assert LAPL.hermitian
    assert not TrigPolynomial.scalar({1: 1.0}).hermitian
    p = TrigPolynomial({1: np.array([[0, 1j], [0, 0]]), -1: np.array([[0, 0], [-1j, 0]])})
    assert p.hermitian
    th = np.linspace(-3, 3, 7)[:, None]
    V = p.eval_many(th)
    assert np.abs(V - np.conj(np.swapaxes(V, 1, 2))).max() < 1e-12


def test_sample_symbol_examples():
    g = sample_symbol(constant_symbol(np.diag([1.0, 3.0])), 3, 4)
    assert g.node_count == 12
    assert np.all(g.values == np.diag([1.0, 3.0]))
    g = sample_symbol(scalar_symbol(lambda x, t: x[:, 0]), 2, 1)
    np.testing.assert_allclose(g.values[:, 0, 0], [0.25, 0.75])
    g = sample_symbol(LAPL.as_symbol(), 1, 2)
    np.testing.assert_allclose(g.values[:, 0, 0], [2.0, 2.0], atol=1e-15)


def test_default_grid_about_2000_nodes():
    assert sample_symbol(LAPL.as_symbol()).node_count == 2000
    s2 = scalar_symbol(lambda x, t: x[:, 0] + t[:, 1], d=2)
    assert abs(sample_symbol(s2).node_count - 2000) < 500


def test_rearrange_examples():
    g = GridSymbol(1, 2, (2,), (1,), np.array([np.diag([1.0, 3.0])] * 2))
    np.testing.assert_array_equal(rearrange(g), [1, 1, 3, 3])
    g = GridSymbol(1, 1, (3,), (1,), np.array([2.0, 0.0, 1.0]).reshape(3, 1, 1))
    np.testing.assert_array_equal(rearrange(g), [0, 1, 2])
    g = GridSymbol(1, 2, (2,), (1,), np.array([np.diag([0.0, 5.0]), np.diag([2.0, 2.0])]))
    np.testing.assert_array_equal(rearrange(g), [0, 2, 2, 5])


def test_gridsymbol_shape_check():
    with pytest.raises(InvalidInputError):
        GridSymbol(1, 1, (2,), (2,), np.zeros((3, 1, 1)))


@settings(max_examples=25)
@given(seed=st.integers(0, 2 ** 32 - 1), r=st.integers(1, 4), m=st.integers(1, 20))
def test_rearrange_preserves_moments(seed, r, m):
    rng = np.random.default_rng(seed)
    V = np.array([random_hpd(rng, r) - np.eye(r) for _ in range(m)])
    lam = rearrange(GridSymbol(1, r, (m,), (1,), V))
    assert np.all(np.diff(lam) >= 0)
    tr = np.trace(V, axis1=1, axis2=2).real.sum()
    tr2 = np.einsum("mij,mji->", V, V).real
    assert abs(lam.sum() - tr) <= 1e-9 * max(1, abs(tr))
    assert abs((lam ** 2).sum() - tr2) <= 1e-9 * max(1, tr2)


def _pointwise(s, x=0.3, t=0.7):
    return s(np.array([x]), np.array([t]))


def test_geometric_mean_symbol_examples():
    k = constant_symbol(A2)
    np.testing.assert_allclose(_pointwise(geometric_mean_symbol(k, k)), A2, atol=1e-12)
    g = geometric_mean_symbol(constant_symbol(4.0), constant_symbol(9.0))
    assert _pointwise(g)[0, 0] == pytest.approx(6.0)
    g = geometric_mean_symbol(constant_symbol(np.diag([1.0, 4.0])),
                              constant_symbol(np.diag([9.0, 16.0])))
    np.testing.assert_allclose(_pointwise(g), np.diag([3.0, 8.0]), atol=1e-12)


def test_geometric_mean_symbol_singular_domain_error():
    k = scalar_symbol(lambda x, t: x[:, 0] - 0.5)
    with pytest.raises(DomainError):
        sample_symbol(geometric_mean_symbol(k, constant_symbol(1.0)), 4, 2)
    k = constant_symbol(np.diag([1.0, 0.0]))
    with pytest.raises(DomainError):
        sample_symbol(geometric_mean_symbol(k, constant_symbol(np.eye(2))), 2, 2)


@settings(max_examples=25)
@given(seed=st.integers(0, 2 ** 32 - 1), r=st.integers(1, 4))
def test_geometric_mean_symbol_symmetric(seed, r):
    rng = np.random.default_rng(seed)
    P, Q = random_hpd(rng, r), random_hpd(rng, r)
    k = SymbolFn(1, r, lambda x, t: np.einsum("m,ij->mij", 1 + x[:, 0], P))
    xi = SymbolFn(1, r, lambda x, t: np.einsum("m,ij->mij", 2 + np.cos(t[:, 0]), Q))
    a = sample_symbol(geometric_mean_symbol(k, xi), 3, 3).values
    b = sample_symbol(geometric_mean_symbol(xi, k), 3, 3).values
    assert np.abs(a - b).max() <= 1e-9 * np.abs(a).max()


def test_geometric_mean_symbol_commuting_is_sqrt_of_product(rng):
    Q = np.linalg.qr(rng.standard_normal((3, 3)))[0]
    D1, D2 = np.diag([1.0, 2.0, 5.0]), np.diag([3.0, 0.5, 7.0])
    P, R = Q @ D1 @ Q.T, Q @ D2 @ Q.T
    g = _pointwise(geometric_mean_symbol(constant_symbol(P), constant_symbol(R)))
    np.testing.assert_allclose(g, sqrtm_h(P @ R), atol=1e-8)


def test_candidate_symbol_zero():
    z = constant_symbol(np.zeros((2, 2)))
    g = candidate_symbol(z, z, mx=4, mtheta=4)
    assert np.abs(g.values).max() < 1e-6
    assert not g.meta["nonconverged"].any()


def test_candidate_symbol_case1_ex2_closed_form():
    # node with |theta| <= 1/4: both indicator symbols equal 1
    chi = lambda a: scalar_symbol(lambda x, t, a=a: (np.abs(t[:, 0]) <= a).astype(float))
    g = candidate_symbol(chi(0.5).tensor(A2), chi(0.25).tensor(B2), mx=1, mtheta=41)
    s2, s3 = math.sqrt(2), math.sqrt(3)
    C = np.array([[2 * s2 + 3 * s3, s2 + s3], [s2 + s3, 2 * s2 + s3]]) \
        / (6 ** 0.25 * math.sqrt(2 + math.sqrt(6)))
    # midpoint theta grid on 41 nodes has theta = 0 at index 20
    np.testing.assert_allclose(g.values[20], C, atol=1e-6)
    # outside [-1/2, 1/2] both vanish
    assert np.abs(g.values[0]).max() < 1e-6


def test_candidate_symbol_disjoint_supports_flagged():
    k = constant_symbol(np.diag([1.0, 0.0]))
    xi = constant_symbol(np.diag([0.0, 1.0]))
    g = candidate_symbol(k, xi, mx=2, mtheta=2)
    # G = sqrt(eps(1+eps)) I -> 0, but only like sqrt(eps), so it never settles
    assert np.abs(g.values).max() < 2e-4
    assert g.meta["nonconverged"].all()


def test_candidate_symbol_matches_mean_when_hpd():
    k = scalar_symbol(lambda x, t: 3 + np.cos(t[:, 0])).tensor(A2)
    xi = scalar_symbol(lambda x, t: 1 + x[:, 0]).tensor(B2)
    c = candidate_symbol(k, xi, mx=5, mtheta=6)
    g = sample_symbol(geometric_mean_symbol(k, xi), 5, 6)
    assert np.abs(c.values - g.values).max() <= 1e-6
    assert not c.meta["nonconverged"].any()


@pytest.mark.parametrize("d, r", [(1, 1), (1, 2), (2, 1)])
def test_grid_symbol_csv_roundtrip(tmp_path, d, r):
    base = scalar_symbol(lambda x, t: np.sin(3 * x[:, 0]) + np.cos(t[:, -1]) / 3, d=d)
    s = base.tensor(np.array([[1.0, 0.5j], [-0.5j, 2.0]])) if r == 2 else base
    g = sample_symbol(s, 3, 4)
    p = tmp_path / "g.csv"
    write_grid_symbol(g, p)
    header = p.read_text().splitlines()[0]
    assert header.endswith("block_row,block_col,re,im")
    h = read_grid_symbol(p)
    assert (h.d, h.r, h.mx, h.mtheta) == (g.d, g.r, g.mx, g.mtheta)
    assert np.array_equal(np.asarray(h.values, complex), np.asarray(g.values, complex))
