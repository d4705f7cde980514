"""Matrix-valued symbols on ``[0,1]^d x [-pi,pi]^d``.

A :class:`SymbolFn` is a batched closure ``(x, theta) -> blocks`` with
``x`` and ``theta`` of shape ``(m, d)`` and blocks of shape ``(m, r, r)``.
:class:`TrigPolynomial` stores finitely many Fourier coefficient blocks and
is what the Toeplitz builders consume.  :class:`GridSymbol` holds samples on
a midpoint tensor grid.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from . import constants as C
from .errors import DomainError, InvalidInputError, InvalidParameterError
from .geomean import alm_mean_batch

__all__ = [
    "TrigPolynomial", "SymbolFn", "GridSymbol", "eval_trig", "sample_symbol",
    "rearrange", "geometric_mean_symbol", "candidate_symbol", "constant_symbol",
    "scalar_symbol", "default_grid", "write_grid_symbol", "read_grid_symbol",
]

Index = Tuple[int, ...]


def _key(k, d):
    if isinstance(k, (int, np.integer)):
        k = (int(k),)
    k = tuple(int(v) for v in k)
    if len(k) != d:
        raise InvalidInputError(f"multi-index {k} does not have length {d}")
    return k


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite Fourier series ``sum_k F_k exp(i k.theta)`` with ``r x r`` blocks.

    Parameters
    ----------
    coeffs : mapping
        Multi-index (int for ``d = 1``) to scalar or ``r x r`` block.
    d : int
        Number of frequency variables.

    Attributes
    ----------
    r : int
        Block order, inferred from the coefficients.
    hermitian : bool
        True iff ``F_{-k} = F_k*`` for every stored ``k``; then every
        evaluation is Hermitian.
    """
    coeffs: Mapping
    d: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameterError("d must be >= 1")
        norm: Dict[Index, np.ndarray] = {}
        r = None
        for k, F in self.coeffs.items():
            F = np.atleast_2d(np.asarray(F, dtype=np.complex128))
            if F.shape[0] != F.shape[1]:
                raise InvalidInputError("coefficient blocks must be square")
            if r is None:
                r = F.shape[0]
            elif F.shape[0] != r:
                raise InvalidInputError("coefficient blocks differ in size")
            kk = _key(k, self.d)
            norm[kk] = norm.get(kk, 0) + F
        if r is None:
            r = 1
        object.__setattr__(self, "coeffs", norm)
        object.__setattr__(self, "r", r)

    # -- constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, coeffs: Mapping, d: int = 1) -> "TrigPolynomial":
        """Scalar polynomial from ``{k: value}``."""
        return cls({k: np.array([[v]]) for k, v in coeffs.items()}, d)

    def tensor(self, A) -> "TrigPolynomial":
        """``p(theta) (x) A`` for a scalar polynomial ``p``."""
        if self.r != 1:
            raise InvalidInputError("tensor() expects a scalar polynomial")
        A = np.atleast_2d(np.asarray(A, dtype=np.complex128))
        return TrigPolynomial({k: F[0, 0] * A for k, F in self.coeffs.items()}, self.d)

    @staticmethod
    def separable_sum(*parts: "TrigPolynomial") -> "TrigPolynomial":
        """``p_1(theta_1) + ... + p_d(theta_d)`` from univariate pieces."""
        d = len(parts)
        out: Dict[Index, np.ndarray] = {}
        for lvl, p in enumerate(parts):
            if p.d != 1:
                raise InvalidInputError("separable_sum expects univariate parts")
            for (k,), F in p.coeffs.items():
                key = tuple(k if i == lvl else 0 for i in range(d))
                out[key] = out.get(key, 0) + F
        return TrigPolynomial(out, d)

    @staticmethod
    def separable_product(*parts: "TrigPolynomial") -> "TrigPolynomial":
        """``p_1(theta_1) * ... * p_d(theta_d)`` (blocks multiply by Kronecker)."""
        out: Dict[Index, np.ndarray] = {}
        for combo in itertools.product(*[list(p.coeffs.items()) for p in parts]):
            key = tuple(k[0] for k, _ in combo)
            block = combo[0][1]
            for _, F in combo[1:]:
                block = np.kron(block, F)
            out[key] = out.get(key, 0) + block
        return TrigPolynomial(out, len(parts))

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if other.d != self.d or other.r != self.r:
            raise InvalidInputError("incompatible polynomials")
        out = dict(self.coeffs)
        for k, F in other.coeffs.items():
            out[k] = out.get(k, 0) + F
        return TrigPolynomial(out, self.d)

    def __mul__(self, s) -> "TrigPolynomial":
        return TrigPolynomial({k: s * F for k, F in self.coeffs.items()}, self.d)

    __rmul__ = __mul__

    # -- queries ----------------------------------------------------------
    @property
    def hermitian(self) -> bool:
        for k, F in self.coeffs.items():
            mk = tuple(-v for v in k)
            G = self.coeffs.get(mk, np.zeros_like(F))
            if not np.array_equal(G, F.conj().T):
                return False
        return True

    def max_degree(self) -> Index:
        if not self.coeffs:
            return (0,) * self.d
        K = np.array(list(self.coeffs.keys()))
        return tuple(int(v) for v in np.max(np.abs(K), axis=0))

    def eval_many(self, theta) -> np.ndarray:
        """Evaluate at ``theta`` of shape ``(m, d)``; returns ``(m, r, r)``."""
        th = np.atleast_2d(np.asarray(theta, dtype=float))
        if th.shape[1] != self.d:
            th = th.reshape(-1, self.d)
        out = np.zeros((th.shape[0], self.r, self.r), dtype=np.complex128)
        for k, F in self.coeffs.items():
            ph = np.exp(1j * (th @ np.asarray(k, dtype=float)))
            out += ph[:, None, None] * F[None]
        return out

    def __call__(self, theta) -> np.ndarray:
        return eval_trig(self, theta)

    def as_symbol(self, name: str = "") -> "SymbolFn":
        """View as an x-independent :class:`SymbolFn`."""
        return SymbolFn(self.d, self.r, lambda x, th: self.eval_many(th),
                        name=name or "trig", trig=self)


def eval_trig(p: TrigPolynomial, theta) -> np.ndarray:
    """``sum_k F_k exp(i k.theta)`` at one point; returns an ``r x r`` block."""
    th = np.asarray(theta, dtype=float).reshape(1, p.d)
    return p.eval_many(th)[0]


@dataclass(frozen=True)
class SymbolFn:
    """Batched matrix-valued symbol.

    Attributes
    ----------
    d, r : int
        Level count and block order.
    func : callable
        ``func(x, theta)`` with arrays of shape ``(m, d)``; returns an array
        of shape ``(m, r, r)`` (or ``(m,)`` when ``r == 1``).
    name : str
    trig : TrigPolynomial, optional
        Fourier structure when the symbol is a trigonometric polynomial.
    """
    d: int
    r: int
    func: Callable
    name: str = ""
    trig: TrigPolynomial | None = None

    def eval(self, x, theta) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, self.d)
        th = np.asarray(theta, dtype=float).reshape(-1, self.d)
        v = np.asarray(self.func(x, th))
        m = x.shape[0]
        if v.ndim == 1 or (self.r == 1 and v.shape == (m,)):
            v = v.reshape(m, 1, 1)
        if v.shape != (m, self.r, self.r):
            v = np.broadcast_to(v, (m, self.r, self.r))
        return v

    def __call__(self, x, theta) -> np.ndarray:
        """Single point evaluation returning an ``r x r`` block."""
        return self.eval(np.reshape(x, (1, self.d)), np.reshape(theta, (1, self.d)))[0]

    def __add__(self, other: "SymbolFn") -> "SymbolFn":
        return SymbolFn(self.d, self.r, lambda x, t: self.eval(x, t) + other.eval(x, t),
                        name=f"({self.name}+{other.name})")

    def scaled(self, s: float) -> "SymbolFn":
        return SymbolFn(self.d, self.r, lambda x, t: s * self.eval(x, t),
                        name=f"{s}*{self.name}")

    def tensor(self, A) -> "SymbolFn":
        """``kappa (x) A`` for scalar ``kappa``."""
        A = np.atleast_2d(np.asarray(A))
        if self.r != 1:
            raise InvalidInputError("tensor() expects a scalar symbol")
        return SymbolFn(self.d, A.shape[0],
                        lambda x, t: self.eval(x, t)[:, 0, 0][:, None, None] * A[None],
                        name=f"{self.name}(x)A")


def scalar_symbol(f: Callable, d: int = 1, name: str = "") -> SymbolFn:
    """Wrap a vectorized scalar ``f(x, theta) -> (m,)``."""
    return SymbolFn(d, 1, f, name=name)


def constant_symbol(c, d: int = 1) -> SymbolFn:
    c = np.atleast_2d(np.asarray(c))
    return SymbolFn(d, c.shape[0], lambda x, t: np.broadcast_to(c, (x.shape[0],) + c.shape),
                    name="const")


# ---------------------------------------------------------------------------
# sampled symbols
# ---------------------------------------------------------------------------

def _grid_points(mx: Sequence[int], mt: Sequence[int]):
    xs = [(np.arange(m) + 0.5) / m for m in mx]
    ts = [-np.pi + (np.arange(m) + 0.5) * 2.0 * np.pi / m for m in mt]
    mesh = np.meshgrid(*(xs + ts), indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=1)
    d = len(mx)
    return pts[:, :d], pts[:, d:]


@dataclass(frozen=True)
class GridSymbol:
    """Symbol samples on a midpoint tensor grid.

    Nodes are ordered lexicographically over ``(x_1..x_d, theta_1..theta_d)``.

    Attributes
    ----------
    d, r : int
    mx, mtheta : tuple of int
        Grid sizes per spatial / frequency dimension.
    values : ndarray, shape (nodes, r, r)
    meta : dict
        Free-form metadata, e.g. ``"nonconverged"`` mask from
        :func:`candidate_symbol`.
    """
    d: int
    r: int
    mx: Tuple[int, ...]
    mtheta: Tuple[int, ...]
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        nodes = int(np.prod(self.mx)) * int(np.prod(self.mtheta))
        if self.values.shape != (nodes, self.r, self.r):
            raise InvalidInputError(
                f"values shape {self.values.shape} does not match grid ({nodes}, {self.r}, {self.r})")

    @property
    def node_count(self) -> int:
        return self.values.shape[0]

    def nodes(self):
        """Return ``(x, theta)``, each of shape ``(nodes, d)``."""
        return _grid_points(self.mx, self.mtheta)


def default_grid(d: int, total: int = 2000):
    """Per-dimension sizes with roughly ``total`` nodes.

    ``d = 1`` gives the 50 x 40 grid; higher ``d`` split evenly.
    """
    if d == 1:
        return (C.DEFAULT_GRID_X,), (C.DEFAULT_GRID_THETA,)
    m = max(1, int(round(total ** (1.0 / (2 * d)))))
    return (m,) * d, (m,) * d


def sample_symbol(s: SymbolFn, mx=None, mtheta=None) -> GridSymbol:
    """Sample ``s`` on ``x_j = (j+1/2)/M_x``, ``theta_i = -pi + (i+1/2) 2pi/M_theta``.

    Parameters
    ----------
    s : SymbolFn
    mx, mtheta : int or sequence of int, optional
        Grid sizes; default about 2000 nodes in total.
    """
    dmx, dmt = default_grid(s.d)
    mx = dmx if mx is None else mx
    mtheta = dmt if mtheta is None else mtheta
    mx = (int(mx),) * s.d if np.isscalar(mx) else tuple(int(v) for v in mx)
    mtheta = (int(mtheta),) * s.d if np.isscalar(mtheta) else tuple(int(v) for v in mtheta)
    if len(mx) != s.d or len(mtheta) != s.d or min(mx + mtheta) < 1:
        raise InvalidParameterError("grid sizes must be >= 1, one per dimension")
    x, th = _grid_points(mx, mtheta)
    vals = np.array(s.eval(x, th))
    return GridSymbol(s.d, s.r, mx, mtheta, vals)


def rearrange(g: GridSymbol) -> np.ndarray:
    """All block eigenvalues of ``g`` merged and sorted nondecreasingly."""
    V = g.values
    if g.r == 1:
        lam = np.real(V[:, 0, 0])
    else:
        lam = np.linalg.eigvalsh(0.5 * (V + np.conj(np.swapaxes(V, -1, -2)))).ravel()
    return np.sort(lam, kind="stable")


# ---------------------------------------------------------------------------
# geometric means of symbols
# ---------------------------------------------------------------------------

def _check_pair(k: SymbolFn, xi: SymbolFn):
    if k.d != xi.d or k.r != xi.r:
        raise InvalidInputError("symbols must share d and r")


def geometric_mean_symbol(kappa: SymbolFn, xi: SymbolFn) -> SymbolFn:
    """Pointwise ALM mean ``G(kappa, xi)``.

    Evaluation raises :class:`DomainError` at points where ``kappa`` is not
    positive definite; use :func:`candidate_symbol` there.
    """
    _check_pair(kappa, xi)
    r = kappa.r

    def func(x, th):
        K = kappa.eval(x, th)
        X = xi.eval(x, th)
        if r == 1:
            k = np.real(K[:, 0, 0])
            if k.size and not np.min(k) > 0:
                raise DomainError("kappa vanishes at an evaluation point",
                                  lambda_min=float(np.min(k)))
            return np.sqrt(k * np.real(X[:, 0, 0]))
        return alm_mean_batch(K, X)

    return SymbolFn(kappa.d, r, func, name=f"G({kappa.name},{xi.name})")


def karcher_symbol_scalar(*symbols: SymbolFn) -> SymbolFn:
    """``(kappa_1 ... kappa_k)^{1/k}`` for scalar symbols."""
    d = symbols[0].d
    k = len(symbols)

    def func(x, th):
        prod = np.ones(x.shape[0])
        for s in symbols:
            prod = prod * np.real(s.eval(x, th)[:, 0, 0])
        return np.power(np.clip(prod, 0.0, None), 1.0 / k)

    return SymbolFn(d, 1, func, name="karcher")


def candidate_symbol(kappa: SymbolFn, xi: SymbolFn,
                     eps_sequence: Iterable[float] = C.DEFAULT_EPS_SEQUENCE,
                     stab_tol: float = C.DEFAULT_STAB_TOL,
                     mx=None, mtheta=None) -> GridSymbol:
    """Pointwise limit of ``G(kappa + eps I, xi + eps I)`` as ``eps -> 0``.

    Evaluates along ``eps_sequence`` and, per node, keeps the first iterate
    whose max-norm distance from its predecessor is below ``stab_tol``.
    Nodes that never stabilize keep the last iterate and are flagged in
    ``meta["nonconverged"]``.
    """
    _check_pair(kappa, xi)
    eps = [float(e) for e in eps_sequence]
    if not eps or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise InvalidParameterError("eps_sequence must be positive and strictly decreasing")
    K = sample_symbol(kappa, mx, mtheta)
    Xi = sample_symbol(xi, K.mx, K.mtheta)
    r = kappa.r
    eye = np.eye(r)[None]
    Kv = 0.5 * (K.values + np.conj(np.swapaxes(K.values, -1, -2)))
    Xv = 0.5 * (Xi.values + np.conj(np.swapaxes(Xi.values, -1, -2)))
    m = Kv.shape[0]
    value = None
    done = np.zeros(m, dtype=bool)
    prev = None
    eps_used = np.full(m, np.nan)
    for e in eps:
        cur = alm_mean_batch(Kv + e * eye, Xv + e * eye)
        if value is None:
            value = cur.copy()
        else:
            diff = np.max(np.abs(cur - prev).reshape(m, -1), axis=1)
            newly = (~done) & (diff < stab_tol)
            value[newly] = cur[newly]
            eps_used[newly] = e
            done |= newly
            value[~done] = cur[~done]
        prev = cur
    if np.all(np.abs(value.imag) == 0):
        value = value.real
    meta = {"nonconverged": ~done, "eps_used": eps_used, "eps_sequence": tuple(eps),
            "stab_tol": stab_tol}
    return GridSymbol(K.d, r, K.mx, K.mtheta, value, meta)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _header(d):
    if d == 1:
        return ["x", "theta", "block_row", "block_col", "re", "im"]
    return ([f"x{i + 1}" for i in range(d)] + [f"theta{i + 1}" for i in range(d)]
            + ["block_row", "block_col", "re", "im"])


def write_grid_symbol(g: GridSymbol, path) -> None:
    """Write one CSV line per block entry (shortest round-trip floats)."""
    x, th = g.nodes()
    V = np.asarray(g.values, dtype=np.complex128)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_header(g.d))
        for i in range(g.node_count):
            coords = [repr(float(v)) for v in x[i]] + [repr(float(v)) for v in th[i]]
            for a in range(g.r):
                for b in range(g.r):
                    z = V[i, a, b]
                    w.writerow(coords + [a, b, repr(float(z.real)), repr(float(z.imag))])


def read_grid_symbol(path) -> GridSymbol:
    """Inverse of :func:`write_grid_symbol` (grid sizes recovered from nodes)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    head, body = rows[0], rows[1:]
    if head[-4:] != ["block_row", "block_col", "re", "im"]:
        raise InvalidInputError("not a GridSymbol CSV")
    d = (len(head) - 4) // 2
    arr = np.array([[float(v) for v in row] for row in body])
    r = int(arr[:, 2 * d].max()) + 1
    coords = arr[::r * r, :2 * d]
    mx = tuple(len(np.unique(coords[:, i])) for i in range(d))
    mt = tuple(len(np.unique(coords[:, d + i])) for i in range(d))
    vals = (arr[:, -2] + 1j * arr[:, -1]).reshape(-1, r, r)
    if np.all(vals.imag == 0):
        vals = vals.real
    return GridSymbol(d, r, mx, mt, vals)
