"""End-to-end numerical experiments on geometric means of GLT sequences and
on the Curie-Weiss model.

Each registered experiment knows how to build its matrices for a size ``n``,
which mean to take and which symbol to compare against.  Results are
returned as dataclasses and, when an output directory is given, written as
CSV files with deterministic formatting.
"""
from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import constants as C
from ._parallel import pmap
from .discretizations import (CWParams, curie_weiss_extremes, curie_weiss_full,
                              curie_weiss_restricted, curie_weiss_symbol, fd4_matrix,
                              fd4_matrix_2d)
from .errors import InvalidInputError, InvalidParameterError
from .geomean import KarcherConfig, alm_mean, karcher_mean
from .linalg import eigvals_hermitian, schatten_norm
from .spectral import (DecayTable, SpectralReport, compare_distribution,
                       decay_from_extremes, write_decay, write_overlay, write_reports)
from .structured import diagonal_sampling, toeplitz
from .symbols import (GridSymbol, SymbolFn, TrigPolynomial, candidate_symbol,
                      sample_symbol)

__all__ = [
    "ExperimentConfig", "ExperimentResult", "CWResult", "EXPERIMENTS",
    "run_gm_example", "run_cw_experiment", "experiment_matrices",
    "fourier_ramp", "fourier_indicator",
]


# ---------------------------------------------------------------------------
# closed-form Fourier coefficients
# ---------------------------------------------------------------------------

def fourier_ramp(n: int, reflect: bool = False) -> TrigPolynomial:
    """Coefficients ``|k| < n`` of ``f = theta`` on ``(0, pi]``, zero on ``[-pi, 0]``.

    ``f_0 = pi/4`` and ``f_k = (i pi (-1)^k / k + ((-1)^k - 1)/k^2) / (2 pi)``.
    ``reflect=True`` gives ``f(-theta)``, i.e. ``k -> -k``.
    """
    coeffs = {0: math.pi / 4}
    for k in range(1, n):
        s = (-1.0) ** k
        for kk in (k, -k):
            val = (1j * math.pi * s / kk + (s - 1) / kk ** 2) / (2 * math.pi)
            coeffs[-kk if reflect else kk] = val
    return TrigPolynomial.scalar(coeffs)


def fourier_indicator(n: int, a: float) -> TrigPolynomial:
    """Coefficients ``|k| < n`` of the indicator of ``[-a, a]``: ``sin(ka)/(pi k)``."""
    coeffs = {0: a / math.pi}
    for k in range(1, n):
        v = math.sin(k * a) / (math.pi * k)
        coeffs[k] = v
        coeffs[-k] = v
    return TrigPolynomial.scalar(coeffs)


def _trig(c: Dict[int, float]) -> TrigPolynomial:
    return TrigPolynomial.scalar(c)


_COS3P = _trig({0: 3.0, 1: 1.0, -1: 1.0})        # 3 + 2cos
_COS4M = _trig({0: 4.0, 1: -1.0, -1: -1.0})      # 4 - 2cos
_BIHARM = _trig({0: 6.0, 1: -4.0, -1: -4.0, 2: 1.0, -2: 1.0})   # (2 - 2cos)^2

_A2 = np.array([[2.0, 1.0], [1.0, 2.0]])
_B2 = np.array([[3.0, 1.0], [1.0, 1.0]])
_ONES2 = np.ones((2, 2))
_R1B = np.array([[1.0, 2.0], [2.0, 4.0]])
_A3 = np.array([[2.0, 0.0, 1.0], [0.0, 2.0, 1.0], [1.0, 1.0, 1.0]])
_B3 = np.array([[2.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 2.0]])


def _step(x):
    return (np.asarray(x) >= 0.5).astype(float)


def _hat_a(x):
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.5, 1 - 2 * x, 0.0)


def _hat_b(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m1 = (x > 1 / 3) & (x <= 0.5)
    m2 = (x > 0.5) & (x < 2 / 3)
    out[m1] = x[m1] - 1 / 3
    out[m2] = 2 / 3 - x[m2]
    return out


# ---------------------------------------------------------------------------
# matrix families
# ---------------------------------------------------------------------------

def _gm2_ex1(n):
    A = diagonal_sampling(n, _step) + n ** -4.0 * np.eye(n)
    return [A, toeplitz(n, _COS3P)]


def _gm2_ex2(n):
    A = diagonal_sampling(n, _step) + n ** -4.0 * np.eye(n)
    D = diagonal_sampling(n, lambda x: 1 - _step(x)) + n ** -4.0 * np.eye(n)
    return [A, D @ toeplitz(n, _COS3P) @ D]


def _ch4_ex1(n):
    return [toeplitz(n, _BIHARM), fd4_matrix(n, lambda x: x)]


def _ch4_ex2(n):
    f = _BIHARM
    return [toeplitz((n, n), TrigPolynomial.separable_sum(f, f)),
            fd4_matrix_2d(n, n, lambda x: x)]


def _ch4_ex3(n):
    D = diagonal_sampling(n, lambda x: x ** 2)
    return [toeplitz(n, _COS3P), D, D @ toeplitz(n, _COS4M) @ D]


def _ch4_ex4(n):
    A1 = toeplitz((n, n), TrigPolynomial.separable_sum(_COS3P, _COS3P))
    A2 = diagonal_sampling((n, n), lambda x, y: x ** 2 + y ** 2)
    Db = diagonal_sampling((n, n), lambda x, y: 1 / x + 1 / y)
    A3 = Db @ toeplitz((n, n), TrigPolynomial.separable_sum(_COS4M, _COS4M)) @ Db
    return [A1, A2, A3]


def _case1_ex1(n):
    I = np.eye(2 * n)
    A = toeplitz(n, fourier_ramp(n).tensor(_A2)) + n ** -3.0 * I
    B = toeplitz(n, fourier_ramp(n, reflect=True).tensor(_B2)) + n ** -3.0 * I
    return [A, B]


def _case1_ex2(n):
    I = np.eye(2 * n)
    A = toeplitz(n, fourier_indicator(n, 0.5).tensor(_A2)) + n ** -3.0 * I
    B = toeplitz(n, fourier_indicator(n, 0.25).tensor(_B2)) + n ** -3.0 * I
    return [A, B]


def _case2_ex1(n):
    I = np.eye(2 * n)
    f = _trig({0: 2.0, 1: -0.5, -1: -0.5})
    g = _trig({0: 3.0, 1: 0.5, -1: 0.5})
    A = toeplitz(n, f.tensor(_ONES2)) + n ** -2.0 * I
    Db = np.kron(diagonal_sampling(n, lambda x: 1 + x), np.eye(2))
    B = toeplitz(n, g.tensor(_R1B)) + n ** -2.0 * Db
    return [A, B]


def _case2_ex2(n):
    I = np.eye(3 * n)
    f = _trig({0: 2.0, 1: 0.5, -1: 0.5})
    g = _trig({0: 3.0, 1: 0.5, -1: 0.5})
    Da = np.kron(np.sqrt(diagonal_sampling(n, _hat_a)), np.eye(3))
    Db = np.kron(np.sqrt(diagonal_sampling(n, _hat_b)), np.eye(3))
    A = Da @ toeplitz(n, f.tensor(_A3)) @ Da + I / (5 * n)
    B = Db @ toeplitz(n, g.tensor(_B3)) @ Db + I / (5 * n)
    return [A, B]


# ---------------------------------------------------------------------------
# reference symbols
# ---------------------------------------------------------------------------

def _scalar(f, d=1, name=""):
    return SymbolFn(d, 1, f, name=name)


def _cos(t):
    return np.cos(t)


def _sym_gm2_ex1():
    return _scalar(lambda x, t: np.sqrt(_step(x[:, 0]) * (3 + 2 * _cos(t[:, 0]))), name="sqrt(a(3+2cos))")


def _sym_gm2_ex2():
    # a (1-a)^2 vanishes identically
    return _scalar(lambda x, t: np.sqrt(_step(x[:, 0]) * (1 - _step(x[:, 0])) ** 2
                                        * (3 + 2 * _cos(t[:, 0]))), name="0")


def _biharm(t):
    return (2 - 2 * np.cos(t)) ** 2


def _sym_ch4_ex1():
    return _scalar(lambda x, t: np.sqrt(x[:, 0]) * _biharm(t[:, 0]), name="sqrt(x)(2-2cos)^2")


def _sym_ch4_ex2():
    def f(x, t):
        k = _biharm(t[:, 0]) + _biharm(t[:, 1])
        xi = x[:, 0] * _biharm(t[:, 0]) + x[:, 1] * _biharm(t[:, 1])
        return np.sqrt(k * xi)
    return _scalar(f, 2, "sqrt(kappa xi)")


def _sym_ch4_ex3():
    def f(x, t):
        k1 = 3 + 2 * _cos(t[:, 0])
        k2 = x[:, 0] ** 2
        k3 = x[:, 0] ** 4 * (4 - 2 * _cos(t[:, 0]))
        return np.cbrt(k1 * k2 * k3)
    return _scalar(f, 1, "conjectured (k1 k2 k3)^(1/3)")


def _sym_ch4_ex4():
    def f(x, t):
        k1 = 6 + 2 * _cos(t[:, 0]) + 2 * _cos(t[:, 1])
        k2 = x[:, 0] ** 2 + x[:, 1] ** 2
        b = 1 / x[:, 0] + 1 / x[:, 1]
        k3 = b ** 2 * (8 - 2 * _cos(t[:, 0]) - 2 * _cos(t[:, 1]))
        return np.cbrt(k1 * k2 * k3)
    return _scalar(f, 2, "conjectured (k1 k2 k3)^(1/3)")


def _ramp(t):
    return np.where(t > 0, t, 0.0)


def _pair_case1_ex1():
    k = _scalar(lambda x, t: _ramp(t[:, 0])).tensor(_A2)
    xi = _scalar(lambda x, t: _ramp(-t[:, 0])).tensor(_B2)
    return k, xi


def _pair_case1_ex2():
    k = _scalar(lambda x, t: (np.abs(t[:, 0]) <= 0.5).astype(float)).tensor(_A2)
    xi = _scalar(lambda x, t: (np.abs(t[:, 0]) <= 0.25).astype(float)).tensor(_B2)
    return k, xi


def _pair_case2_ex1():
    k = _scalar(lambda x, t: 2 - _cos(t[:, 0])).tensor(_ONES2)
    xi = _scalar(lambda x, t: 3 + _cos(t[:, 0])).tensor(_R1B)
    return k, xi


def _pair_case2_ex2():
    k = _scalar(lambda x, t: _hat_a(x[:, 0]) * (2 + _cos(t[:, 0]))).tensor(_A3)
    xi = _scalar(lambda x, t: _hat_b(x[:, 0]) * (3 + _cos(t[:, 0]))).tensor(_B3)
    return k, xi


@dataclass(frozen=True)
class _Experiment:
    build: Callable[[int], List[np.ndarray]]
    mean: str                       # "alm" | "karcher"
    d: int
    default_sizes: tuple
    symbol: Optional[Callable[[], SymbolFn]] = None
    pair: Optional[Callable] = None  # symbols (kappa, xi) for the candidate limit
    target_fraction: Optional[float] = None
    symbol_label: str = "symbol"


EXPERIMENTS: Dict[str, _Experiment] = {
    "gm2_ex1": _Experiment(_gm2_ex1, "alm", 1, (40, 80, 160, 320), _sym_gm2_ex1),
    "gm2_ex2": _Experiment(_gm2_ex2, "alm", 1, (40, 80, 160, 320), _sym_gm2_ex2),
    "ch4_ex1_1d": _Experiment(_ch4_ex1, "alm", 1, (40, 80, 160, 320), _sym_ch4_ex1),
    "ch4_ex2_2d": _Experiment(_ch4_ex2, "alm", 2, (10, 20, 40), _sym_ch4_ex2),
    "ch4_ex3_1d": _Experiment(_ch4_ex3, "karcher", 1, (40, 80, 160, 320), _sym_ch4_ex3,
                              symbol_label="conjectured symbol"),
    "ch4_ex4_2d": _Experiment(_ch4_ex4, "karcher", 2, (10, 20, 40), _sym_ch4_ex4,
                              symbol_label="conjectured symbol"),
    "case1_ex1": _Experiment(_case1_ex1, "alm", 1, (40, 80, 160, 320), pair=_pair_case1_ex1,
                             target_fraction=1.0, symbol_label="candidate symbol"),
    "case1_ex2": _Experiment(_case1_ex2, "alm", 1, (40, 80, 160, 320), pair=_pair_case1_ex2,
                             target_fraction=1 - 1 / (4 * math.pi),
                             symbol_label="candidate symbol"),
    "case2_ex1": _Experiment(_case2_ex1, "alm", 1, (40, 80, 160, 320), pair=_pair_case2_ex1,
                             target_fraction=1.0, symbol_label="candidate symbol"),
    "case2_ex2": _Experiment(_case2_ex2, "alm", 1, (40, 80, 160, 320), pair=_pair_case2_ex2,
                             target_fraction=17 / 18, symbol_label="candidate symbol"),
}


def experiment_matrices(exp_id: str, n: int) -> List[np.ndarray]:
    """The HPD matrices whose mean the experiment studies, at size ``n``."""
    return _lookup(exp_id).build(n)


def _lookup(exp_id):
    try:
        return EXPERIMENTS[exp_id]
    except KeyError:
        raise InvalidInputError(
            f"unknown experiment {exp_id!r}; known: {', '.join(sorted(EXPERIMENTS))}") from None


# ---------------------------------------------------------------------------
# configuration and results
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """Parameters of one experiment run.

    Attributes
    ----------
    id : str
    sizes : sequence of int, optional
        Defaults to the experiment's own list (2D ids use ``n x n`` grids).
    threshold : float
        Zero-cluster threshold for the below-threshold fraction.
    log_base : {"base2", "natural", "base10"}
    eps_sequence, stab_tol : candidate-symbol settings
    karcher : KarcherConfig
    grid : (mx, mtheta), optional
        Symbol grid sizes; default about 2000 nodes.
    outdir : str, optional
    params : dict
        Extra, experiment-specific values (kept for the record).
    """
    id: str
    sizes: Optional[Sequence[int]] = None
    threshold: float = C.DEFAULT_THRESHOLD
    log_base: str = "base2"
    eps_sequence: Sequence[float] = C.DEFAULT_EPS_SEQUENCE
    stab_tol: float = C.DEFAULT_STAB_TOL
    karcher: KarcherConfig = field(default_factory=KarcherConfig)
    grid: Optional[tuple] = None
    outdir: Optional[str] = None
    trim: int = C.DEFAULT_TRIM
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        _lookup(self.id)
        if self.sizes is not None:
            self.sizes = tuple(int(s) for s in self.sizes)
            if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])) or min(self.sizes) < 1:
                raise InvalidParameterError("sizes must be positive and strictly increasing")


@dataclass
class ExperimentResult:
    """Per-size reports, extremal tables and the mean's diagnostics."""
    id: str
    sizes: tuple
    reports: List[SpectralReport]
    decay_min: DecayTable
    decay_max: DecayTable
    condition_numbers: np.ndarray
    symbol_label: str
    karcher_converged: List[Optional[bool]]
    karcher_iterations: List[Optional[int]]
    target_fraction: Optional[float]
    symbol_meta: dict = field(default_factory=dict)
    secondary: List[dict] = field(default_factory=list)
    files: List[str] = field(default_factory=list)

    @property
    def fractions(self) -> np.ndarray:
        return np.array([r.below_threshold_fraction for r in self.reports])


def _reference_symbol(exp: _Experiment, cfg: ExperimentConfig):
    mx, mt = cfg.grid if cfg.grid else (None, None)
    if exp.pair is not None:
        k, xi = exp.pair()
        return candidate_symbol(k, xi, cfg.eps_sequence, cfg.stab_tol, mx, mt)
    return sample_symbol(exp.symbol(), mx, mt)


def _mean_eigs(exp: _Experiment, n: int, kcfg: KarcherConfig):
    mats = exp.build(n)
    if exp.mean == "alm":
        G = alm_mean(mats[0], mats[1])
        return eigvals_hermitian(G, check=False), None, None
    res = karcher_mean(mats, kcfg)
    return eigvals_hermitian(res.mean, check=False), res.converged, res.iterations


def _size_label(exp, n):
    return (n, n) if exp.d == 2 else n


def run_gm_example(exp_id: str, cfg: ExperimentConfig | None = None) -> ExperimentResult:
    """Run one registered geometric-mean experiment.

    For each size the mean (ALM for pairs, Karcher for triples) is formed,
    its spectrum compared with the reference symbol, and minimal / maximal
    eigenvalue tables assembled (``tau_j = lambda_min``, reference 0).

    Returns
    -------
    ExperimentResult
        Also written to ``cfg.outdir`` when set: ``reports.csv``,
        ``decay_min.csv``, ``extremes.csv`` and ``overlay_<n>.csv``.
    """
    exp = _lookup(exp_id)
    cfg = cfg or ExperimentConfig(exp_id)
    if cfg.id != exp_id:
        raise InvalidInputError("config id does not match experiment id")
    sizes = tuple(cfg.sizes) if cfg.sizes else exp.default_sizes
    g = _reference_symbol(exp, cfg)
    out = pmap(lambda n: _mean_eigs(exp, n, cfg.karcher), sizes)
    labels = [_size_label(exp, n) for n in sizes]
    reports = [compare_distribution(eigenvalues=lam, g=g, threshold=cfg.threshold,
                                    n=lab, trim=cfg.trim, label=exp.symbol_label)
               for (lam, _, _), lab in zip(out, labels)]
    lmin = [r.lambda_min for r in reports]
    lmax = [r.lambda_max for r in reports]
    dmin = decay_from_extremes(labels, lmin, 0.0, "min", cfg.log_base)
    main_top = float(np.max(np.linalg.eigvalsh(g.values)))
    dmax = decay_from_extremes(labels, lmax, main_top, "max", cfg.log_base)
    cond = np.array([b / a if a > 0 else np.inf for a, b in zip(lmin, lmax)])
    secondary = []
    for r in reports:
        above = r.sorted_eigenvalues[r.sorted_eigenvalues > main_top + cfg.threshold]
        secondary.append({"n": r.n, "count_above_cluster": int(above.size),
                          "max": float(above.max()) if above.size else float("nan")})
    res = ExperimentResult(
        id=exp_id, sizes=tuple(labels), reports=reports, decay_min=dmin, decay_max=dmax,
        condition_numbers=cond, symbol_label=exp.symbol_label,
        karcher_converged=[o[1] for o in out], karcher_iterations=[o[2] for o in out],
        target_fraction=exp.target_fraction,
        symbol_meta={k: v for k, v in g.meta.items() if k == "nonconverged"},
        secondary=secondary)
    if cfg.outdir:
        res.files = _write_experiment(res, cfg.outdir)
    return res


def _atomic_write(path, writer, obj):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    os.close(fd)
    try:
        writer(obj, tmp)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def _nlabel(n):
    return "x".join(str(v) for v in n) if isinstance(n, tuple) else str(n)


def _write_extremes(res, path):
    import csv
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "lambda_min", "lambda_max", "cond", "frac_below", "karcher_converged"])
        for r, c, kc in zip(res.reports, res.condition_numbers, res.karcher_converged):
            w.writerow([_nlabel(r.n), repr(r.lambda_min), repr(r.lambda_max), repr(float(c)),
                        repr(r.below_threshold_fraction), "" if kc is None else int(kc)])


def _write_experiment(res: ExperimentResult, outdir) -> List[str]:
    os.makedirs(outdir, exist_ok=True)
    files = []

    def put(name, writer, obj):
        p = os.path.join(outdir, name)
        _atomic_write(p, writer, obj)
        files.append(p)

    put("reports.csv", write_reports, res.reports)
    put("decay_min.csv", write_decay, res.decay_min)
    put("decay_max.csv", write_decay, res.decay_max)
    put("extremes.csv", _write_extremes, res)
    for r in res.reports:
        put(f"overlay_{_nlabel(r.n)}.csv", write_overlay, r)
    return files


# ---------------------------------------------------------------------------
# Curie-Weiss
# ---------------------------------------------------------------------------

@dataclass
class CWResult:
    """Restricted-model reports and extremal tables, plus the optional
    full-model zero-distribution sweep."""
    gamma: float
    B: float
    sizes: tuple                 # matrix orders N + 1
    reports: List[SpectralReport]
    decay_min: DecayTable
    decay_max: DecayTable
    symbol_min: float
    symbol_max: float
    full: List[dict] = field(default_factory=list)
    files: List[str] = field(default_factory=list)


def run_cw_experiment(gamma: float = 1.0, B: float = 1.0, sizes=(40, 80, 160, 320),
                      log_base: str = "base10", reference: str = "exact",
                      normalization: str = "size", full_sizes: Sequence[int] = (),
                      full_threshold: float = 0.25, threshold: float = C.DEFAULT_THRESHOLD,
                      grid=None, outdir: str | None = None,
                      trim: int = C.DEFAULT_TRIM) -> CWResult:
    """Restricted Curie-Weiss spectra against the symbol, with extremal tables.

    Parameters
    ----------
    sizes : sequence of int
        Matrix orders ``N + 1``.
    log_base : {"base10", "natural", "base2"}
        Base of the exponents ``alpha_j = log(tau_j / tau_{j+1})``.
    reference : {"exact", "grid"}
        Symbol extremes ``m, M`` from the closed form or from the sampled
        grid.
    full_sizes : sequence of int
        Spin counts ``N`` for the dense full-model sweep (fraction of
        ``|lambda| <= full_threshold`` and ``||H||_F / 2^{N/2}``).
    """
    if not gamma > 0:
        raise InvalidParameterError("gamma must be positive")
    sizes = tuple(int(s) for s in sizes)
    if min(sizes) < 2:
        raise InvalidParameterError("matrix orders must be >= 2")
    mx, mt = grid if grid else (None, None)
    g = sample_symbol(curie_weiss_symbol(gamma, B), mx, mt)
    if reference == "exact":
        m, M = curie_weiss_extremes(gamma, B)
    elif reference == "grid":
        vals = g.values[:, 0, 0].real
        m, M = float(vals.min()), float(vals.max())
    else:
        raise InvalidParameterError("reference must be 'exact' or 'grid'")

    def one(s):
        return eigvals_hermitian(curie_weiss_restricted(CWParams(gamma, B, s - 1), normalization),
                                 check=False)

    eigs = pmap(one, sizes)
    reports = [compare_distribution(eigenvalues=lam, g=g, threshold=threshold, n=s, trim=trim,
                                    label="curie_weiss")
               for lam, s in zip(eigs, sizes)]
    dmin = decay_from_extremes(sizes, [r.lambda_min for r in reports], m, "min", log_base)
    dmax = decay_from_extremes(sizes, [r.lambda_max for r in reports], M, "max", log_base)
    full = []
    for N in full_sizes:
        H = curie_weiss_full(CWParams(gamma, B, N))
        lam = eigvals_hermitian(H, check=False)
        full.append({"N": int(N),
                     "fraction": float(np.count_nonzero(np.abs(lam) <= full_threshold) / lam.size),
                     "frobenius_normalized": float(np.linalg.norm(H) / 2 ** (N / 2)),
                     "spectral_norm": float(np.max(np.abs(lam)))})
    res = CWResult(gamma, B, sizes, reports, dmin, dmax, float(m), float(M), full)
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        files = []
        for name, writer, obj in (("reports.csv", write_reports, reports),
                                  ("decay_min.csv", write_decay, dmin),
                                  ("decay_max.csv", write_decay, dmax)):
            p = os.path.join(outdir, name)
            _atomic_write(p, writer, obj)
            files.append(p)
        for r in reports:
            p = os.path.join(outdir, f"overlay_{r.n}.csv")
            _atomic_write(p, write_overlay, r)
            files.append(p)
        if full:
            p = os.path.join(outdir, "full_model.csv")
            _atomic_write(p, _write_full, full)
            files.append(p)
        res.files = files
    return res


def _write_full(rows, path):
    import csv
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "fraction", "frobenius_normalized", "spectral_norm"])
        for r in rows:
            w.writerow([r["N"], repr(r["fraction"]), repr(r["frobenius_normalized"]),
                        repr(r["spectral_norm"])])
