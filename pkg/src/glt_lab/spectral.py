"""Spectral distribution checks for matrix-sequences.

Sorted eigenvalues are compared against the monotone rearrangement of a
sampled symbol; extremal eigenvalues are tracked across sizes to estimate
decay exponents.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np

from . import constants as C
from ._parallel import pmap
from .errors import InvalidInputError, InvalidParameterError
from .linalg import check_hermitian, eigvals_hermitian, hermitian_part, schatten_norm
from .symbols import GridSymbol, rearrange

__all__ = [
    "SequenceSpec", "SpectralReport", "DecayRow", "DecayTable", "ZeroDistributionResult",
    "PerturbationReport", "compare_distribution", "symbol_quantiles",
    "zero_distribution_test", "extremal_decay", "decay_from_extremes",
    "small_norm_perturbation_check", "write_reports", "write_overlay", "write_decay",
    "LOG_BASES",
]

LOG_BASES = {"base2": 2.0, "natural": math.e, "base10": 10.0}


def _size_key(n):
    return int(np.prod(n))


@dataclass
class SequenceSpec:
    """A rule ``n -> A_n`` evaluated on an increasing list of sizes.

    Attributes
    ----------
    builder : callable
        ``builder(n)`` returns the dense Hermitian matrix ``A_n``.
    sizes : sequence
        Strictly increasing sizes (ints or multi-indices, compared by the
        product of components).
    name : str
    params : dict
    """
    builder: Callable
    sizes: Sequence
    name: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        keys = [_size_key(n) for n in self.sizes]
        if not keys:
            raise InvalidInputError("SequenceSpec needs at least one size")
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise InvalidInputError("sizes must be strictly increasing")

    def build(self, n):
        return self.builder(n)


@dataclass
class SpectralReport:
    """Eigenvalues of one matrix set against a sampled symbol.

    ``trimmed_sup_distance`` ignores the ``trim`` largest pointwise gaps
    (outliers are expected in finite sections).
    """
    n: object
    sorted_eigenvalues: np.ndarray
    symbol_quantiles: np.ndarray
    sup_distance: float
    l1_distance: float
    lambda_min: float
    lambda_max: float
    below_threshold_fraction: float
    threshold: float
    trimmed_sup_distance: float = float("nan")
    trim: int = C.DEFAULT_TRIM
    label: str = ""


def symbol_quantiles(g_or_values, length: int) -> np.ndarray:
    """Nearest-rank resampling ``q_i = Q(ceil(i * len(Q) / length))``, ``i = 1..length``."""
    Q = rearrange(g_or_values) if isinstance(g_or_values, GridSymbol) \
        else np.sort(np.asarray(g_or_values, dtype=float))
    L = Q.shape[0]
    if L == 0:
        raise InvalidInputError("empty symbol sample")
    i = np.arange(1, length + 1)
    # integer form of ceil(i * L / length) avoids rounding at exact ratios
    idx = -(-(i * L) // length)
    return Q[np.clip(idx, 1, L) - 1]


def compare_distribution(A=None, g: GridSymbol | np.ndarray | None = None,
                         threshold: float = C.DEFAULT_THRESHOLD, *,
                         eigenvalues=None, n=None, trim: int = C.DEFAULT_TRIM,
                         label: str = "") -> SpectralReport:
    """Compare the spectrum of Hermitian ``A`` with the rearranged symbol ``g``.

    Parameters
    ----------
    A : array_like, optional
        Hermitian matrix; may be omitted when ``eigenvalues`` is given.
    g : GridSymbol or array_like
        Sampled symbol (or already-rearranged symbol values).
    threshold : float
        Eigenvalues with ``|lambda| <= threshold`` count as clustered at 0.
    eigenvalues : array_like, optional
        Precomputed spectrum of ``A``.
    trim : int
        Outlier allowance of the trimmed sup distance.

    Returns
    -------
    SpectralReport
    """
    if eigenvalues is None:
        if A is None:
            raise InvalidInputError("need a matrix or its eigenvalues")
        lam = eigvals_hermitian(A)
    else:
        lam = np.sort(np.asarray(eigenvalues, dtype=float))
    dn = lam.shape[0]
    if g is None:
        raise InvalidInputError("need a symbol sample")
    q = symbol_quantiles(g, dn)
    gap = np.abs(lam - q)
    trimmed = np.sort(gap)[:max(dn - trim, 0)]
    return SpectralReport(
        n=dn if n is None else n,
        sorted_eigenvalues=lam,
        symbol_quantiles=q,
        sup_distance=float(gap.max()) if dn else 0.0,
        l1_distance=float(gap.mean()) if dn else 0.0,
        lambda_min=float(lam[0]) if dn else float("nan"),
        lambda_max=float(lam[-1]) if dn else float("nan"),
        below_threshold_fraction=float(np.count_nonzero(np.abs(lam) <= threshold) / dn) if dn else 0.0,
        threshold=float(threshold),
        trimmed_sup_distance=float(trimmed.max()) if trimmed.size else 0.0,
        trim=trim,
        label=label,
    )


# ---------------------------------------------------------------------------
# zero distribution
# ---------------------------------------------------------------------------

@dataclass
class ZeroDistributionResult:
    """Normalized Schatten statistics ``||A_n||_p / d_n^{1/p}`` per size."""
    sizes: list
    dims: np.ndarray
    values: np.ndarray
    p: float
    decreasing: bool
    slope: float  # least-squares slope of log(value) against log(d_n)


def zero_distribution_test(spec: SequenceSpec, p: float = 2.0,
                           hermitian: bool = True) -> ZeroDistributionResult:
    """Schatten-``p`` statistic of each ``A_n`` normalized by ``d_n^{1/p}``."""
    if not p >= 1:
        raise InvalidParameterError("p must be >= 1")

    def one(n):
        A = spec.build(n)
        d = A.shape[0]
        s = schatten_norm(A, p, hermitian=hermitian)
        return d, s if np.isinf(p) else s / d ** (1.0 / p)

    out = pmap(one, spec.sizes)
    dims = np.array([o[0] for o in out])
    vals = np.array([o[1] for o in out])
    dec = bool(np.all(np.diff(vals) < 0))
    if len(vals) >= 2 and np.all(vals > 0):
        slope = float(np.polyfit(np.log(dims), np.log(vals), 1)[0])
    else:
        slope = float("nan")
    return ZeroDistributionResult(list(spec.sizes), dims, vals, p, dec, slope)


# ---------------------------------------------------------------------------
# extremal eigenvalues
# ---------------------------------------------------------------------------

@dataclass
class DecayRow:
    n: object
    extreme: float
    tau: float
    alpha: float  # nan on the last row and next to flagged rows
    flagged: bool


@dataclass
class DecayTable:
    """``tau_j`` distances to ``reference`` and exponents ``alpha_j``."""
    rows: List[DecayRow]
    reference: float
    which: str
    log_base: str

    @property
    def taus(self) -> np.ndarray:
        return np.array([r.tau for r in self.rows])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([r.alpha for r in self.rows[:-1]])

    @property
    def extremes(self) -> np.ndarray:
        return np.array([r.extreme for r in self.rows])


def decay_from_extremes(sizes, extremes, reference: float = 0.0, which: str = "min",
                        log_base: str = "base2") -> DecayTable:
    """Build a :class:`DecayTable` from precomputed extremal eigenvalues.

    ``tau_j = lambda_min - reference`` (``which="min"``) or
    ``reference - lambda_max`` (``which="max"``);
    ``alpha_j = log_b(tau_j / tau_{j+1})``.  Nonpositive ``tau`` is flagged.
    """
    if which not in ("min", "max"):
        raise InvalidParameterError("which must be 'min' or 'max'")
    if log_base not in LOG_BASES:
        raise InvalidParameterError(f"log_base must be one of {sorted(LOG_BASES)}")
    ext = np.asarray(extremes, dtype=float)
    tau = ext - reference if which == "min" else reference - ext
    flagged = ~(tau > 0)
    base = math.log(LOG_BASES[log_base])
    rows = []
    for j, n in enumerate(sizes):
        if j + 1 < len(tau) and not flagged[j] and not flagged[j + 1]:
            a = math.log(tau[j] / tau[j + 1]) / base
        else:
            a = float("nan")
        rows.append(DecayRow(n, float(ext[j]), float(tau[j]), a, bool(flagged[j])))
    return DecayTable(rows, float(reference), which, log_base)


def extremal_decay(spec: SequenceSpec, reference: float = 0.0, which: str = "min",
                   log_base: str = "base2") -> DecayTable:
    """Extremal-eigenvalue table of a sequence (see :func:`decay_from_extremes`)."""
    if len(spec.sizes) < 2:
        raise InvalidInputError("need at least two sizes")

    def one(n):
        lam = eigvals_hermitian(spec.build(n))
        return lam[0] if which == "min" else lam[-1]

    return decay_from_extremes(spec.sizes, pmap(one, spec.sizes), reference, which, log_base)


# ---------------------------------------------------------------------------
# perturbations
# ---------------------------------------------------------------------------

@dataclass
class PerturbationReport:
    """Distribution of ``herm(B + C)`` next to that of ``B``."""
    report: SpectralReport
    baseline: SpectralReport
    perturbation_norm: float
    sup_shift: float  # |sup_distance(B+C) - sup_distance(B)|
    max_eigenvalue_shift: float


def small_norm_perturbation_check(B, Cmat, g, threshold: float = C.DEFAULT_THRESHOLD
                                  ) -> PerturbationReport:
    """Compare ``B`` and the Hermitian part of ``B + C`` against ``g``.

    For Hermitian perturbations Weyl's bound gives
    ``max_i |lambda_i(B+C) - lambda_i(B)| <= ||C||_2``.
    """
    B = check_hermitian(B)
    Cmat = np.asarray(Cmat)
    if Cmat.shape != B.shape:
        raise InvalidInputError("perturbation shape mismatch")
    lb = eigvals_hermitian(B, check=False)
    lp = eigvals_hermitian(hermitian_part(B + Cmat), check=False)
    base = compare_distribution(eigenvalues=lb, g=g, threshold=threshold)
    rep = compare_distribution(eigenvalues=lp, g=g, threshold=threshold)
    return PerturbationReport(rep, base, schatten_norm(Cmat, np.inf),
                              abs(rep.sup_distance - base.sup_distance),
                              float(np.max(np.abs(lp - lb))) if lb.size else 0.0)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (tuple, list)):
        return "x".join(str(int(c)) for c in v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_reports(reports: Sequence[SpectralReport], path) -> None:
    """CSV with header
    ``n,lambda_min,lambda_max,sup_dist,trimmed_sup_dist,l1_dist,frac_below``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "lambda_min", "lambda_max", "sup_dist", "trimmed_sup_dist", "l1_dist",
                    "frac_below"])
        for r in reports:
            w.writerow([_fmt(r.n), _fmt(r.lambda_min), _fmt(r.lambda_max),
                        _fmt(r.sup_distance), _fmt(r.trimmed_sup_distance), _fmt(r.l1_distance),
                        _fmt(r.below_threshold_fraction)])


def write_overlay(report: SpectralReport, path) -> None:
    """Two-column CSV ``eigenvalue,symbol_quantile`` for sorted overlays."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["eigenvalue", "symbol_quantile"])
        for a, b in zip(report.sorted_eigenvalues, report.symbol_quantiles):
            w.writerow([_fmt(a), _fmt(b)])


def write_decay(table: DecayTable, path) -> None:
    """CSV ``n,extreme,tau,alpha,flagged``; ``alpha`` empty on the last row."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "extreme", "tau", "alpha", "flagged"])
        for r in table.rows:
            a = "" if math.isnan(r.alpha) else _fmt(r.alpha)
            w.writerow([_fmt(r.n), _fmt(r.extreme), _fmt(r.tau), a, int(r.flagged)])
