"""Command-line front end: ``glt-lab <subcommand> [flags]``.

Subcommands: build, mean, karcher, spectrum, decay, experiment, cw.
Every subcommand also accepts ``--config file.json`` whose flat keys mirror
the long flags (``max_iter`` or ``max-iter``); flags on the command line win.

Exit codes: 0 success, 2 usage / input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from ._parallel import ENV_VAR
from .discretizations import (CWParams, bspline_toeplitz, curie_weiss_full,
                              curie_weiss_restricted, curie_weiss_symbol, fd4_matrix,
                              fd4_matrix_2d)
from .errors import (ConvergenceError, DomainError, GLTLabError, InvalidInputError,
                     InvalidParameterError, NotPositiveDefiniteError, SizeError)
from .experiments import (EXPERIMENTS, ExperimentConfig, _reference_symbol, run_cw_experiment,
                          run_gm_example)
from .geomean import KarcherConfig, alm_mean, karcher_mean
from .io import format_matrix, read_matrix, write_matrix
from .spectral import compare_distribution, write_decay, write_overlay, write_reports
from .structured import (circulant, diagonal_sampling, hankel, omega_circulant, tau_matrix,
                         toeplitz)
from .symbols import TrigPolynomial, read_grid_symbol, sample_symbol

FAMILIES = ("toeplitz", "circulant", "omega", "tau", "hankel", "diag", "fd4", "fd4-2d",
            "bspline", "cw-restricted", "cw-full")

REQUIRED = {
    "build": ("family", "n"),
    "mean": ("a", "b"),
    "karcher": ("inputs",),
    "spectrum": ("matrix", "symbol"),
    "decay": ("experiment",),
    "experiment": ("id",),
    "cw": (),
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# value parsers
# ---------------------------------------------------------------------------

def _ints(v) -> List[int]:
    if isinstance(v, (list, tuple)):
        return [int(x) for x in v]
    if isinstance(v, (int, np.integer)):
        return [int(v)]
    try:
        return [int(s) for s in str(v).split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {v!r}") from None


def _num(s):
    s = str(s).strip().replace(" ", "")
    try:
        z = complex(s)
    except ValueError:
        raise UsageError(f"bad number {s!r}") from None
    return z.real if z.imag == 0 else z


def _values(v) -> np.ndarray:
    if isinstance(v, (list, tuple)):
        vals = [_num(x) for x in v]
    else:
        vals = [_num(x) for x in str(v).split(",") if x.strip()]
    if not vals:
        raise UsageError("empty value list")
    return np.array(vals)


def _coeffs(v, d: int) -> Dict:
    """``"0:2,1:-1,-1:-1"``; multilevel keys separate levels with ``;``."""
    if isinstance(v, dict):
        items = list(v.items())
    else:
        items = []
        for part in str(v).split(","):
            if not part.strip():
                continue
            if ":" not in part:
                raise UsageError(f"coefficient {part!r} is not of the form k:value")
            k, val = part.rsplit(":", 1)
            items.append((k, val))
    out = {}
    for k, val in items:
        try:
            key = tuple(int(t) for t in str(k).split(";"))
        except ValueError:
            raise UsageError(f"bad coefficient index {k!r}") from None
        if len(key) != d:
            raise UsageError(f"index {k!r} has {len(key)} levels, expected {d}")
        out[key] = _num(val)
    return out


def _block(v) -> np.ndarray:
    """``"2,1;1,2"`` -> 2x2 array."""
    if isinstance(v, list):
        return np.array(v, dtype=complex if any(isinstance(x, str) for r in v for x in r) else float)
    rows = [[_num(x) for x in r.split(",")] for r in str(v).split(";")]
    if len({len(r) for r in rows}) != 1:
        raise UsageError("block rows differ in length")
    return np.array(rows)


def _expr(text: str, names):
    """Vectorized callable from an expression such as ``"x**2 + y"``."""
    import sympy
    syms = sympy.symbols(names)
    syms = syms if isinstance(syms, tuple) else (syms,)
    try:
        e = sympy.sympify(str(text), locals={n: s for n, s in zip(names, syms)})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise UsageError(f"cannot parse expression {text!r}: {exc}") from None
    extra = {str(s) for s in e.free_symbols} - set(names)
    if extra:
        raise UsageError(f"unknown variable(s) in {text!r}: {', '.join(sorted(extra))}")
    f = sympy.lambdify(syms, e, "numpy")

    def call(*args):
        return np.broadcast_to(np.asarray(f(*args), dtype=float), np.shape(args[0]))

    return call


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit_matrix(A, out):
    if out:
        write_matrix(A, out)
    else:
        sys.stdout.write(format_matrix(A))


def _emit_via(writer, obj, out):
    if out:
        writer(obj, out)
        return
    fd, tmp = tempfile.mkstemp(suffix=".csv")
    os.close(fd)
    try:
        writer(obj, tmp)
        with open(tmp) as fh:
            sys.stdout.write(fh.read())
    finally:
        os.remove(tmp)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_build(a):
    fam = a.family
    if fam not in FAMILIES:
        raise UsageError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    n = _ints(a.n)
    n1 = n[0]
    if fam == "toeplitz":
        if a.coeffs is None:
            raise UsageError("toeplitz needs --coeffs")
        p = TrigPolynomial.scalar(_coeffs(a.coeffs, len(n)), d=len(n))
        if a.block is not None:
            p = p.tensor(_block(a.block))
        A = toeplitz(tuple(n), p)
    elif fam in ("circulant", "omega", "tau", "hankel"):
        if a.values is None:
            raise UsageError(f"{fam} needs --values")
        v = _values(a.values)
        if fam == "circulant":
            A = circulant(n1, v)
        elif fam == "omega":
            if a.omega is None:
                raise UsageError("omega needs --omega")
            A = omega_circulant(n1, _num(a.omega), v)
        elif fam == "tau":
            A = tau_matrix(n1, v)
        else:
            A = hankel(n1, v)
    elif fam == "diag":
        if a.func is None:
            raise UsageError("diag needs --func")
        names = ("x",) if len(n) == 1 else ("x", "y") if len(n) == 2 else \
            tuple(f"x{i + 1}" for i in range(len(n)))
        A = diagonal_sampling(tuple(n) if len(n) > 1 else n1, _expr(a.func, names))
    elif fam == "fd4":
        A = fd4_matrix(n1, _expr(a.func or "1", ("x",)))
    elif fam == "fd4-2d":
        if len(n) != 2:
            raise UsageError("fd4-2d needs --n n1,n2")
        A = fd4_matrix_2d(n[0], n[1], _expr(a.func or "1", ("x",)))
    elif fam == "bspline":
        A = bspline_toeplitz(a.kind, a.which, n1)
    elif fam == "cw-restricted":
        A = curie_weiss_restricted(CWParams(float(a.gamma), float(a.B), n1), a.normalization)
    else:
        A = curie_weiss_full(CWParams(float(a.gamma), float(a.B), n1))
    _emit_matrix(A, a.out)
    return 0


def _cmd_mean(a):
    _emit_matrix(alm_mean(read_matrix(a.a), read_matrix(a.b)), a.out)
    return 0


def _karcher_cfg(a) -> KarcherConfig:
    theta = a.theta
    if theta != "adaptive":
        theta = float(_num(theta))
    return KarcherConfig(max_iterations=int(a.max_iter), residual_tol=float(a.tol),
                         theta_mode=theta, init_mode=a.init)


def _cmd_karcher(a):
    paths = a.inputs if isinstance(a.inputs, list) else [p for p in str(a.inputs).split(",") if p]
    mats = [read_matrix(p) for p in paths]
    res = karcher_mean(mats, _karcher_cfg(a))
    _emit_matrix(res.mean, a.out)
    print(f"iterations={res.iterations} residual={res.residual_history[-1]:.3e} "
          f"converged={res.converged}", file=sys.stderr)
    if not res.converged:
        raise ConvergenceError(res.message or "Karcher iteration did not converge")
    return 0


def _symbol_for(spec: str, grid):
    mx, mt = grid if grid else (None, None)
    if spec in EXPERIMENTS:
        return _reference_symbol(EXPERIMENTS[spec], ExperimentConfig(spec, grid=grid))
    if spec.startswith("cw:"):
        try:
            g, b = (float(t) for t in spec[3:].split(","))
        except ValueError:
            raise UsageError("cw symbol is 'cw:<gamma>,<B>'") from None
        return sample_symbol(curie_weiss_symbol(g, b), mx, mt)
    if os.path.exists(spec):
        return read_grid_symbol(spec)
    raise UsageError(f"symbol {spec!r} is neither an experiment id, 'cw:G,B' nor a file")


def _grid(a):
    if a.grid is None:
        return None
    v = _ints(a.grid)
    if len(v) != 2:
        raise UsageError("--grid is mx,mtheta")
    return (v[0], v[1])


def _cmd_spectrum(a):
    A = read_matrix(a.matrix)
    g = _symbol_for(a.symbol, _grid(a))
    rep = compare_distribution(A, g, threshold=float(a.threshold), trim=int(a.trim),
                               label=a.symbol)
    _emit_via(write_reports, [rep], a.out)
    if a.overlay:
        write_overlay(rep, a.overlay)
    return 0


def _cmd_decay(a):
    sizes = _ints(a.sizes) if a.sizes is not None else None
    if a.experiment == "cw":
        res = run_cw_experiment(float(a.gamma), float(a.B), sizes or (40, 80, 160, 320),
                                log_base=a.log or "base10", reference=a.reference)
    else:
        res = run_gm_example(a.experiment, ExperimentConfig(
            a.experiment, sizes=sizes, log_base=a.log or "base2", threshold=float(a.threshold)))
    table = res.decay_min if a.which == "min" else res.decay_max
    _emit_via(write_decay, table, a.out)
    return 0


def _cmd_experiment(a):
    sizes = _ints(a.sizes) if a.sizes is not None else None
    cfg = ExperimentConfig(a.id, sizes=sizes, threshold=float(a.threshold),
                           log_base=a.log, karcher=_karcher_cfg(a), grid=_grid(a),
                           outdir=a.outdir)
    res = run_gm_example(a.id, cfg)
    if not a.outdir:
        _emit_via(write_decay, res.decay_min, None)
    if any(c is False for c in res.karcher_converged):
        raise ConvergenceError("Karcher iteration did not converge for some size "
                               "(results written with the flag set)")
    return 0


def _cmd_cw(a):
    sizes = _ints(a.sizes)
    full = _ints(a.full_sizes) if a.full_sizes else []
    res = run_cw_experiment(float(a.gamma), float(a.B), sizes, log_base=a.log,
                            reference=a.reference, normalization=a.normalization,
                            full_sizes=full, threshold=float(a.threshold), grid=_grid(a),
                            outdir=a.outdir)
    if not a.outdir:
        _emit_via(write_decay, res.decay_min if a.which == "min" else res.decay_max, None)
    return 0


COMMANDS = {"build": _cmd_build, "mean": _cmd_mean, "karcher": _cmd_karcher,
            "spectrum": _cmd_spectrum, "decay": _cmd_decay, "experiment": _cmd_experiment,
            "cw": _cmd_cw}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _karcher_flags(p):
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--theta", default="adaptive", help="'adaptive' or a fixed step length")
    p.add_argument("--init", default="arithmetic_mean",
                   choices=["arithmetic_mean", "first_matrix", "identity"])


def build_parser():
    parser = _Parser(prog="glt-lab", description="Structured matrices, geometric means "
                     "and spectral symbols of matrix sequences.")
    parser.add_argument("--version", action="version", version=f"glt-lab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    subs = {}

    p = sub.add_parser("build", help="build a structured matrix and write it as CSV")
    p.add_argument("--family", help="|".join(FAMILIES))
    p.add_argument("--n", help="order (or n1,n2 for multilevel families)")
    p.add_argument("--coeffs", help="Fourier coefficients 'k:v,...' (levels split by ';')")
    p.add_argument("--block", help="block to tensor the coefficients with, e.g. '2,1;1,2'")
    p.add_argument("--values", help="comma-separated values (first column, Hankel values, ...)")
    p.add_argument("--omega", help="omega for the omega-circulant family")
    p.add_argument("--func", help="expression in x (x, y for 2D diag) for diag / fd4 / fd4-2d")
    p.add_argument("--kind", default="cubic_C1", choices=["quadratic_C0", "cubic_C1"])
    p.add_argument("--which", default="stiffness", choices=["stiffness", "mass", "sum"])
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--normalization", default="size", choices=["size", "spin"])
    p.add_argument("--params", help="JSON object with any of the flags above")
    p.add_argument("--out")
    subs["build"] = p

    p = sub.add_parser("mean", help="ALM geometric mean of two HPD matrices")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--out")
    subs["mean"] = p

    p = sub.add_parser("karcher", help="Karcher mean of several HPD matrices")
    p.add_argument("--inputs", help="comma-separated matrix CSV files")
    _karcher_flags(p)
    p.add_argument("--out")
    subs["karcher"] = p

    p = sub.add_parser("spectrum", help="compare a matrix spectrum with a symbol")
    p.add_argument("--matrix")
    p.add_argument("--symbol", help="experiment id, 'cw:G,B' or GridSymbol CSV")
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--trim", type=int, default=4)
    p.add_argument("--grid", help="symbol grid mx,mtheta")
    p.add_argument("--overlay", help="also write the sorted overlay CSV here")
    p.add_argument("--out")
    subs["spectrum"] = p

    p = sub.add_parser("decay", help="extremal-eigenvalue decay table")
    p.add_argument("--experiment", help="experiment id or 'cw'")
    p.add_argument("--sizes")
    p.add_argument("--log", choices=["base2", "natural", "base10"])
    p.add_argument("--which", default="min", choices=["min", "max"])
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--reference", default="exact", choices=["exact", "grid"])
    p.add_argument("--out")
    subs["decay"] = p

    p = sub.add_parser("experiment", help="run a registered experiment")
    p.add_argument("--id", help=", ".join(sorted(EXPERIMENTS)))
    p.add_argument("--sizes")
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--log", default="base2", choices=["base2", "natural", "base10"])
    p.add_argument("--grid")
    _karcher_flags(p)
    p.add_argument("--outdir")
    subs["experiment"] = p

    p = sub.add_parser("cw", help="Curie-Weiss restricted/full experiment")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--sizes", default="40,80,160,320", help="matrix orders N+1")
    p.add_argument("--full-sizes", help="spin counts for the full-model sweep")
    p.add_argument("--log", default="base10", choices=["base2", "natural", "base10"])
    p.add_argument("--reference", default="exact", choices=["exact", "grid"])
    p.add_argument("--normalization", default="size", choices=["size", "spin"])
    p.add_argument("--which", default="min", choices=["min", "max"])
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--grid")
    p.add_argument("--outdir")
    subs["cw"] = p

    for p in subs.values():
        p.add_argument("--config", help="JSON file with flat keys mirroring the flags")
    return parser, subs


def _apply_mapping(sp, mapping: dict, what: str):
    dests = {a.dest for a in sp._actions}
    clean = {}
    for k, v in mapping.items():
        key = str(k).replace("-", "_")
        if key not in dests or key in ("config", "help"):
            raise UsageError(f"unknown key {k!r} in {what}")
        clean[key] = v
    sp.set_defaults(**clean)


def _parse(argv):
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("missing subcommand; try --help")
    sp = subs[args.command]
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        _apply_mapping(sp, cfg, "config")
        args = parser.parse_args(argv)
    if getattr(args, "params", None):
        try:
            extra = json.loads(args.params)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--params is not valid JSON: {exc}") from None
        if not isinstance(extra, dict):
            raise UsageError("--params must be a JSON object")
        # explicit flags still win over --params
        explicit = {a.dest for a in sp._actions
                    if any(opt in argv for opt in a.option_strings)}
        _apply_mapping(sp, {k: v for k, v in extra.items()
                            if str(k).replace("-", "_") not in explicit}, "--params")
        args = parser.parse_args(argv)
    missing = [r for r in REQUIRED[args.command] if getattr(args, r) in (None, "")]
    if missing:
        raise UsageError(f"{args.command}: missing required "
                         + ", ".join("--" + m.replace("_", "-") for m in missing))
    return args


def _check_env():
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return
    try:
        ok = int(raw) >= 1
    except ValueError:
        ok = False
    if not ok:
        raise UsageError(f"{ENV_VAR} must be a positive integer, got {raw!r}")


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        _check_env()
        args = _parse(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:          # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotPositiveDefiniteError, DomainError, ConvergenceError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (InvalidInputError, InvalidParameterError, SizeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GLTLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
