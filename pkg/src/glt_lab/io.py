"""Dense matrix CSV files.

Layout: a header ``# rows=<m> cols=<n> dtype=<real|complex>`` followed by
one line per row.  Real matrices store one column per entry; complex ones
store each entry as a ``re,im`` pair.  Floats use ``repr``, which is the
shortest string that round-trips exactly.
"""
from __future__ import annotations

import csv
import os
import re
import tempfile

import numpy as np

from .errors import InvalidInputError

__all__ = ["write_matrix", "read_matrix", "format_matrix"]

_HEADER = re.compile(r"#\s*rows=(\d+)\s+cols=(\d+)\s+dtype=(real|complex)\s*$")


def _rows(A):
    A = np.asarray(A)
    if A.ndim != 2:
        raise InvalidInputError("expected a 2-D array")
    cplx = np.iscomplexobj(A) and np.any(A.imag != 0)
    yield f"# rows={A.shape[0]} cols={A.shape[1]} dtype={'complex' if cplx else 'real'}"
    for row in A:
        if cplx:
            cells = []
            for z in row:
                cells += [repr(float(z.real)), repr(float(z.imag))]
        else:
            cells = [repr(float(np.real(v))) for v in row]
        yield ",".join(cells)


def format_matrix(A) -> str:
    """Matrix CSV as a string."""
    return "\n".join(_rows(A)) + "\n"


def write_matrix(A, path) -> None:
    """Write ``A`` atomically (temp file + rename in the target directory)."""
    text = format_matrix(A)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def read_matrix(path) -> np.ndarray:
    """Load a matrix written by :func:`write_matrix`.

    Raises
    ------
    InvalidInputError
        Missing/malformed header, wrong row/column counts or bad numbers.
    """
    try:
        with open(path, newline="") as fh:
            first = fh.readline()
            m = _HEADER.match(first.strip())
            if not m:
                raise InvalidInputError(f"{path}: missing matrix header")
            rows, cols, kind = int(m.group(1)), int(m.group(2)), m.group(3)
            body = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from None
    width = 2 * cols if kind == "complex" else cols
    if len(body) != rows or any(len(r) != width for r in body):
        raise InvalidInputError(f"{path}: expected {rows} rows of {width} values")
    try:
        arr = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(rows, width)
    except ValueError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None
    if kind == "complex":
        return arr[:, 0::2] + 1j * arr[:, 1::2]
    return arr
