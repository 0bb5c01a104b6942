"""Matrix and subspace file I/O.

Primary format is header-less CSV, one matrix row per line. Files starting
with ``%%MatrixMarket`` are parsed as MatrixMarket *array* format (dense,
column-major). Written CSV uses shortest round-trip float literals, so a
save/load cycle is exact.

Subspace files are CSV matrices whose columns span the subspace (no
orthonormality required); orthonormalization happens at load.
"""

from __future__ import annotations

import sys

import numpy as np

from .core import as_matrix
from .subspaces import Subspace
from .tolerance import DEFAULT_TOL, ToleranceContext

__all__ = [
    "loads_matrix",
    "load_matrix",
    "dumps_matrix",
    "save_matrix",
    "load_subspace",
]


class MatrixParseError(ValueError):
    """Input text could not be parsed as a matrix."""


def _parse_market(lines: list[str]) -> np.ndarray:
    header = lines[0].split()
    if len(header) < 4 or header[1].lower() != "matrix":
        raise MatrixParseError(f"malformed MatrixMarket header: {lines[0]!r}")
    if header[2].lower() != "array" or header[3].lower() != "real":
        raise MatrixParseError(
            "only 'array real' MatrixMarket matrices are supported"
        )
    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixParseError("MatrixMarket file has no size line")
    try:
        rows, cols = (int(tok) for tok in body[0].split())
        values = [float(tok) for ln in body[1:] for tok in ln.split()]
    except ValueError as exc:
        raise MatrixParseError(f"bad MatrixMarket body: {exc}") from exc
    if len(values) != rows * cols:
        raise MatrixParseError(
            f"expected {rows * cols} entries, found {len(values)}"
        )
    return np.array(values, dtype=np.float64).reshape((cols, rows)).T


def loads_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixParseError("empty matrix file")
    if lines[0].lstrip().startswith("%%MatrixMarket"):
        return _parse_market(lines)
    rows = []
    width = None
    for ln in lines:
        try:
            row = [float(tok) for tok in ln.split(",")]
        except ValueError as exc:
            raise MatrixParseError(f"bad CSV row {ln!r}: {exc}") from exc
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MatrixParseError("ragged CSV rows")
        rows.append(row)
    return as_matrix(np.array(rows, dtype=np.float64))


def load_matrix(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_matrix(fh.read())


def dumps_matrix(m) -> str:
    m = as_matrix(m)
    return "\n".join(",".join(repr(float(v)) for v in row) for row in m) + "\n"


def save_matrix(m, path: str | None):
    """Write CSV to ``path``, or to stdout when path is ``None`` or ``-``."""
    text = dumps_matrix(m)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_subspace(path: str, tol: ToleranceContext = DEFAULT_TOL) -> Subspace:
    return Subspace.from_spanning(load_matrix(path), tol)
