"""Reservoir matrix construction: six filling methods plus the stretching resampler.

The default reservoir is 25 rows x 785 columns = 19625 cells (25 reservoir
neurons, 784 pixels + 1 bias input).  Matrices are stored row-major with an
explicit shape; the column-wise methods are realized through Fortran-order
reshaping, not by physically transposing a row-wise result.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .signals import as_series

RESERVOIR_ROWS = 25
RESERVOIR_COLS = 785
RESERVOIR_CELLS = RESERVOIR_ROWS * RESERVOIR_COLS  # 19625


class FillMethod(enum.IntEnum):
    """The six filling rules: row/column orientation x cycle/zero-pad/stretch."""

    ROW_CYCLE = 1     # row-wise, series repeats immediately after its last sample
    ROW_ZERO = 2      # row-wise, zero-pad the rest of the row, restart next row
    ROW_STRETCH = 3   # row-wise, series stretched to the exact cell count
    COL_CYCLE = 4     # column-wise counterpart of ROW_CYCLE
    COL_ZERO = 5      # column-wise counterpart of ROW_ZERO (the default technique)
    COL_STRETCH = 6   # column-wise counterpart of ROW_STRETCH

    @property
    def column_wise(self) -> bool:
        return self >= FillMethod.COL_CYCLE


def stretch(series, target_len: int) -> np.ndarray:
    """Endpoint-preserving linear resampling of a series to target_len samples.

    Output index k = 1..target_len maps to source position
    1 + (k-1)*(N-1)/(target_len-1); values between source samples are linearly
    interpolated.  target_len == N returns the input exactly; a one-sample
    input yields a constant output.
    """
    x = as_series(series)
    if target_len < 1:
        raise ValueError("target length must be >= 1")
    if x.size == 1:
        return np.full(target_len, x[0])
    if target_len == 1:
        return x[:1].copy()
    pos = np.linspace(0.0, x.size - 1.0, target_len)
    return np.interp(pos, np.arange(x.size), x)


def _flat_cycle(x: np.ndarray, total: int) -> np.ndarray:
    return np.resize(x, total)


def _flat_zero_pad(x: np.ndarray, total: int, run_len: int) -> np.ndarray:
    # Pad the series with zeros up to a whole number of runs, then cycle.
    n_runs = math.ceil(x.size / run_len)
    block = np.zeros(n_runs * run_len)
    block[: x.size] = x
    return np.resize(block, total)


def fill(series, method, rows: int = RESERVOIR_ROWS, cols: int = RESERVOIR_COLS,
         truncate: str = "first") -> np.ndarray:
    """Build the rows x cols reservoir matrix from a series of any length.

    Series longer than rows*cols are truncated to that many samples before
    filling; ``truncate`` selects the kept window ("first" or "last").
    """
    x = as_series(series)
    method = FillMethod(method)
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be >= 1")
    if truncate not in ("first", "last"):
        raise ValueError(f"truncate must be 'first' or 'last', got {truncate!r}")
    total = rows * cols
    if x.size > total:
        x = x[:total] if truncate == "first" else x[-total:]

    # Column-wise methods fill runs of length `rows` in Fortran order.
    run_len = rows if method.column_wise else cols
    if method in (FillMethod.ROW_CYCLE, FillMethod.COL_CYCLE):
        flat = _flat_cycle(x, total)
    elif method in (FillMethod.ROW_ZERO, FillMethod.COL_ZERO):
        flat = _flat_zero_pad(x, total, run_len)
    else:
        flat = stretch(x, total)
    order = "F" if method.column_wise else "C"
    return flat.reshape((rows, cols), order=order)


def matrix_to_csv(matrix, path) -> None:
    """Debug dump: one matrix row per line, comma-separated."""
    np.savetxt(path, np.asarray(matrix), delimiter=",", fmt="%.17g")
