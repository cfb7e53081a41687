"""Density grids: parallel fill, CSV and PGM artifacts."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np


@dataclass
class DensityGrid:
    """Values sampled on a rectangular (row axis x column axis) grid.

    Rows are time-like samples (``t`` or ``z``), columns are sites or
    transverse positions.
    """

    row_name: str
    rows: np.ndarray
    col_name: str
    cols: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.rows = np.asarray(self.rows)
        self.cols = np.asarray(self.cols)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.rows.size, self.cols.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.rows.size}, {self.cols.size})"
            )

    def column_index(self, col):
        hits = np.flatnonzero(self.cols == col)
        if hits.size == 0:
            raise KeyError(col)
        return int(hits[0])

    def row_index(self, row):
        """Index of the sample closest to ``row``."""
        return int(np.argmin(np.abs(self.rows - row)))


def resolve_threads(threads):
    """``0`` means one worker per CPU."""
    if threads is None or threads <= 0:
        return os.cpu_count() or 1
    return int(threads)


def fill_rows(row_func, rows, threads=1):
    """Evaluate ``row_func`` for every row value and stack the results.

    Rows are independent tasks; results are placed by row index, so the
    output does not depend on completion order or thread count.
    """
    rows = list(rows)
    workers = resolve_threads(threads)
    if workers == 1 or len(rows) < 2:
        out = [np.asarray(row_func(r), dtype=float) for r in rows]
    else:
        out = [None] * len(rows)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(row_func, r): i for i, r in enumerate(rows)}
            for fut, i in futures.items():
                out[i] = np.asarray(fut.result(), dtype=float)
    return np.vstack(out)


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def grid_to_csv(grid: DensityGrid) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"{grid.row_name}/{grid.col_name}", *map(_fmt, grid.cols)])
    for r, row in zip(grid.rows, grid.values):
        writer.writerow([_fmt(r), *map(_fmt, row)])
    return buf.getvalue()


def write_csv(grid: DensityGrid, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(grid_to_csv(grid))


def _parse_axis(tokens):
    try:
        return np.array([int(tok) for tok in tokens])
    except ValueError:
        return np.array([float(tok) for tok in tokens])


def read_csv(path) -> DensityGrid:
    """Inverse of :func:`write_csv`; ``repr`` floats round-trip exactly."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    row_name, col_name = rows[0][0].split("/", 1)
    cols = _parse_axis(rows[0][1:])
    body = rows[1:]
    row_vals = _parse_axis([r[0] for r in body])
    values = np.array([[float(v) for v in r[1:]] for r in body])
    return DensityGrid(row_name, row_vals, col_name, cols, values)


def to_pgm_bytes(values, gamma=1.0) -> bytes:
    """8-bit binary PGM (P5) with the maximum mapped to 255.

    ``gamma`` other than 1 applies ``(v / max) ** (1 / gamma)`` before
    quantisation, which brightens faint structure.
    """
    v = np.asarray(values, dtype=float)
    peak = float(np.max(v)) if v.size else 0.0
    scaled = v / peak if peak > 0 else np.zeros_like(v)
    scaled = np.clip(scaled, 0.0, 1.0)
    if gamma != 1.0:
        scaled = scaled ** (1.0 / gamma)
    pixels = np.rint(scaled * 255).astype(np.uint8)
    height, width = pixels.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes()


def write_pgm(values, path, gamma=1.0):
    with open(path, "wb") as fh:
        fh.write(to_pgm_bytes(values, gamma))


def read_pgm(path):
    """Minimal P5 reader for the files written here."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, dims, maxval, pixels = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError("not an 8-bit P5 file")
    width, height = map(int, dims.split())
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width)
