"""Magnetic pixel matrices: construction and validation.

A pattern is a 2D grid of normalized remanent flux values in [-1, +1]:
+1 is a fully saturated North pixel, -1 fully saturated South, 0 is
demagnetized.  An optional boolean write mask marks which cells a plot
job should actually program; without a mask, every nonzero cell is
considered writable (the delta convention used by pattern files).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


@dataclass(eq=False)
class PixelGrid:
    values: np.ndarray
    write_mask: Optional[np.ndarray] = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[0] < 1 or vals.shape[1] < 1:
            raise ValueError(f"grid must be a non-empty 2D array, got shape {vals.shape}")
        if np.any(np.isnan(vals)) or np.any(np.abs(vals) > 1.0):
            bad = np.argwhere(np.isnan(vals) | (np.abs(vals) > 1.0))[0]
            raise ValueError(
                f"value {vals[tuple(bad)]} at cell ({bad[0]}, {bad[1]}) outside [-1, 1]"
            )
        self.values = vals
        if self.write_mask is not None:
            mask = np.asarray(self.write_mask, dtype=bool)
            if mask.shape != vals.shape:
                raise ValueError(
                    f"write_mask shape {mask.shape} does not match values shape {vals.shape}"
                )
            self.write_mask = mask

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def mask(self) -> np.ndarray:
        """Effective write mask: explicit mask, or nonzero cells."""
        if self.write_mask is not None:
            return self.write_mask
        return self.values != 0.0

    def copy(self) -> "PixelGrid":
        mask = None if self.write_mask is None else self.write_mask.copy()
        return PixelGrid(self.values.copy(), mask)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PixelGrid):
            return NotImplemented
        if self.values.shape != other.values.shape:
            return False
        if not np.array_equal(self.values, other.values):
            return False
        if (self.write_mask is None) != (other.write_mask is None):
            return False
        if self.write_mask is not None and not np.array_equal(self.write_mask, other.write_mask):
            return False
        return True


@dataclass
class HadamardSpec:
    """An order (power of two) plus a row permutation identifying one matrix."""

    order: int
    row_permutation: tuple = field(default=None)

    def __post_init__(self):
        if self.order < 1 or (self.order & (self.order - 1)) != 0:
            raise ValueError(f"order must be a power of two, got {self.order}")
        if self.row_permutation is None:
            self.row_permutation = tuple(range(self.order))
        else:
            self.row_permutation = tuple(int(i) for i in self.row_permutation)
            _check_permutation(self.row_permutation, self.order)

    def build(self) -> PixelGrid:
        return permute_rows(sylvester_hadamard(self.order), self.row_permutation)


def _check_permutation(perm: Sequence[int], length: int):
    if len(perm) != length:
        raise ValueError(f"permutation length {len(perm)} does not match {length} rows")
    if sorted(perm) != list(range(length)):
        raise ValueError(f"{tuple(perm)} is not a permutation of 0..{length - 1}")


def sylvester_hadamard(order: int) -> PixelGrid:
    """Doubling construction: H_2n = [[H, H], [H, -H]] starting from [[1]].

    Rows and columns are mutually orthogonal; the first row and column
    are all +1 (normal form).
    """
    if order < 1 or (order & (order - 1)) != 0:
        raise ValueError(f"Hadamard order must be a power of two >= 1, got {order}")
    h = np.array([[1.0]])
    block = np.array([[1.0, 1.0], [1.0, -1.0]])
    while h.shape[0] < order:
        h = np.kron(h, block)
    return PixelGrid(h)


def complement(grid: PixelGrid) -> PixelGrid:
    """Element-wise negation; aligned complements attract at every pixel."""
    mask = None if grid.write_mask is None else grid.write_mask.copy()
    return PixelGrid(-grid.values, mask)


def permute_rows(grid: PixelGrid, perm: Sequence[int]) -> PixelGrid:
    """Reorder rows so output row i is input row perm[i]."""
    perm = [int(i) for i in perm]
    _check_permutation(perm, grid.rows)
    mask = None if grid.write_mask is None else grid.write_mask[perm].copy()
    return PixelGrid(grid.values[perm].copy(), mask)


def checkerboard(rows: int, cols: int) -> PixelGrid:
    """Alternating +1/-1 pattern with value (-1)^(i+j)."""
    if rows < 1 or cols < 1:
        raise ValueError(f"checkerboard size must be >= 1x1, got {rows}x{cols}")
    i, j = np.indices((rows, cols))
    return PixelGrid(np.where((i + j) % 2 == 0, 1.0, -1.0))


def orthogonality_defect(grid: PixelGrid) -> float:
    """Worst off-diagonal row/column correlation, normalized by order.

    0 exactly iff the grid is a Hadamard matrix.
    """
    if grid.rows != grid.cols:
        raise ValueError(f"orthogonality defect needs a square grid, got {grid.rows}x{grid.cols}")
    v = grid.values
    if np.any(np.abs(v) != 1.0):
        raise ValueError("orthogonality defect is defined for +/-1 grids only")
    n = grid.rows
    if n == 1:
        return 0.0
    row_gram = v @ v.T
    col_gram = v.T @ v
    off = ~np.eye(n, dtype=bool)
    worst = max(np.abs(row_gram[off]).max(), np.abs(col_gram[off]).max())
    return float(worst) / n
