"""Predicting how two programmed surfaces interact.

The prediction is a signed, normalized cross-correlation over every
translational offset of one grid across the other.  Like-sign facing
pixels repel (+1 per pixel pair), opposite-sign pixels attract (-1), so
a pattern aligned with its complement scores exactly -1.  An offset
(dx, dy) means grid ``b`` is shifted dx columns right and dy rows down
relative to grid ``a``.

Two normalizations are supported: "overlap" divides each offset's sum
by the number of overlapping cells (clean +/-1 plateaus, the default),
"full" divides by the whole grid size so partial overlaps at the map
edge count for less (used when scoring pair sets, where a single
overlapping corner pixel should not dominate).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .patterns import PixelGrid

# Smallest ncc magnitude treated as a real interaction.  Half of the
# coarsest nonzero step seen on 8x8 grids; 1/64 granularity is too
# strict once sensor noise enters the loop.
DEFAULT_EPSILON = 0.125

# Newtons per fully aligned saturated pixel pair at the reference gap,
# calibrated so a fully attracting 8x8 face pulls 1.09 N.
PIXEL_FORCE_N = 1.09 / 64


class Interaction(enum.Enum):
    ATTRACT = "attract"
    REPEL = "repel"
    AGNOSTIC = "agnostic"


@dataclass(eq=False)
class InteractionMap:
    ncc: np.ndarray        # indexed [dy - dy_min, dx - dx_min]
    overlap: np.ndarray
    dx_min: int
    dy_min: int

    @property
    def dx_max(self) -> int:
        return self.dx_min + self.ncc.shape[1] - 1

    @property
    def dy_max(self) -> int:
        return self.dy_min + self.ncc.shape[0] - 1

    def at(self, dx: int, dy: int) -> float:
        if not (self.dx_min <= dx <= self.dx_max and self.dy_min <= dy <= self.dy_max):
            raise ValueError(f"offset ({dx}, {dy}) outside map range")
        return float(self.ncc[dy - self.dy_min, dx - self.dx_min])

    def overlap_at(self, dx: int, dy: int) -> int:
        return int(self.overlap[dy - self.dy_min, dx - self.dx_min])

    def offsets(self):
        for dy in range(self.dy_min, self.dy_max + 1):
            for dx in range(self.dx_min, self.dx_max + 1):
                yield dx, dy

    def to_doc(self, pixel_force: float = PIXEL_FORCE_N) -> dict:
        force = self.ncc * self.overlap * pixel_force
        return {
            "format_version": 1,
            "dx_min": self.dx_min,
            "dy_min": self.dy_min,
            "dx_max": self.dx_max,
            "dy_max": self.dy_max,
            "ncc": [[float(v) for v in row] for row in self.ncc],
            "overlap": [[int(v) for v in row] for row in self.overlap],
            "force_n": [[float(v) for v in row] for row in force],
            "pixel_force_n": pixel_force,
        }


def _overlap_slices(a: PixelGrid, b: PixelGrid, dx: int, dy: int):
    i0, i1 = max(0, dy), min(a.rows, b.rows + dy)
    j0, j1 = max(0, dx), min(a.cols, b.cols + dx)
    if i0 >= i1 or j0 >= j1:
        raise ValueError(f"offset ({dx}, {dy}) has no overlapping pixels")
    return i0, i1, j0, j1


def _divisor(a: PixelGrid, b: PixelGrid, count: int, normalization: str) -> int:
    if normalization == "overlap":
        return count
    if normalization == "full":
        return max(a.values.size, b.values.size)
    raise ValueError(f"unknown normalization {normalization!r}")


def ncc_at(a: PixelGrid, b: PixelGrid, dx: int, dy: int, normalization: str = "overlap") -> float:
    """Normalized signed pixel-product sum at one offset of b over a."""
    i0, i1, j0, j1 = _overlap_slices(a, b, dx, dy)
    total = float(np.sum(a.values[i0:i1, j0:j1] * b.values[i0 - dy:i1 - dy, j0 - dx:j1 - dx]))
    count = (i1 - i0) * (j1 - j0)
    return total / _divisor(a, b, count, normalization)


def interaction_map(a: PixelGrid, b: PixelGrid, normalization: str = "overlap") -> InteractionMap:
    """ncc at every offset with at least one overlapping pixel.

    For two n x n grids the result is (2n-1) x (2n-1).
    """
    dx_min, dx_max = -(b.cols - 1), a.cols - 1
    dy_min, dy_max = -(b.rows - 1), a.rows - 1
    shape = (dy_max - dy_min + 1, dx_max - dx_min + 1)
    ncc = np.zeros(shape)
    overlap = np.zeros(shape, dtype=int)
    for dy in range(dy_min, dy_max + 1):
        i0, i1 = max(0, dy), min(a.rows, b.rows + dy)
        for dx in range(dx_min, dx_max + 1):
            j0, j1 = max(0, dx), min(a.cols, b.cols + dx)
            total = float(
                np.sum(a.values[i0:i1, j0:j1] * b.values[i0 - dy:i1 - dy, j0 - dx:j1 - dx])
            )
            count = (i1 - i0) * (j1 - j0)
            ncc[dy - dy_min, dx - dx_min] = total / _divisor(a, b, count, normalization)
            overlap[dy - dy_min, dx - dx_min] = count
    return InteractionMap(ncc=ncc, overlap=overlap, dx_min=dx_min, dy_min=dy_min)


def classify(ncc: float, epsilon: float = DEFAULT_EPSILON) -> Interaction:
    """Label an ncc value as attraction, repulsion, or agnosticism."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if ncc < -epsilon:
        return Interaction.ATTRACT
    if ncc > epsilon:
        return Interaction.REPEL
    return Interaction.AGNOSTIC


@dataclass(frozen=True)
class ForceEstimate:
    newtons: float
    pixel_force: float = PIXEL_FORCE_N


def force_estimate(ncc: float, overlap_count: int, pixel_force: float = PIXEL_FORCE_N) -> ForceEstimate:
    """Linear per-pixel superposition: negative newtons pull together."""
    if overlap_count < 0:
        raise ValueError("overlap_count must be >= 0")
    return ForceEstimate(newtons=ncc * overlap_count * pixel_force, pixel_force=pixel_force)


def agnosticism_peak(
    a: PixelGrid,
    b: PixelGrid,
    exclude_aligned: bool = True,
    normalization: str = "overlap",
) -> float:
    """Largest |ncc| across offsets; lower means more mutually agnostic."""
    imap = interaction_map(a, b, normalization)
    mags = np.abs(imap.ncc.copy())
    if exclude_aligned:
        mags[0 - imap.dy_min, 0 - imap.dx_min] = 0.0
    return float(mags.max())
