"""Designing sets of selectively interacting surface pairs.

Keys are row permutations of a Hadamard matrix; locks are their
complements (attraction) or copies (repulsion).  A pair attracts or
repels only when exactly aligned.  To keep several pairs from sticking
to each other, candidates are sampled from distinct row permutations
and selected greedily to minimize the worst cross-pair correlation.

Scores use the whole-grid ncc normalization: a lone overlapping corner
pixel always correlates at +/-1 under overlap normalization, which
would make every score degenerate, while its actual pull is one pixel's
worth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .interaction import Interaction, agnosticism_peak, ncc_at
from .patterns import PixelGrid, complement, orthogonality_defect, permute_rows, sylvester_hadamard

SCORE_NORMALIZATION = "full"


@dataclass
class PairSet:
    pairs: list                 # [(key, lock), ...]
    score: float                # worst |ncc| over within-pair off-alignments and cross-pair offsets
    seed: int
    mode: str
    permutations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)


def _sample_permutations(order: int, count: int, seed: int) -> list[tuple]:
    if count > math.factorial(order):
        raise ValueError(f"cannot sample {count} distinct permutations of {order} rows")
    rng = np.random.default_rng(seed)
    seen, out = set(), []
    while len(out) < count:
        p = tuple(int(v) for v in rng.permutation(order))
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def generate_pair_set(
    k: int,
    order: int,
    candidates: int = 64,
    mode: str = "attract",
    seed: int = 0,
) -> PairSet:
    """Greedy pick of k permuted-Hadamard pairs with minimal cross-talk.

    Deterministic for fixed arguments: candidate sampling is a seeded
    stream and greedy ties break toward the lexicographically smaller
    permutation.
    """
    if mode not in ("attract", "repel"):
        raise ValueError(f"mode must be attract or repel, got {mode!r}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if candidates < k:
        raise ValueError(f"candidates ({candidates}) must be >= k ({k})")
    if order < 4:
        raise ValueError("order must be >= 4; smaller orders have too few usable permutations")

    base = sylvester_hadamard(order)
    perms = _sample_permutations(order, candidates, seed)
    keys = [permute_rows(base, p) for p in perms]
    locks = [complement(g) if mode == "attract" else g.copy() for g in keys]

    cross_cache: dict = {}

    def cross_peak(i: int, j: int) -> float:
        key = (min(i, j), max(i, j))
        if key not in cross_cache:
            a, b = key
            cross_cache[key] = max(
                agnosticism_peak(keys[a], keys[b], False, SCORE_NORMALIZATION),
                agnosticism_peak(keys[a], locks[b], False, SCORE_NORMALIZATION),
                agnosticism_peak(locks[a], keys[b], False, SCORE_NORMALIZATION),
                agnosticism_peak(locks[a], locks[b], False, SCORE_NORMALIZATION),
            )
        return cross_cache[key]

    chosen: list[int] = []
    running = 0.0
    for _ in range(k):
        best = None
        for idx in range(candidates):
            if idx in chosen:
                continue
            new_running = max([running] + [cross_peak(idx, s) for s in chosen])
            entry = (new_running, perms[idx], idx)
            if best is None or entry[:2] < best[:2]:
                best = entry
        chosen.append(best[2])
        running = best[0]

    within = [
        agnosticism_peak(keys[i], locks[i], True, SCORE_NORMALIZATION) for i in chosen
    ]
    cross = [cross_peak(i, j) for i, j in combinations(chosen, 2)]
    score = max(within + cross)
    cross_vals = cross or [0.0]
    return PairSet(
        pairs=[(keys[i].copy(), locks[i].copy()) for i in chosen],
        score=score,
        seed=seed,
        mode=mode,
        permutations=[perms[i] for i in chosen],
        stats={
            "max_cross_ncc": max(cross_vals),
            "mean_cross_ncc": sum(cross_vals) / len(cross_vals),
            "max_within_offset_ncc": max(within),
        },
    )


@dataclass
class CanvasLayout:
    token: PixelGrid
    meta_rows: int
    meta_cols: int
    assignments: list        # meta grid of Interaction
    canvas: PixelGrid


def _smallest_derangement(n: int) -> list[int]:
    # Hadamard orders are powers of two, so n >= 2 here is always even
    # and pairwise swaps are the lexicographically smallest derangement.
    perm = list(range(n))
    for i in range(0, n - 1, 2):
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    return perm


def _as_interaction(value) -> Interaction:
    if isinstance(value, Interaction):
        return value
    return Interaction(str(value).lower())


def canvas_compile(token: PixelGrid, assignments) -> CanvasLayout:
    """Tile a canvas of metapixels that attract, repel, or ignore a token.

    Attract blocks hold the token's complement, repel blocks the token
    itself, agnostic blocks a row-deranged copy whose aligned ncc with
    the token is exactly 0 (1x1 tokens fall back to demagnetized blocks,
    which have no orthogonal permutation).
    """
    if token.rows != token.cols:
        raise ValueError(f"token must be square, got {token.rows}x{token.cols}")
    if orthogonality_defect(token) != 0.0:
        raise ValueError("token must be a Hadamard pattern (orthogonality defect 0)")
    grid = [[_as_interaction(v) for v in row] for row in assignments]
    if not grid or not grid[0] or any(len(row) != len(grid[0]) for row in grid):
        raise ValueError("assignments must be a non-empty rectangular grid")
    meta_rows, meta_cols = len(grid), len(grid[0])
    t = token.rows

    if t >= 2:
        agnostic_block = permute_rows(token, _smallest_derangement(t)).values
    else:
        agnostic_block = np.zeros((1, 1))

    blocks = {
        Interaction.ATTRACT: -token.values,
        Interaction.REPEL: token.values.copy(),
        Interaction.AGNOSTIC: agnostic_block,
    }
    canvas = np.zeros((meta_rows * t, meta_cols * t))
    for mr, row in enumerate(grid):
        for mc, assignment in enumerate(row):
            canvas[mr * t:(mr + 1) * t, mc * t:(mc + 1) * t] = blocks[assignment]
    return CanvasLayout(
        token=token.copy(),
        meta_rows=meta_rows,
        meta_cols=meta_cols,
        assignments=grid,
        canvas=PixelGrid(canvas),
    )


def canvas_block_ncc(layout: CanvasLayout, meta_row: int, meta_col: int) -> float:
    """Aligned ncc between the token and one metapixel block."""
    t = layout.token.rows
    block = PixelGrid(
        layout.canvas.values[meta_row * t:(meta_row + 1) * t, meta_col * t:(meta_col + 1) * t]
    )
    return ncc_at(layout.token, block, 0, 0)
