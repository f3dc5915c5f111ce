"""Pattern file format (version 1) and delta computation.

Patterns are stored as UTF-8 JSON with sorted keys so identical grids
always serialize to identical bytes.  The canonical file extension is
``.mixel.json``.  A masked 0 means "actively demagnetize this cell"; an
unmasked 0 means "skip it": the two are distinguished so delta files
can express both.
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .patterns import PixelGrid

FORMAT_VERSION = 1
FILE_EXTENSION = ".mixel.json"


def grid_to_doc(grid: PixelGrid, metadata: Optional[dict] = None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "rows": grid.rows,
        "cols": grid.cols,
        "values": [[float(v) for v in row] for row in grid.values],
        "metadata": {str(k): str(v) for k, v in (metadata or {}).items()},
    }
    if grid.write_mask is not None:
        doc["write_mask"] = [[bool(v) for v in row] for row in grid.write_mask]
    return doc


def grid_from_doc(doc: dict) -> tuple[PixelGrid, dict]:
    if not isinstance(doc, dict):
        raise ValueError("pattern document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported pattern format_version {version!r} (expected {FORMAT_VERSION})")
    values = doc.get("values")
    if not isinstance(values, list) or not values or not all(isinstance(r, list) for r in values):
        raise ValueError("pattern 'values' must be a non-empty list of rows")
    width = len(values[0])
    for i, row in enumerate(values):
        if len(row) != width:
            raise ValueError(f"ragged rows: row {i} has {len(row)} values, expected {width}")
    arr = np.array(values, dtype=np.float64)
    bad = np.argwhere(np.isnan(arr) | (np.abs(arr) > 1.0))
    if len(bad):
        i, j = bad[0]
        raise ValueError(f"value {arr[i, j]} at cell ({i}, {j}) outside [-1, 1]")
    rows, cols = doc.get("rows"), doc.get("cols")
    if rows is not None and cols is not None and (rows, cols) != arr.shape:
        raise ValueError(f"declared shape {rows}x{cols} does not match values {arr.shape[0]}x{arr.shape[1]}")
    mask = doc.get("write_mask")
    if mask is not None:
        if not isinstance(mask, list) or len(mask) != arr.shape[0] or any(
            not isinstance(r, list) or len(r) != arr.shape[1] for r in mask
        ):
            raise ValueError("write_mask shape does not match values")
        mask = np.array(mask, dtype=bool)
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise ValueError("metadata must be an object of strings")
    metadata = {str(k): str(v) for k, v in metadata.items()}
    return PixelGrid(arr, mask), metadata


def save_pattern(grid: PixelGrid, metadata: Optional[dict] = None) -> bytes:
    doc = grid_to_doc(grid, metadata)
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


def load_pattern(data: bytes) -> tuple[PixelGrid, dict]:
    try:
        doc = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ValueError(f"pattern file is not valid UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed pattern file at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return grid_from_doc(doc)


def diff_delta(old: PixelGrid, new: PixelGrid) -> PixelGrid:
    """Delta that reprograms exactly the cells that changed.

    Unchanged cells become unmasked zeros (skipped by the plotter);
    changed cells keep their new value and are masked, including cells
    that changed *to* zero.
    """
    if old.values.shape != new.values.shape:
        raise ValueError(
            f"grid shapes differ: {old.rows}x{old.cols} vs {new.rows}x{new.cols}"
        )
    changed = old.values != new.values
    return PixelGrid(np.where(changed, new.values, 0.0), changed)


def apply_delta(base: PixelGrid, delta: PixelGrid) -> PixelGrid:
    """Overwrite masked delta cells onto a base grid."""
    if base.values.shape != delta.values.shape:
        raise ValueError(
            f"grid shapes differ: {base.rows}x{base.cols} vs {delta.rows}x{delta.cols}"
        )
    return PixelGrid(np.where(delta.mask, delta.values, base.values))


def grid_to_csv(grid: PixelGrid) -> str:
    lines = [",".join(f"{v:g}" for v in row) for row in grid.values]
    return "\n".join(lines) + "\n"
