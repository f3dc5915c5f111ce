/** Grid value helpers: clone/compare, pattern docs, and delta extraction. */

import type { PatternDoc } from "./types.js";

export type Grid = number[][];

export function makeGrid(rows: number, cols: number, fill = 0): Grid {
  return Array.from({ length: rows }, () => Array(cols).fill(fill));
}

export function cloneGrid(grid: Grid): Grid {
  return grid.map((row) => row.slice());
}

export function gridsEqual(a: Grid, b: Grid): boolean {
  if (a.length !== b.length) return false;
  return a.every((row, i) => row.length === b[i].length && row.every((v, j) => v === b[i][j]));
}

export function complementGrid(grid: Grid): Grid {
  return grid.map((row) => row.map((v) => -v));
}

/** Count of cells that differ between the working grid and a baseline. */
export function dirtyCount(grid: Grid, baseline: Grid): number {
  let n = 0;
  for (let r = 0; r < grid.length; r++) {
    for (let c = 0; c < grid[r].length; c++) {
      if (grid[r][c] !== baseline[r][c]) n += 1;
    }
  }
  return n;
}

/**
 * Delta pattern covering exactly the changed cells.  Unchanged cells
 * become unmasked zeros; cells changed to zero stay addressable through
 * the mask so the plotter actively demagnetizes them.
 */
export function diffDelta(oldGrid: Grid, newGrid: Grid): PatternDoc {
  if (oldGrid.length !== newGrid.length || oldGrid[0].length !== newGrid[0].length) {
    throw new Error("grid shapes differ");
  }
  const rows = newGrid.length;
  const cols = newGrid[0].length;
  const values = makeGrid(rows, cols);
  const mask: boolean[][] = Array.from({ length: rows }, () => Array(cols).fill(false));
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      if (oldGrid[r][c] !== newGrid[r][c]) {
        values[r][c] = newGrid[r][c];
        mask[r][c] = true;
      }
    }
  }
  return { format_version: 1, rows, cols, values, write_mask: mask, metadata: {} };
}

export function toPatternDoc(grid: Grid, metadata: Record<string, string> = {}): PatternDoc {
  return {
    format_version: 1,
    rows: grid.length,
    cols: grid[0].length,
    values: cloneGrid(grid),
    metadata,
  };
}

/** Validate an imported document the same way the backend would. */
export function fromPatternDoc(doc: PatternDoc): Grid {
  if (doc.format_version !== 1) {
    throw new Error(`unsupported pattern format_version ${doc.format_version}`);
  }
  if (!Array.isArray(doc.values) || doc.values.length === 0) {
    throw new Error("pattern has no values");
  }
  const width = doc.values[0].length;
  doc.values.forEach((row, i) => {
    if (row.length !== width) throw new Error(`ragged row ${i}`);
    row.forEach((v, j) => {
      if (typeof v !== "number" || Number.isNaN(v) || Math.abs(v) > 1) {
        throw new Error(`value ${v} at cell (${i}, ${j}) outside [-1, 1]`);
      }
    });
  });
  return cloneGrid(doc.values);
}
