/**
 * Interaction heatmap model: backend ncc values mapped to screen cells.
 *
 * Values are passed through untouched: the client never recomputes
 * magnetics, it only colors what the service predicted.  The diverging
 * palette is blue at -1 (attraction), white at 0 (agnostic), red at +1
 * (repulsion).
 */

import type { MapDoc } from "./types.js";

export const ATTRACT_RGB: [number, number, number] = [37, 99, 235];
export const REPEL_RGB: [number, number, number] = [220, 38, 38];
const WHITE: [number, number, number] = [255, 255, 255];

function mix(a: [number, number, number], b: [number, number, number], t: number): string {
  const ch = (i: number) => Math.round(a[i] + (b[i] - a[i]) * t);
  return `rgb(${ch(0)}, ${ch(1)}, ${ch(2)})`;
}

/** Diverging color for an ncc value in [-1, 1]. */
export function divergingColor(value: number): string {
  const v = Math.max(-1, Math.min(1, value));
  if (v < 0) return mix(WHITE, ATTRACT_RGB, -v);
  if (v > 0) return mix(WHITE, REPEL_RGB, v);
  return mix(WHITE, WHITE, 0);
}

export interface HeatmapCell {
  dx: number;
  dy: number;
  ncc: number;
  overlap: number;
  forceN: number;
  color: string;
}

export interface HeatmapModel {
  rows: number;
  cols: number;
  dxMin: number;
  dyMin: number;
  cells: HeatmapCell[][];
  /** Hover caption for one cell. */
  tooltip(cell: HeatmapCell): string;
}

export function buildHeatmap(doc: MapDoc): HeatmapModel {
  const rows = doc.ncc.length;
  const cols = doc.ncc[0].length;
  const cells: HeatmapCell[][] = [];
  for (let r = 0; r < rows; r++) {
    const row: HeatmapCell[] = [];
    for (let c = 0; c < cols; c++) {
      row.push({
        dx: doc.dx_min + c,
        dy: doc.dy_min + r,
        ncc: doc.ncc[r][c],
        overlap: doc.overlap[r][c],
        forceN: doc.force_n[r][c],
        color: divergingColor(doc.ncc[r][c]),
      });
    }
    cells.push(row);
  }
  return {
    rows,
    cols,
    dxMin: doc.dx_min,
    dyMin: doc.dy_min,
    cells,
    tooltip: (cell) =>
      `offset (${cell.dx}, ${cell.dy}): ncc ${cell.ncc.toFixed(3)}, ` +
      `${cell.forceN >= 0 ? "+" : ""}${cell.forceN.toFixed(3)} N over ${cell.overlap} px`,
  };
}

export function cellAt(model: HeatmapModel, dx: number, dy: number): HeatmapCell {
  return model.cells[dy - model.dyMin][dx - model.dxMin];
}

/** Editor pixel colors: North black, South white, demagnetized gray. */
export function pixelColor(value: number): string {
  if (value > 0.5) return "#111827";
  if (value < -0.5) return "#f8fafc";
  if (value > 0) return "#6b7280";
  if (value < 0) return "#cbd5e1";
  return "#9ca3af";
}
