/** Wire formats shared with the control service. */

export type Tool = "north" | "south" | "demagnetize";

export type Assignment = "attract" | "repel" | "agnostic";

export interface PatternDoc {
  format_version: number;
  rows: number;
  cols: number;
  values: number[][];
  write_mask?: boolean[][];
  metadata: Record<string, string>;
}

export interface MapDoc {
  format_version: number;
  dx_min: number;
  dy_min: number;
  dx_max: number;
  dy_max: number;
  ncc: number[][];
  overlap: number[][];
  force_n: number[][];
  pixel_force_n: number;
}

export interface JobDoc {
  id: string;
  kind: "plot" | "scan";
  state: "queued" | "running" | "done" | "failed";
  pixels_total: number;
  pixels_done: number;
  progress: number;
  result: Record<string, unknown> | null;
  error: string | null;
  created_at: number;
  started_at: number | null;
  finished_at: number | null;
}

export interface PairDoc {
  key: PatternDoc;
  lock: PatternDoc;
}

export interface PairsResponse {
  pairs: PairDoc[];
  score: number;
  seed: number;
  mode: string;
  permutations: number[][];
  stats: Record<string, number>;
}

export interface CanvasBlock {
  assignment: Assignment;
  ncc: number;
}

export interface CanvasResponse {
  canvas: PatternDoc;
  blocks: CanvasBlock[][];
}

export interface ValidateResponse {
  ok: boolean;
  rows: number;
  cols: number;
  metadata: Record<string, string>;
}
