/** Editor state: one grid per tab, tool selection, undo/redo, plot baseline. */

import { cloneGrid, dirtyCount, diffDelta, fromPatternDoc, gridsEqual, makeGrid, toPatternDoc } from "./grid.js";
import type { Grid } from "./grid.js";
import type { PatternDoc, Tool } from "./types.js";

const TOOL_VALUES: Record<Tool, number> = { north: 1, south: -1, demagnetize: 0 };

interface Edit {
  row: number;
  col: number;
  prev: number;
  next: number;
}

export class EditorState {
  grid: Grid;
  tool: Tool = "north";
  deviceId: string | null = null;
  /** Sheet contents as of the last completed plot (all zeros for a fresh sheet). */
  lastPlotted: Grid;
  /** Grid the live preview correlates against. */
  previewTarget: Grid | null = null;
  name: string;

  private undoStack: Edit[] = [];
  private redoStack: Edit[] = [];

  constructor(rows: number, cols: number, name = "untitled") {
    this.grid = makeGrid(rows, cols);
    this.lastPlotted = makeGrid(rows, cols);
    this.name = name;
  }

  static fromDoc(doc: PatternDoc, name = "imported"): EditorState {
    const grid = fromPatternDoc(doc);
    const state = new EditorState(grid.length, grid[0].length, name);
    state.grid = grid;
    return state;
  }

  get rows(): number {
    return this.grid.length;
  }

  get cols(): number {
    return this.grid[0].length;
  }

  /** Apply the active tool to a cell; no-op edits leave no undo entry. */
  pixelClick(row: number, col: number, tool?: Tool): void {
    const target = TOOL_VALUES[tool ?? this.tool];
    const prev = this.grid[row][col];
    if (prev === target) return;
    this.grid[row][col] = target;
    this.undoStack.push({ row, col, prev, next: target });
    this.redoStack = [];
  }

  canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  canRedo(): boolean {
    return this.redoStack.length > 0;
  }

  undo(): void {
    const edit = this.undoStack.pop();
    if (!edit) return;
    this.grid[edit.row][edit.col] = edit.prev;
    this.redoStack.push(edit);
  }

  redo(): void {
    const edit = this.redoStack.pop();
    if (!edit) return;
    this.grid[edit.row][edit.col] = edit.next;
    this.undoStack.push(edit);
  }

  /** Number of cells that differ from the last plotted sheet state. */
  dirtyDelta(): number {
    return dirtyCount(this.grid, this.lastPlotted);
  }

  /** Pattern for a delta plot: only cells changed since the last plot. */
  deltaDoc(): PatternDoc {
    return diffDelta(this.lastPlotted, this.grid);
  }

  /** Pattern for a full plot of the working grid. */
  fullDoc(metadata: Record<string, string> = {}): PatternDoc {
    return toPatternDoc(this.grid, metadata);
  }

  /** Record that the working grid is now on the sheet. */
  markPlotted(): void {
    this.lastPlotted = cloneGrid(this.grid);
  }

  exportDoc(): PatternDoc {
    return toPatternDoc(this.grid, { name: this.name });
  }

  importDoc(doc: PatternDoc): void {
    const grid = fromPatternDoc(doc);
    if (grid.length !== this.rows || grid[0].length !== this.cols) {
      this.lastPlotted = makeGrid(grid.length, grid[0].length);
    }
    this.grid = grid;
    this.undoStack = [];
    this.redoStack = [];
  }

  equalsGrid(other: Grid): boolean {
    return gridsEqual(this.grid, other);
  }
}

/** Tab collection; scan results open as new tabs. */
export class Workspace {
  tabs: EditorState[] = [];
  active = 0;

  constructor(rows = 8, cols = 8) {
    this.tabs.push(new EditorState(rows, cols, "pattern 1"));
  }

  get current(): EditorState {
    return this.tabs[this.active];
  }

  addTab(state: EditorState): EditorState {
    this.tabs.push(state);
    this.active = this.tabs.length - 1;
    return state;
  }

  addTabFromDoc(doc: PatternDoc, name: string): EditorState {
    return this.addTab(EditorState.fromDoc(doc, name));
  }
}
