import { describe, expect, it } from "vitest";

import { EditorState, Workspace } from "../src/editor.js";
import { cloneGrid } from "../src/grid.js";

describe("EditorState", () => {
  it("applies tools to cells", () => {
    const state = new EditorState(4, 4);
    state.pixelClick(0, 0, "north");
    state.pixelClick(0, 1, "south");
    expect(state.grid[0][0]).toBe(1);
    expect(state.grid[0][1]).toBe(-1);
  });

  it("north click flips a south cell", () => {
    const state = new EditorState(2, 2);
    state.pixelClick(1, 1, "south");
    state.pixelClick(1, 1, "north");
    expect(state.grid[1][1]).toBe(1);
  });

  it("demagnetize on a zero cell is a no-op with no undo entry", () => {
    const state = new EditorState(2, 2);
    state.pixelClick(0, 0, "demagnetize");
    expect(state.canUndo()).toBe(false);
  });

  it("undo after three edits restores the pre-edit snapshot", () => {
    const state = new EditorState(4, 4);
    state.pixelClick(0, 0, "north");
    const snapshot = cloneGrid(state.grid);
    state.pixelClick(1, 1, "south");
    state.pixelClick(2, 2, "north");
    state.pixelClick(3, 3, "south");
    state.undo();
    state.undo();
    state.undo();
    expect(state.grid).toEqual(snapshot);
  });

  it("redo replays an undone edit exactly", () => {
    const state = new EditorState(2, 2);
    state.pixelClick(0, 1, "south");
    const after = cloneGrid(state.grid);
    state.undo();
    state.redo();
    expect(state.grid).toEqual(after);
    expect(state.canRedo()).toBe(false);
  });

  it("a new edit clears the redo stack", () => {
    const state = new EditorState(2, 2);
    state.pixelClick(0, 0, "north");
    state.undo();
    state.pixelClick(1, 0, "south");
    expect(state.canRedo()).toBe(false);
  });

  it("tracks the dirty-delta badge against the last plot", () => {
    const state = new EditorState(3, 3);
    expect(state.dirtyDelta()).toBe(0);
    state.pixelClick(0, 0, "north");
    state.pixelClick(1, 1, "south");
    expect(state.dirtyDelta()).toBe(2);
    state.markPlotted();
    expect(state.dirtyDelta()).toBe(0);
  });

  it("single edit after plot produces a one-pixel delta", () => {
    const state = new EditorState(8, 8);
    for (let r = 0; r < 8; r++) {
      for (let c = 0; c < 8; c++) {
        state.pixelClick(r, c, (r + c) % 2 === 0 ? "north" : "south");
      }
    }
    state.markPlotted();
    state.pixelClick(3, 4, "demagnetize");
    const delta = state.deltaDoc();
    const masked = delta.write_mask!.flat().filter(Boolean).length;
    expect(masked).toBe(1);
    expect(delta.write_mask![3][4]).toBe(true);
    expect(delta.values[3][4]).toBe(0);
  });

  it("no edits means a zero-work delta", () => {
    const state = new EditorState(4, 4);
    state.markPlotted();
    const delta = state.deltaDoc();
    expect(delta.write_mask!.flat().every((m) => !m)).toBe(true);
  });

  it("export then import round-trips the grid exactly", () => {
    const state = new EditorState(4, 4, "roundtrip");
    state.pixelClick(0, 0, "north");
    state.pixelClick(3, 1, "south");
    state.pixelClick(2, 2, "north");
    const doc = state.exportDoc();
    const other = EditorState.fromDoc(doc, "copy");
    expect(other.grid).toEqual(state.grid);
    expect(other.exportDoc().values).toEqual(doc.values);
  });

  it("rejects malformed imports", () => {
    const state = new EditorState(2, 2);
    expect(() =>
      state.importDoc({ format_version: 1, rows: 1, cols: 1, values: [[7]], metadata: {} }),
    ).toThrow(/outside/);
    expect(() =>
      state.importDoc({ format_version: 9, rows: 1, cols: 1, values: [[0]], metadata: {} }),
    ).toThrow(/format_version/);
  });
});

describe("Workspace", () => {
  it("opens scan results in a new active tab", () => {
    const ws = new Workspace(4, 4);
    ws.current.pixelClick(0, 0, "north");
    const doc = ws.current.exportDoc();
    ws.addTabFromDoc(doc, "scan 1");
    expect(ws.tabs.length).toBe(2);
    expect(ws.current.name).toBe("scan 1");
    expect(ws.current.grid).toEqual(ws.tabs[0].grid);
  });
});
