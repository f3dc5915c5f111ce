/** Design studio wiring: editor canvas, preview heatmap, device jobs. */

import { ApiClient, ApiError } from "./api.js";
import { EditorState, Workspace } from "./editor.js";
import { complementGrid, gridsEqual, toPatternDoc } from "./grid.js";
import type { Grid } from "./grid.js";
import { buildHeatmap, divergingColor, pixelColor } from "./heatmap.js";
import type { HeatmapModel } from "./heatmap.js";
import { pollJob, progressLabel } from "./jobs.js";
import type { Assignment, PatternDoc, Tool } from "./types.js";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("backend") ?? "http://localhost:8000");
const workspace = new Workspace(8, 8);
const DEVICE = params.get("device") ?? "dev0";

const CELL_PX = 36;
const MAP_CELL_PX = 22;

let heatmap: HeatmapModel | null = null;
let heatmapStale = false;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const editorCanvas = $<HTMLCanvasElement>("editor-canvas");
const mapCanvas = $<HTMLCanvasElement>("map-canvas");
const banner = $<HTMLDivElement>("banner");
const hoverLabel = $<HTMLDivElement>("map-hover");
const jobLabel = $<HTMLDivElement>("job-status");
const dirtyBadge = $<HTMLSpanElement>("dirty-badge");
const tabBar = $<HTMLDivElement>("tab-bar");

function showError(message: string): void {
  banner.textContent = message;
  banner.classList.add("visible");
}

function clearError(): void {
  banner.textContent = "";
  banner.classList.remove("visible");
}

function editor(): EditorState {
  return workspace.current;
}

// --- rendering -------------------------------------------------------------

function renderTabs(): void {
  tabBar.replaceChildren(
    ...workspace.tabs.map((tab, i) => {
      const el = document.createElement("button");
      el.textContent = tab.name;
      el.className = i === workspace.active ? "tab active" : "tab";
      el.onclick = () => {
        workspace.active = i;
        renderAll();
      };
      return el;
    }),
  );
}

function renderEditor(): void {
  const state = editor();
  editorCanvas.width = state.cols * CELL_PX;
  editorCanvas.height = state.rows * CELL_PX;
  const ctx = editorCanvas.getContext("2d")!;
  for (let r = 0; r < state.rows; r++) {
    for (let c = 0; c < state.cols; c++) {
      ctx.fillStyle = pixelColor(state.grid[r][c]);
      ctx.fillRect(c * CELL_PX, r * CELL_PX, CELL_PX, CELL_PX);
      ctx.strokeStyle = "#475569";
      ctx.strokeRect(c * CELL_PX + 0.5, r * CELL_PX + 0.5, CELL_PX - 1, CELL_PX - 1);
    }
  }
  dirtyBadge.textContent = `${state.dirtyDelta()} changed`;
  ($<HTMLButtonElement>("btn-undo")).disabled = !state.canUndo();
  ($<HTMLButtonElement>("btn-redo")).disabled = !state.canRedo();
}

function renderHeatmap(): void {
  const ctx = mapCanvas.getContext("2d")!;
  if (!heatmap) {
    mapCanvas.width = 340;
    mapCanvas.height = 40;
    ctx.fillStyle = "#64748b";
    ctx.font = "13px sans-serif";
    ctx.fillText("no prediction yet: press Preview", 8, 24);
    return;
  }
  mapCanvas.width = heatmap.cols * MAP_CELL_PX;
  mapCanvas.height = heatmap.rows * MAP_CELL_PX;
  for (const row of heatmap.cells) {
    for (const cell of row) {
      const x = (cell.dx - heatmap.dxMin) * MAP_CELL_PX;
      const y = (cell.dy - heatmap.dyMin) * MAP_CELL_PX;
      ctx.fillStyle = cell.color;
      ctx.fillRect(x, y, MAP_CELL_PX, MAP_CELL_PX);
      if (cell.dx === 0 && cell.dy === 0) {
        ctx.strokeStyle = "#0f172a";
        ctx.strokeRect(x + 1, y + 1, MAP_CELL_PX - 2, MAP_CELL_PX - 2);
      }
    }
  }
  mapCanvas.style.opacity = heatmapStale ? "0.45" : "1";
  $<HTMLSpanElement>("map-stale").textContent = heatmapStale ? "stale" : "";
}

function renderLegend(): void {
  const legend = $<HTMLCanvasElement>("legend");
  const ctx = legend.getContext("2d")!;
  for (let x = 0; x < legend.width; x++) {
    ctx.fillStyle = divergingColor((x / (legend.width - 1)) * 2 - 1);
    ctx.fillRect(x, 0, 1, legend.height);
  }
}

function renderAll(): void {
  renderTabs();
  renderEditor();
  renderHeatmap();
}

// --- editor interaction ------------------------------------------------------

editorCanvas.addEventListener("click", (ev) => {
  const rect = editorCanvas.getBoundingClientRect();
  const col = Math.floor((ev.clientX - rect.left) / CELL_PX);
  const row = Math.floor((ev.clientY - rect.top) / CELL_PX);
  const state = editor();
  if (row < 0 || col < 0 || row >= state.rows || col >= state.cols) return;
  state.pixelClick(row, col);
  heatmapStale = heatmap !== null;
  renderAll();
});

mapCanvas.addEventListener("mousemove", (ev) => {
  if (!heatmap) return;
  const rect = mapCanvas.getBoundingClientRect();
  const c = Math.floor((ev.clientX - rect.left) / MAP_CELL_PX);
  const r = Math.floor((ev.clientY - rect.top) / MAP_CELL_PX);
  if (r < 0 || c < 0 || r >= heatmap.rows || c >= heatmap.cols) return;
  hoverLabel.textContent = heatmap.tooltip(heatmap.cells[r][c]);
});

for (const tool of ["north", "south", "demagnetize"] as Tool[]) {
  $<HTMLButtonElement>(`tool-${tool}`).onclick = () => {
    editor().tool = tool;
    document.querySelectorAll(".tool").forEach((el) => el.classList.remove("active"));
    $(`tool-${tool}`).classList.add("active");
  };
}

$<HTMLButtonElement>("btn-undo").onclick = () => {
  editor().undo();
  heatmapStale = heatmap !== null;
  renderAll();
};
$<HTMLButtonElement>("btn-redo").onclick = () => {
  editor().redo();
  heatmapStale = heatmap !== null;
  renderAll();
};

$<HTMLButtonElement>("btn-new").onclick = () => {
  const size = Number($<HTMLInputElement>("grid-size").value) || 8;
  workspace.addTab(new EditorState(size, size, `pattern ${workspace.tabs.length + 1}`));
  renderAll();
};

$<HTMLButtonElement>("btn-hadamard").onclick = async () => {
  clearError();
  try {
    const order = Number($<HTMLInputElement>("grid-size").value) || 8;
    const doc = await api.hadamard(order, `hadamard-${order}`);
    editor().importDoc(doc);
    renderAll();
  } catch (err) {
    showError(err instanceof ApiError ? err.message : String(err));
  }
};

// --- import / export -----------------------------------------------------------

$<HTMLButtonElement>("btn-export").onclick = () => {
  const doc = editor().exportDoc();
  const blob = new Blob([JSON.stringify(doc, null, 2)], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = `${editor().name}.mixel.json`;
  a.click();
  URL.revokeObjectURL(a.href);
};

$<HTMLInputElement>("file-import").addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  clearError();
  try {
    const doc = JSON.parse(await file.text()) as PatternDoc;
    workspace.addTabFromDoc(doc, file.name.replace(/\.mixel\.json$/, ""));
    renderAll();
  } catch (err) {
    showError(`import failed: ${String(err)}`);
  } finally {
    input.value = "";
  }
});

// --- prediction ------------------------------------------------------------------

async function requestPreview(targetGrid: Grid): Promise<void> {
  clearError();
  const state = editor();
  state.previewTarget = targetGrid;
  try {
    const doc = await api.predictMap(toPatternDoc(state.grid), toPatternDoc(targetGrid));
    heatmap = buildHeatmap(doc);
    heatmapStale = false;
  } catch (err) {
    heatmapStale = heatmap !== null;
    showError(err instanceof ApiError ? err.message : String(err));
  }
  renderAll();
}

$<HTMLButtonElement>("btn-preview").onclick = () => requestPreview(complementGrid(editor().grid));
$<HTMLButtonElement>("btn-preview-self").onclick = () => requestPreview(editor().grid);

// --- device jobs --------------------------------------------------------------------

async function runJob(kind: "plot-delta" | "plot-full" | "scan"): Promise<void> {
  clearError();
  const state = editor();
  state.deviceId = DEVICE;
  try {
    let job;
    if (kind === "scan") {
      job = await api.scan(DEVICE, state.rows, state.cols);
    } else {
      const doc = kind === "plot-delta" ? state.deltaDoc() : state.fullDoc();
      job = await api.plot(DEVICE, doc);
    }
    jobLabel.textContent = progressLabel(job);
    const done = await pollJob(api, job.id, {
      intervalMs: 120,
      onProgress: (j) => {
        jobLabel.textContent = progressLabel(j);
      },
    });
    if (done.state === "failed") {
      showError(`job failed: ${done.error}`);
      return;
    }
    if (kind === "scan") {
      const pattern = (done.result as { pattern: PatternDoc }).pattern;
      workspace.addTabFromDoc(pattern, `scan ${new Date().toLocaleTimeString()}`);
    } else {
      state.markPlotted();
    }
    renderAll();
  } catch (err) {
    showError(err instanceof ApiError ? err.message : String(err));
  }
}

$<HTMLButtonElement>("btn-plot-delta").onclick = () => runJob("plot-delta");
$<HTMLButtonElement>("btn-plot-full").onclick = () => runJob("plot-full");
$<HTMLButtonElement>("btn-scan").onclick = () => runJob("scan");

// --- pair generation -----------------------------------------------------------------

function gridThumbnail(grid: Grid, cellPx = 14): HTMLCanvasElement {
  const canvas = document.createElement("canvas");
  canvas.width = grid[0].length * cellPx;
  canvas.height = grid.length * cellPx;
  const ctx = canvas.getContext("2d")!;
  grid.forEach((row, r) =>
    row.forEach((v, c) => {
      ctx.fillStyle = pixelColor(v);
      ctx.fillRect(c * cellPx, r * cellPx, cellPx, cellPx);
    }),
  );
  return canvas;
}

$<HTMLButtonElement>("btn-pairs").onclick = async () => {
  clearError();
  const container = $<HTMLDivElement>("pairs-output");
  container.replaceChildren();
  try {
    const k = Number($<HTMLInputElement>("pairs-k").value) || 2;
    const seed = Number($<HTMLInputElement>("pairs-seed").value) || 0;
    const out = await api.pairs(k, 8, 64, "attract", seed);
    out.pairs.forEach((pair, i) => {
      const row = document.createElement("div");
      row.className = "pair-row";
      const label = document.createElement("span");
      const isComplement = gridsEqual(pair.lock.values, complementGrid(pair.key.values));
      label.textContent = `pair ${i} ${isComplement ? "(lock = complement)" : "(MISMATCH!)"}`;
      row.append(gridThumbnail(pair.key.values), gridThumbnail(pair.lock.values), label);
      container.append(row);
    });
    const score = document.createElement("div");
    score.textContent = `worst cross-pair |ncc| = ${out.stats.max_cross_ncc.toFixed(3)}`;
    container.append(score);
  } catch (err) {
    showError(err instanceof ApiError ? err.message : String(err));
  }
};

// --- canvas (metapixel) mode ------------------------------------------------------------

const ASSIGNMENT_CYCLE: Assignment[] = ["agnostic", "attract", "repel"];
let metaAssignments: Assignment[][] = Array.from({ length: 2 }, () =>
  Array<Assignment>(2).fill("agnostic"),
);

function renderMetaGrid(): void {
  const container = $<HTMLDivElement>("meta-grid");
  container.replaceChildren();
  metaAssignments.forEach((row, r) => {
    const rowEl = document.createElement("div");
    rowEl.className = "meta-row";
    row.forEach((assignment, c) => {
      const cell = document.createElement("button");
      cell.className = `meta-cell ${assignment}`;
      cell.title = assignment;
      cell.onclick = () => {
        const next =
          ASSIGNMENT_CYCLE[(ASSIGNMENT_CYCLE.indexOf(assignment) + 1) % ASSIGNMENT_CYCLE.length];
        metaAssignments[r][c] = next;
        renderMetaGrid();
      };
      rowEl.append(cell);
    });
    container.append(rowEl);
  });
}

$<HTMLButtonElement>("btn-canvas").onclick = async () => {
  clearError();
  try {
    const out = await api.canvas(editor().exportDoc(), metaAssignments);
    workspace.addTabFromDoc(out.canvas, "canvas");
    renderAll();
  } catch (err) {
    showError(err instanceof ApiError ? err.message : String(err));
  }
};

$<HTMLButtonElement>("btn-meta-reset").onclick = () => {
  const rows = Number($<HTMLInputElement>("meta-rows").value) || 2;
  const cols = Number($<HTMLInputElement>("meta-cols").value) || 2;
  metaAssignments = Array.from({ length: rows }, () => Array<Assignment>(cols).fill("agnostic"));
  renderMetaGrid();
};

// --- boot -----------------------------------------------------------------------------

renderLegend();
renderMetaGrid();
renderAll();
