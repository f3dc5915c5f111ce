import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { buildHeatmap, cellAt, divergingColor, pixelColor } from "../src/heatmap.js";
import type { MapDoc } from "../src/types.js";

// real backend output for H8 cross-correlated with its complement
const h8Map: MapDoc = JSON.parse(
  readFileSync(new URL("./fixtures/h8_map.json", import.meta.url), "utf-8"),
);

describe("buildHeatmap", () => {
  it("passes backend ncc values through untouched", () => {
    const model = buildHeatmap(h8Map);
    for (let r = 0; r < model.rows; r++) {
      for (let c = 0; c < model.cols; c++) {
        expect(model.cells[r][c].ncc).toBe(h8Map.ncc[r][c]);
      }
    }
  });

  it("center cell is exactly -1 and axis offsets exactly 0", () => {
    const model = buildHeatmap(h8Map);
    expect(cellAt(model, 0, 0).ncc).toBe(-1);
    for (let shift = 1; shift <= 7; shift++) {
      expect(cellAt(model, shift, 0).ncc).toBe(0);
      expect(cellAt(model, -shift, 0).ncc).toBe(0);
      expect(cellAt(model, 0, shift).ncc).toBe(0);
      expect(cellAt(model, 0, -shift).ncc).toBe(0);
    }
  });

  it("exposes backend force values for hover", () => {
    const model = buildHeatmap(h8Map);
    const center = cellAt(model, 0, 0);
    expect(center.forceN).toBeCloseTo(-1.09, 9);
    expect(center.overlap).toBe(64);
    expect(model.tooltip(center)).toContain("ncc -1.000");
    expect(model.tooltip(center)).toContain("-1.090 N");
  });

  it("is sized by the offset ranges", () => {
    const model = buildHeatmap(h8Map);
    expect(model.rows).toBe(15);
    expect(model.cols).toBe(15);
    expect(model.dxMin).toBe(-7);
    expect(model.dyMin).toBe(-7);
  });
});

describe("divergingColor", () => {
  it("saturates blue at -1, white at 0, red at +1", () => {
    expect(divergingColor(-1)).toBe("rgb(37, 99, 235)");
    expect(divergingColor(0)).toBe("rgb(255, 255, 255)");
    expect(divergingColor(1)).toBe("rgb(220, 38, 38)");
  });

  it("interpolates monotonically toward the endpoints", () => {
    const red = (c: string) => Number(c.match(/rgb\((\d+)/)![1]);
    expect(red(divergingColor(-0.5))).toBeGreaterThan(red(divergingColor(-1)));
    expect(red(divergingColor(-0.5))).toBeLessThan(red(divergingColor(0)));
  });

  it("clamps out-of-range values", () => {
    expect(divergingColor(-2)).toBe(divergingColor(-1));
    expect(divergingColor(5)).toBe(divergingColor(1));
  });
});

describe("pixelColor", () => {
  it("distinguishes north, south, and demagnetized", () => {
    const north = pixelColor(1);
    const south = pixelColor(-1);
    const zero = pixelColor(0);
    expect(new Set([north, south, zero]).size).toBe(3);
  });
});
