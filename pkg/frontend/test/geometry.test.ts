import { describe, expect, it } from "vitest";
import { cellSide, denormalizePoint, gridMetrics, normalizePoint } from "../src/geometry.js";

describe("gridMetrics", () => {
  it("keeps cells square and centers the grid", () => {
    const m = gridMetrics({ cols: 7, rows: 7 }, 480, 360, 16);
    const cellW = m.width / m.cols;
    const cellH = m.height / m.rows;
    expect(cellW).toBeCloseTo(cellH, 10);
    expect(m.left).toBeCloseTo(480 - (m.left + m.width), 10);
    expect(m.top).toBeCloseTo(360 - (m.top + m.height), 10);
    expect(cellSide(m)).toBeCloseTo(cellW, 10);
  });

  it("fits inside the padded area", () => {
    const m = gridMetrics({ cols: 5, rows: 6 }, 300, 300, 20);
    expect(m.left).toBeGreaterThanOrEqual(20);
    expect(m.top).toBeGreaterThanOrEqual(20);
    expect(m.left + m.width).toBeLessThanOrEqual(280);
    expect(m.top + m.height).toBeLessThanOrEqual(280);
  });
});

describe("normalizePoint", () => {
  it("maps grid corners to 0 and 1", () => {
    const m = gridMetrics({ cols: 7, rows: 7 }, 400, 400);
    expect(normalizePoint(m, m.left, m.top)).toEqual({ x: 0, y: 0 });
    const br = normalizePoint(m, m.left + m.width, m.top + m.height);
    expect(br.x).toBeCloseTo(1, 12);
    expect(br.y).toBeCloseTo(1, 12);
  });

  it("clamps points dragged past the border", () => {
    const m = gridMetrics({ cols: 7, rows: 7 }, 400, 400);
    expect(normalizePoint(m, -50, -50)).toEqual({ x: 0, y: 0 });
    expect(normalizePoint(m, 10_000, 10_000)).toEqual({ x: 1, y: 1 });
  });

  it("is unchanged by canvas resize for the same grid-relative gesture", () => {
    const grid = { cols: 7, rows: 7 };
    const small = gridMetrics(grid, 320, 240);
    const large = gridMetrics(grid, 1280, 900);
    const gesture = [
      { x: 0.1, y: 0.1 },
      { x: 0.93, y: 0.87 },
      { x: 0.5, y: 0.02 },
      { x: 0.0, y: 1.0 },
    ];
    for (const f of gesture) {
      const a = normalizePoint(small, small.left + f.x * small.width, small.top + f.y * small.height);
      const b = normalizePoint(large, large.left + f.x * large.width, large.top + f.y * large.height);
      expect(a.x).toBeCloseTo(b.x, 12);
      expect(a.y).toBeCloseTo(b.y, 12);
      expect(a.x).toBeCloseTo(f.x, 12);
      expect(a.y).toBeCloseTo(f.y, 12);
    }
  });

  it("round-trips through denormalizePoint", () => {
    const m = gridMetrics({ cols: 7, rows: 7 }, 444, 333);
    const p = { x: 0.37, y: 0.81 };
    const px = denormalizePoint(m, p);
    const back = normalizePoint(m, px.x, px.y);
    expect(back.x).toBeCloseTo(p.x, 12);
    expect(back.y).toBeCloseTo(p.y, 12);
  });
});
