export interface GridSize {
  cols: number;
  rows: number;
}

export interface GridMetrics {
  cols: number;
  rows: number;
  left: number;
  top: number;
  width: number;
  height: number;
}

export interface NormPoint {
  x: number;
  y: number;
}

export const GRID_PADDING = 16;

export function gridMetrics(
  grid: GridSize,
  canvasWidth: number,
  canvasHeight: number,
  padding = GRID_PADDING,
): GridMetrics {
  const usableW = Math.max(canvasWidth - 2 * padding, 1);
  const usableH = Math.max(canvasHeight - 2 * padding, 1);
  const cell = Math.min(usableW / grid.cols, usableH / grid.rows);
  const width = cell * grid.cols;
  const height = cell * grid.rows;
  return {
    cols: grid.cols,
    rows: grid.rows,
    left: (canvasWidth - width) / 2,
    top: (canvasHeight - height) / 2,
    width,
    height,
  };
}

export function cellSide(m: GridMetrics): number {
  return m.width / m.cols;
}

// Pixel position -> fraction of the grid bounds. Clamped so a drag that
// slips past the border still yields a valid on-grid coordinate; the server
// rejects anything outside [0, 1].
export function normalizePoint(m: GridMetrics, px: number, py: number): NormPoint {
  return {
    x: clamp((px - m.left) / m.width, 0, 1),
    y: clamp((py - m.top) / m.height, 0, 1),
  };
}

export function denormalizePoint(m: GridMetrics, p: NormPoint): { x: number; y: number } {
  return { x: m.left + p.x * m.width, y: m.top + p.y * m.height };
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(Math.max(v, lo), hi);
}
