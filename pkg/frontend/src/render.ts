import { denormalizePoint } from "./geometry.js";
import type { GridMetrics, NormPoint } from "./geometry.js";
import type { PaletteColor } from "./api.js";
import type { Stroke } from "./strokes.js";

// Only the drawing grid is ever rendered; the stored record's extra cells
// have no client-side representation at all.
export function drawScene(
  ctx: CanvasRenderingContext2D,
  viewWidth: number,
  viewHeight: number,
  metrics: GridMetrics,
  strokes: Stroke[],
  currentPoints: NormPoint[],
  color: string,
): void {
  ctx.clearRect(0, 0, viewWidth, viewHeight);

  ctx.strokeStyle = "#c8c8d0";
  ctx.lineWidth = 1;
  const cellW = metrics.width / metrics.cols;
  const cellH = metrics.height / metrics.rows;
  for (let i = 0; i <= metrics.cols; i++) {
    const x = metrics.left + i * cellW;
    ctx.beginPath();
    ctx.moveTo(x, metrics.top);
    ctx.lineTo(x, metrics.top + metrics.height);
    ctx.stroke();
  }
  for (let j = 0; j <= metrics.rows; j++) {
    const y = metrics.top + j * cellH;
    ctx.beginPath();
    ctx.moveTo(metrics.left, y);
    ctx.lineTo(metrics.left + metrics.width, y);
    ctx.stroke();
  }

  ctx.strokeStyle = color;
  ctx.lineWidth = 3;
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  for (const stroke of [...strokes, currentPoints]) {
    if (stroke.length === 0) continue;
    ctx.beginPath();
    const start = denormalizePoint(metrics, stroke[0]!);
    ctx.moveTo(start.x, start.y);
    for (const p of stroke.slice(1)) {
      const q = denormalizePoint(metrics, p);
      ctx.lineTo(q.x, q.y);
    }
    if (stroke.length === 1) ctx.lineTo(start.x, start.y);
    ctx.stroke();
  }
}

export function renderPalette(
  container: HTMLElement,
  palette: PaletteColor[],
  selectedId: number,
  onPick: (id: number) => void,
): void {
  container.replaceChildren();
  for (const color of palette) {
    const swatch = document.createElement("button");
    swatch.type = "button";
    swatch.className = "swatch" + (color.id === selectedId ? " selected" : "");
    swatch.style.backgroundColor = color.value;
    swatch.title = color.name;
    swatch.setAttribute("aria-pressed", color.id === selectedId ? "true" : "false");
    swatch.addEventListener("click", () => onPick(color.id));
    container.appendChild(swatch);
  }
}
