import { ApiClient } from "./api.js";
import type { ServerConfig } from "./api.js";
import { gridMetrics, normalizePoint } from "./geometry.js";
import type { GridMetrics } from "./geometry.js";
import { drawScene, renderPalette } from "./render.js";
import { CanvasSession } from "./session.js";
import type { Mode } from "./session.js";

const canvas = document.getElementById("pad") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const usernameInput = document.getElementById("username") as HTMLInputElement;
const modeSelect = document.getElementById("mode") as HTMLSelectElement;
const paletteEl = document.getElementById("palette")!;
const messageEl = document.getElementById("message")!;
const submitButton = document.getElementById("submit") as HTMLButtonElement;
const exportButton = document.getElementById("export") as HTMLButtonElement;
const retryButton = document.getElementById("retry") as HTMLButtonElement;

const api = new ApiClient("");
const session = new CanvasSession(api, refresh);

let config: ServerConfig | null = null;
let metrics: GridMetrics | null = null;
let viewWidth = 0;
let viewHeight = 0;

function refresh(): void {
  if (metrics && config) {
    const selected = config.palette.find((c) => c.id === session.colorId);
    drawScene(
      ctx,
      viewWidth,
      viewHeight,
      metrics,
      session.strokes(),
      session.recorder.currentPoints(),
      selected?.value ?? "#000000",
    );
    renderPalette(paletteEl, config.palette, session.colorId, (id) => {
      session.colorId = id;
      refresh();
    });
  }
  messageEl.textContent = session.status.text;
  messageEl.dataset.kind = session.status.kind;
  submitButton.disabled = session.pending || config === null;
  submitButton.textContent = session.mode === "register" ? "Register" : "Log in";
}

function resize(): void {
  const rect = canvas.getBoundingClientRect();
  const dpr = window.devicePixelRatio || 1;
  viewWidth = rect.width;
  viewHeight = rect.height;
  canvas.width = Math.round(rect.width * dpr);
  canvas.height = Math.round(rect.height * dpr);
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  if (config) metrics = gridMetrics(config.grid, viewWidth, viewHeight);
  refresh();
}

function localPoint(e: PointerEvent): { x: number; y: number } {
  const rect = canvas.getBoundingClientRect();
  return { x: e.clientX - rect.left, y: e.clientY - rect.top };
}

canvas.addEventListener("pointerdown", (e) => {
  if (!metrics || session.pending) return;
  e.preventDefault();
  canvas.setPointerCapture(e.pointerId);
  const p = localPoint(e);
  session.recorder.begin(normalizePoint(metrics, p.x, p.y));
  refresh();
});

canvas.addEventListener("pointermove", (e) => {
  if (!metrics || !session.recorder.drawing) return;
  const p = localPoint(e);
  session.recorder.extend(normalizePoint(metrics, p.x, p.y));
  refresh();
});

canvas.addEventListener("pointerup", () => {
  session.recorder.end();
  refresh();
});

canvas.addEventListener("pointercancel", () => {
  session.recorder.cancel();
  refresh();
});

usernameInput.addEventListener("input", () => {
  session.username = usernameInput.value;
});

modeSelect.addEventListener("change", () => {
  session.mode = modeSelect.value as Mode;
  refresh();
});

submitButton.addEventListener("click", () => {
  void session.submit();
});

exportButton.addEventListener("click", () => {
  const doc = session.exportDocument();
  if (doc === null) {
    messageEl.textContent = "Nothing to export; draw a signature first.";
    return;
  }
  const blob = new Blob([doc], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = "signature.json";
  link.click();
  URL.revokeObjectURL(url);
});

retryButton.addEventListener("click", () => {
  void loadConfig();
});

async function loadConfig(): Promise<void> {
  retryButton.hidden = true;
  messageEl.textContent = "Loading...";
  try {
    config = await api.getConfig();
    session.applyConfig(config);
    messageEl.textContent = "";
    resize();
  } catch {
    messageEl.textContent = "Could not load the drawing settings.";
    retryButton.hidden = false;
  }
}

window.addEventListener("resize", resize);
void loadConfig();
