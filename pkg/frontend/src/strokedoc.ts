import type { Stroke } from "./strokes.js";

export const STROKE_FORMAT_VERSION = 1;

export interface StrokeDocument {
  version: number;
  strokes: { x: number; y: number }[][];
  color_id: number;
}

export function buildDocument(strokes: Stroke[], colorId: number): StrokeDocument {
  return {
    version: STROKE_FORMAT_VERSION,
    strokes: strokes.map((s) => s.map((p) => ({ x: p.x, y: p.y }))),
    color_id: colorId,
  };
}

export function serializeDocument(doc: StrokeDocument): string {
  return JSON.stringify(doc, null, 2) + "\n";
}
