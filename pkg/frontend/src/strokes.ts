import type { NormPoint } from "./geometry.js";

export type Stroke = NormPoint[];

export function pathLength(stroke: Stroke): number {
  let total = 0;
  for (let i = 1; i < stroke.length; i++) {
    const a = stroke[i - 1]!;
    const b = stroke[i]!;
    total += Math.hypot(b.x - a.x, b.y - a.y);
  }
  return total;
}

// Turns pointer-down...move...up sequences into strokes of normalized
// points. Consecutive duplicate samples are dropped; strokes with no
// extent (taps) are discarded on end().
export class StrokeRecorder {
  private finished: Stroke[] = [];
  private current: NormPoint[] | null = null;

  begin(p: NormPoint): void {
    this.current = [p];
  }

  extend(p: NormPoint): void {
    if (!this.current) return;
    const last = this.current[this.current.length - 1]!;
    if (last.x === p.x && last.y === p.y) return;
    this.current.push(p);
  }

  end(): void {
    const stroke = this.current;
    this.current = null;
    if (!stroke || pathLength(stroke) === 0) return;
    this.finished.push(stroke);
  }

  cancel(): void {
    this.current = null;
  }

  get drawing(): boolean {
    return this.current !== null;
  }

  currentPoints(): NormPoint[] {
    return this.current ? this.current.slice() : [];
  }

  all(): Stroke[] {
    return this.finished.map((s) => s.slice());
  }

  count(): number {
    return this.finished.length;
  }

  clear(): void {
    this.finished = [];
    this.current = null;
  }
}
