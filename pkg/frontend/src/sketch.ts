/** Freehand sketch capture: pointer strokes sampled into the polyline
 * payload the query service expects.
 *
 * Canvas pixel coordinates are sent as-is: x maps to time, y grows
 * downward (the service flips it). Consecutive duplicate samples are
 * dropped; a stroke needs at least 2 distinct points to be queryable.
 */
import type { Point } from "./types.js";

export interface Stroke {
  points: Point[];
}

function samePoint(a: Point, b: Point): boolean {
  return a[0] === b[0] && a[1] === b[1];
}

function pointSegmentDistance(px: number, py: number, a: Point, b: Point): number {
  const [ax, ay] = a;
  const [bx, by] = b;
  const dx = bx - ax;
  const dy = by - ay;
  const lengthSq = dx * dx + dy * dy;
  const t = lengthSq === 0 ? 0 : Math.max(0, Math.min(1, ((px - ax) * dx + (py - ay) * dy) / lengthSq));
  return Math.hypot(px - (ax + t * dx), py - (ay + t * dy));
}

function strokeDistance(stroke: Stroke, x: number, y: number): number {
  const pts = stroke.points;
  if (pts.length === 1) return Math.hypot(pts[0]![0] - x, pts[0]![1] - y);
  let best = Infinity;
  for (let i = 1; i < pts.length; i++) {
    best = Math.min(best, pointSegmentDistance(x, y, pts[i - 1]!, pts[i]!));
  }
  return best;
}

export class SketchCapture {
  private strokes: Stroke[] = [];
  private current: Point[] | null = null;

  beginStroke(x: number, y: number): void {
    this.current = [[x, y]];
  }

  extendStroke(x: number, y: number): void {
    if (!this.current) return;
    const last = this.current[this.current.length - 1]!;
    if (!samePoint(last, [x, y])) this.current.push([x, y]);
  }

  endStroke(): void {
    if (!this.current) return;
    this.strokes.push({ points: this.current });
    this.current = null;
  }

  /** Eraser: drop every stroke passing within `radius` of (x, y);
   * returns whether anything was erased. */
  erase(x: number, y: number, radius: number): boolean {
    const before = this.strokes.length;
    this.strokes = this.strokes.filter((s) => strokeDistance(s, x, y) > radius);
    return this.strokes.length < before;
  }

  clear(): void {
    this.strokes = [];
    this.current = null;
  }

  allStrokes(): readonly Stroke[] {
    return this.strokes;
  }

  /** The latest stroke as the query polyline, or null when there is no
   * stroke with >= 2 distinct points (query button disabled). */
  toPayload(): Point[] | null {
    for (let i = this.strokes.length - 1; i >= 0; i--) {
      const pts = this.strokes[i]!.points;
      if (pts.length >= 2) return pts.map((p) => [p[0], p[1]]);
    }
    return null;
  }
}

/** Payload points map back onto the canvas unchanged (identity up to
 * sampling): rendering them overlays the drawn stroke exactly. */
export function payloadToCanvas(points: Point[]): Point[] {
  return points.map((p) => [p[0], p[1]]);
}
