/** Rule-based classification of annotation strokes.
 *
 * - closed stroke (ends near its start, enclosing area) -> circle
 * - two strokes crossing near their midpoints -> cross-out
 * - open stroke whose tail doubles back sharply -> arrow (connector)
 * - anything else -> plain stroke (ignored by the scene builder)
 */
import type { Point } from "./types.js";
import type { Stroke } from "./sketch.js";

export type GlyphKind = "circle" | "cross" | "arrow" | "stroke";

export interface ClassifiedMark {
  kind: GlyphKind;
  strokes: Stroke[];
}

function pathLength(points: Point[]): number {
  let total = 0;
  for (let i = 1; i < points.length; i++) {
    total += Math.hypot(
      points[i]![0] - points[i - 1]![0],
      points[i]![1] - points[i - 1]![1],
    );
  }
  return total;
}

/** Shoelace area of the polygon the stroke traces. */
function enclosedArea(points: Point[]): number {
  let twice = 0;
  for (let i = 0; i < points.length; i++) {
    const [x1, y1] = points[i]!;
    const [x2, y2] = points[(i + 1) % points.length]!;
    twice += x1 * y2 - x2 * y1;
  }
  return Math.abs(twice) / 2;
}

export function centroid(points: Point[]): Point {
  let sx = 0;
  let sy = 0;
  for (const [x, y] of points) {
    sx += x;
    sy += y;
  }
  return [sx / points.length, sy / points.length];
}

function isClosed(points: Point[]): boolean {
  if (points.length < 4) return false;
  const length = pathLength(points);
  if (length === 0) return false;
  const first = points[0]!;
  const last = points[points.length - 1]!;
  const gap = Math.hypot(last[0] - first[0], last[1] - first[1]);
  // closed when the endpoint gap is small relative to the stroke and
  // the stroke actually encloses area (rules out a doubled-back line)
  return gap <= 0.2 * length && enclosedArea(points) >= 0.02 * length * length;
}

/** Interior angle at the stroke's sharpest tail vertex, in radians. */
function sharpestTailAngle(points: Point[]): number {
  const tailStart = Math.max(1, Math.floor(points.length * 0.6));
  let sharpest = Math.PI;
  for (let i = tailStart; i < points.length - 1; i++) {
    const [ax, ay] = points[i - 1]!;
    const [bx, by] = points[i]!;
    const [cx, cy] = points[i + 1]!;
    const v1 = [ax - bx, ay - by];
    const v2 = [cx - bx, cy - by];
    const n1 = Math.hypot(v1[0]!, v1[1]!);
    const n2 = Math.hypot(v2[0]!, v2[1]!);
    if (n1 === 0 || n2 === 0) continue;
    const cos = (v1[0]! * v2[0]! + v1[1]! * v2[1]!) / (n1 * n2);
    sharpest = Math.min(sharpest, Math.acos(Math.max(-1, Math.min(1, cos))));
  }
  return sharpest;
}

function segmentsIntersect(a1: Point, a2: Point, b1: Point, b2: Point): boolean {
  const cross = (o: Point, p: Point, q: Point) =>
    (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]);
  const onSegment = (o: Point, p: Point, q: Point) =>
    Math.min(o[0], p[0]) <= q[0] && q[0] <= Math.max(o[0], p[0]) &&
    Math.min(o[1], p[1]) <= q[1] && q[1] <= Math.max(o[1], p[1]);
  const d1 = cross(b1, b2, a1);
  const d2 = cross(b1, b2, a2);
  const d3 = cross(a1, a2, b1);
  const d4 = cross(a1, a2, b2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  // touching cases: an endpoint of one segment lies on the other,
  // which happens whenever the crossing coincides with a sample
  if (d1 === 0 && onSegment(b1, b2, a1)) return true;
  if (d2 === 0 && onSegment(b1, b2, a2)) return true;
  if (d3 === 0 && onSegment(a1, a2, b1)) return true;
  if (d4 === 0 && onSegment(a1, a2, b2)) return true;
  return false;
}

function strokesCross(a: Stroke, b: Stroke): boolean {
  for (let i = 1; i < a.points.length; i++) {
    for (let j = 1; j < b.points.length; j++) {
      if (segmentsIntersect(a.points[i - 1]!, a.points[i]!, b.points[j - 1]!, b.points[j]!)) {
        return true;
      }
    }
  }
  return false;
}

export function classifyStroke(stroke: Stroke): GlyphKind {
  const pts = stroke.points;
  if (pts.length < 2) return "stroke";
  if (isClosed(pts)) return "circle";
  // an arrowhead is a sharp (< 60 deg) turn near the end of an open stroke
  if (pts.length >= 3 && sharpestTailAngle(pts) < Math.PI / 3) return "arrow";
  return "stroke";
}

/** Group raw annotation strokes into marks: pairs of open strokes that
 * cross each other become one cross-out; everything else is classified
 * individually. */
export function classifyMarks(strokes: Stroke[]): ClassifiedMark[] {
  const marks: ClassifiedMark[] = [];
  const used = new Set<number>();
  for (let i = 0; i < strokes.length; i++) {
    if (used.has(i)) continue;
    const kind = classifyStroke(strokes[i]!);
    if (kind === "stroke") {
      for (let j = i + 1; j < strokes.length; j++) {
        if (used.has(j)) continue;
        if (classifyStroke(strokes[j]!) === "stroke" && strokesCross(strokes[i]!, strokes[j]!)) {
          marks.push({ kind: "cross", strokes: [strokes[i]!, strokes[j]!] });
          used.add(i);
          used.add(j);
          break;
        }
      }
      if (used.has(i)) continue;
    }
    marks.push({ kind, strokes: [strokes[i]!] });
    used.add(i);
  }
  return marks;
}
