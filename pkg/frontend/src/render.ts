/** Pure render model: service responses in, drawable overlay out.
 * Rendering is a pure function of the response, so replaying the same
 * request yields the same overlay. */
import type { Match, Point, SignalPoints } from "./types.js";

export interface OverlayPolyline {
  signalId: string;
  score: number;
  points: Point[];
  /** Signal segment indices covered by the alignment's matches. */
  matchedSignalSegments: number[];
}

export interface Overlay {
  state: "results" | "no-matches";
  polylines: OverlayPolyline[];
}

/** Map a signal's points onto canvas pixels the same way the engine's
 * local normalization reads a sketch: x spans the canvas over the
 * signal's time range, y grows downward with larger values higher. */
export function signalToCanvas(
  signal: SignalPoints,
  width: number,
  height: number,
  measure = 0,
): Point[] {
  const t0 = signal.t[0]!;
  const t1 = signal.t[signal.t.length - 1]!;
  const values = signal.y.map((row) => row[measure]!);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const tSpan = t1 - t0 || 1;
  const vSpan = hi - lo || 1;
  return signal.t.map((t, i) => [
    ((t - t0) / tSpan) * width,
    (1 - (values[i]! - lo) / vSpan) * height,
  ]);
}

export function buildOverlay(
  matches: Match[],
  pointsById: Map<string, SignalPoints>,
  width: number,
  height: number,
): Overlay {
  if (matches.length === 0) return { state: "no-matches", polylines: [] };
  const polylines: OverlayPolyline[] = [];
  for (const match of matches) {
    const signal = pointsById.get(match.signal_id);
    if (!signal) continue;
    polylines.push({
      signalId: match.signal_id,
      score: match.score,
      points: signalToCanvas(signal, width, height),
      matchedSignalSegments: match.alignment.matches.map(([, j]) => j),
    });
  }
  return { state: "results", polylines };
}

export function formatScore(score: number): string {
  return score < 1e-9 ? "0" : score.toFixed(3);
}
