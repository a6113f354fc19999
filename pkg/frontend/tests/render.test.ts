import { describe, expect, it } from "vitest";

import { buildOverlay, formatScore, signalToCanvas } from "../src/render.js";
import type { Match, SignalPoints } from "../src/types.js";

const SIGNAL: SignalPoints = {
  id: "s1",
  t: [0, 10, 20],
  y: [[0], [10], [5]],
};

function match(id: string, score: number): Match {
  return {
    signal_id: id,
    score,
    alignment: { score, matches: [[0, 0], [1, 1]], skipped_interior: [], skipped_boundary: [] },
  };
}

describe("signalToCanvas", () => {
  it("spans the canvas and flips y", () => {
    const pts = signalToCanvas(SIGNAL, 100, 50);
    expect(pts[0]).toEqual([0, 50]);   // min value at the bottom
    expect(pts[1]).toEqual([50, 0]);   // max value at the top
    expect(pts[2]).toEqual([100, 25]);
  });

  it("a constant signal stays on one horizontal line", () => {
    const flat: SignalPoints = { id: "f", t: [0, 1], y: [[3], [3]] };
    const pts = signalToCanvas(flat, 100, 50);
    expect(pts[0]![1]).toBe(pts[1]![1]);
  });
});

describe("buildOverlay", () => {
  it("empty matches render the no-matches state", () => {
    const overlay = buildOverlay([], new Map(), 100, 50);
    expect(overlay.state).toBe("no-matches");
    expect(overlay.polylines).toHaveLength(0);
  });

  it("k matches become k polylines in score order", () => {
    const points = new Map([
      ["a", SIGNAL],
      ["b", { ...SIGNAL, id: "b" }],
      ["c", { ...SIGNAL, id: "c" }],
    ]);
    const overlay = buildOverlay([match("a", 0), match("b", 0.3), match("c", 0.9)], points, 100, 50);
    expect(overlay.state).toBe("results");
    expect(overlay.polylines.map((p) => p.signalId)).toEqual(["a", "b", "c"]);
    const scores = overlay.polylines.map((p) => p.score);
    expect([...scores].sort((x, y) => x - y)).toEqual(scores);
    expect(overlay.polylines[0]!.matchedSignalSegments).toEqual([0, 1]);
  });

  it("is a pure function of the response", () => {
    const points = new Map([["a", SIGNAL]]);
    const first = buildOverlay([match("a", 0.5)], points, 100, 50);
    const second = buildOverlay([match("a", 0.5)], points, 100, 50);
    expect(second).toEqual(first);
  });
});

describe("formatScore", () => {
  it("treats sub-1e-9 as exactly zero", () => {
    expect(formatScore(1e-12)).toBe("0");
    expect(formatScore(0.1234)).toBe("0.123");
  });
});
