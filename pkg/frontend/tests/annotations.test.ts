import { describe, expect, it } from "vitest";

import {
  annotationsToScene,
  defaultSpaces,
  resolutionToConstraint,
  type AnnotationInput,
  type RegionRange,
} from "../src/annotations.js";

const SCHEMA_FIELDS = ["time", "name", "wind"];

function input(partial: Partial<AnnotationInput>): AnnotationInput {
  return { strokes: [], texts: [], regions: [], schemaFields: SCHEMA_FIELDS, ...partial };
}

describe("annotationsToScene", () => {
  it("constraint-shaped text is passed through verbatim", () => {
    const out = annotationsToScene(
      input({ texts: [{ id: "t1", position: [10, 10], text: "time >= 1970" }] }),
      800,
      500,
    );
    expect(out.constraintText).toBe("time >= 1970");
    // constraint text is not a deictic element
    expect(out.scene).toBeNull();
  });

  it("multiple constraint boxes are ANDed", () => {
    const out = annotationsToScene(
      input({
        texts: [
          { id: "t1", position: [0, 0], text: "time >= 1970" },
          { id: "t2", position: [0, 20], text: "wind >= 64" },
        ],
      }),
      800,
      500,
    );
    expect(out.constraintText).toBe("(time >= 1970) AND (wind >= 64)");
  });

  it("an arrow from a word to a circle becomes a connector in the scene", () => {
    const circle: [number, number][] = [];
    for (let i = 0; i <= 24; i++) {
      const a = (2 * Math.PI * i) / 24;
      circle.push([400 + 30 * Math.cos(a), 300 + 30 * Math.sin(a)]);
    }
    const arrow: [number, number][] = [
      [110, 100],
      [250, 200],
      [395, 295],
      [380, 285],
    ];
    const out = annotationsToScene(
      input({
        strokes: [{ points: circle }, { points: arrow }],
        texts: [{ id: "this", position: [100, 95], text: "this" }],
      }),
      800,
      500,
    );
    expect(out.scene).not.toBeNull();
    const scene = out.scene!;
    expect(scene.query_id).toBe("this");
    expect(scene.connectors).toHaveLength(1);
    expect(scene.connectors[0]!.from_anchor).toEqual([110, 100]);
    const glyphs = scene.elements.filter((e) => e.kind === "glyph");
    expect(glyphs).toHaveLength(1);
    // centroid of the circle samples (the closing sample is repeated,
    // so allow a couple of pixels of bias)
    expect(Math.abs(glyphs[0]!.position[0] - 400)).toBeLessThan(3);
    expect(Math.abs(glyphs[0]!.position[1] - 300)).toBeLessThan(3);
  });

  it("no marks means no scene and no constraint (geometric-only query)", () => {
    const out = annotationsToScene(input({}), 800, 500);
    expect(out.scene).toBeNull();
    expect(out.constraintText).toBeUndefined();
  });

  it("data regions join the scene as data_region elements", () => {
    const out = annotationsToScene(
      input({
        texts: [{ id: "q", position: [100, 100], text: "this one" }],
        regions: [{ id: "band-2005", position: [300, 250] }],
      }),
      800,
      500,
    );
    const kinds = out.scene!.elements.map((e) => e.kind).sort();
    expect(kinds).toEqual(["data_region", "text"]);
  });
});

describe("defaultSpaces", () => {
  it("scales canvas thresholds from the diagonal", () => {
    const spaces = defaultSpaces(800, 600);
    expect(spaces[0]).toEqual({ kind: "canvas", threshold: 50, snap_radius: 20 });
    expect(spaces[1]).toEqual({ kind: "semantic", threshold: 0.34 });
    expect(spaces[2]).toEqual({ kind: "temporal", threshold: 60 });
  });
});

describe("resolutionToConstraint", () => {
  const ranges = new Map<string, RegionRange>([
    ["band-a", { type: "time_range", start: 0, end: 100 }],
    ["band-b", { type: "value_range", measure: "wind", lo: 64, hi: null }],
  ]);

  it("a circle on a region includes its range", () => {
    expect(resolutionToConstraint("circle", ["band-a"], ranges)).toEqual({
      type: "time_range",
      start: 0,
      end: 100,
    });
  });

  it("a cross-out negates", () => {
    expect(resolutionToConstraint("cross", ["band-b"], ranges)).toEqual({
      type: "not",
      child: { type: "value_range", measure: "wind", lo: 64, hi: null },
    });
  });

  it("multiple resolved regions are ORed", () => {
    expect(resolutionToConstraint("circle", ["band-a", "band-b"], ranges)).toEqual({
      type: "or",
      left: { type: "time_range", start: 0, end: 100 },
      right: { type: "value_range", measure: "wind", lo: 64, hi: null },
    });
  });

  it("nothing resolved yields null", () => {
    expect(resolutionToConstraint("circle", [], ranges)).toBeNull();
    expect(resolutionToConstraint("circle", ["unknown"], ranges)).toBeNull();
  });
});
