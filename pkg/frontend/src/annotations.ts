/** Turn annotation marks (typed text, circles, cross-outs, arrows)
 * into the query's constraint text and a proximity-semantics scene
 * document for the /ps/resolve endpoint. */
import { centroid, classifyMarks, type ClassifiedMark } from "./glyphs.js";
import type { Stroke } from "./sketch.js";
import type {
  Point,
  PSConnector,
  PSElement,
  PSSpace,
  SceneDocument,
} from "./types.js";

export interface TextMark {
  id: string;
  position: Point;
  text: string;
}

export interface DataRegion {
  id: string;
  position: Point;
}

export interface AnnotationInput {
  /** Free strokes drawn with the annotation tool. */
  strokes: Stroke[];
  /** Typed text boxes. Text starting with a field name is constraint
   * text sent verbatim; other text participates in PS resolution. */
  texts: TextMark[];
  /** Known data regions on the chart (selections, axis bands). */
  regions: DataRegion[];
  /** Field names of the active dataset schema, used to tell constraint
   * text from deictic text. */
  schemaFields: string[];
}

export interface AnnotationScene {
  constraintText?: string;
  scene: SceneDocument | null;
  marks: ClassifiedMark[];
}

export function defaultSpaces(width: number, height: number): PSSpace[] {
  const diag = Math.hypot(width, height);
  return [
    { kind: "canvas", threshold: 0.05 * diag, snap_radius: 0.02 * diag },
    { kind: "semantic", threshold: 0.34 },
    { kind: "temporal", threshold: 60 },
  ];
}

function isConstraintText(text: string, schemaFields: string[]): boolean {
  const first = text.trim().split(/\s+/)[0] ?? "";
  return schemaFields.includes(first) || first.toUpperCase() === "NOT";
}

/** Build {constraint_text?, ps_scene} from the marks on the canvas.
 *
 * Constraint-shaped text boxes are joined with AND and sent verbatim
 * to the service parser. Circles and cross-outs become glyph elements
 * (positioned at their centroid), other text becomes text elements,
 * arrows become connectors from their first to last sample. With no
 * deictic marks the scene is null and the query runs geometric-only.
 */
export function annotationsToScene(
  input: AnnotationInput,
  canvasWidth: number,
  canvasHeight: number,
  queryId?: string,
): AnnotationScene {
  const marks = classifyMarks(input.strokes);
  const elements: PSElement[] = [];
  const connectors: PSConnector[] = [];
  const constraintParts: string[] = [];

  let glyphSerial = 0;
  for (const mark of marks) {
    if (mark.kind === "circle" || mark.kind === "cross") {
      const all = mark.strokes.flatMap((s) => s.points);
      elements.push({
        id: `${mark.kind}-${glyphSerial++}`,
        kind: "glyph",
        position: centroid(all),
      });
    } else if (mark.kind === "arrow") {
      const pts = mark.strokes[0]!.points;
      connectors.push({
        from_anchor: pts[0]!,
        to_anchor: pts[pts.length - 1]!,
      });
    }
  }

  for (const text of input.texts) {
    if (isConstraintText(text.text, input.schemaFields)) {
      constraintParts.push(text.text.trim());
    } else {
      elements.push({ id: text.id, kind: "text", position: text.position, text: text.text });
    }
  }

  for (const region of input.regions) {
    elements.push({ id: region.id, kind: "data_region", position: region.position });
  }

  const queryElement = queryId
    ? elements.find((e) => e.id === queryId)
    : elements.find((e) => e.kind === "text");

  const scene: SceneDocument | null = queryElement
    ? {
        query_id: queryElement.id,
        elements,
        connectors,
        spaces: defaultSpaces(canvasWidth, canvasHeight),
      }
    : null;

  const out: AnnotationScene = { scene, marks };
  if (constraintParts.length > 0) {
    out.constraintText =
      constraintParts.length === 1
        ? constraintParts[0]!
        : constraintParts.map((p) => `(${p})`).join(" AND ");
  }
  return out;
}

export type RegionRange =
  | { type: "time_range"; start: number | null; end: number | null }
  | { type: "value_range"; measure: string; lo: number | null; hi: number | null };

/** A circle resolved onto a data region adds that region's range as an
 * inclusion constraint; a cross-out adds its negation. Returns a JSON
 * constraint AST node, or null when nothing resolved. */
export function resolutionToConstraint(
  markKind: "circle" | "cross",
  resolvedRegionIds: string[],
  regionRanges: Map<string, RegionRange>,
): object | null {
  const ranges = resolvedRegionIds
    .map((id) => regionRanges.get(id))
    .filter((r): r is RegionRange => r !== undefined);
  if (ranges.length === 0) return null;
  let node: object = ranges[0]!;
  for (const next of ranges.slice(1)) {
    node = { type: "or", left: node, right: next };
  }
  return markKind === "cross" ? { type: "not", child: node } : node;
}
