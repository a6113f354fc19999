/** Shared payload shapes for the trendsketch HTTP API. */

export type Point = [number, number];

export interface PenaltyWeights {
  w_len: number;
  w_mid: number;
  w_time: number;
  w_vel: number;
  w_skip: number;
  w_count: number;
  w_stretch: number;
}

/** Defaults mirrored from the alignment engine. */
export const DEFAULT_WEIGHTS: PenaltyWeights = {
  w_len: 1.0,
  w_mid: 1.0,
  w_time: 1.0,
  w_vel: 1.0,
  w_skip: 1.0,
  w_count: 0.5,
  w_stretch: 0.2,
};

export const DEFAULT_EPSILON = 0.02;

/** Sliders map linearly onto [0, 5]. */
export const WEIGHT_SLIDER_MAX = 5;

export interface Alignment {
  score: number;
  matches: [number, number][];
  skipped_interior: [string, number][];
  skipped_boundary: [string, number][];
}

export interface Match {
  signal_id: string;
  score: number;
  alignment: Alignment;
}

export interface QueryResponse {
  matches: Match[];
  dropped_by_constraint: number;
}

export interface QueryPayload {
  sketch_points: Point[];
  k?: number;
  penalty_config?: Partial<PenaltyWeights> & { epsilon?: number };
  constraint?: string;
  viewport?: Viewport;
}

export interface Viewport {
  width: number;
  height: number;
  t_range: [number, number];
  value_range: [number, number];
}

export interface SignalPoints {
  id: string;
  t: number[];
  y: number[][];
}

export type ElementKind = "glyph" | "text" | "data_region";

export interface PSElement {
  id: string;
  kind: ElementKind;
  position: Point;
  text?: string;
  timestamp?: number;
}

export interface PSConnector {
  from_anchor: Point;
  to_anchor: Point;
}

export type PSSpace =
  | { kind: "canvas"; threshold: number; snap_radius: number }
  | { kind: "semantic"; threshold: number }
  | { kind: "temporal"; threshold: number };

export interface SceneDocument {
  query_id: string;
  elements: PSElement[];
  connectors: PSConnector[];
  spaces: PSSpace[];
}

export interface ResolutionResponse {
  candidates: string[];
  cardinality: "zero" | "one" | "many";
}
