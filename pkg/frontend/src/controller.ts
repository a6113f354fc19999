/** Query-cycle state machine: sketch + sliders + annotations in, at
 * most one service request out per user action. */
import { QueryScheduler, type QueryOutcome } from "./api.js";
import { SketchCapture } from "./sketch.js";
import {
  DEFAULT_EPSILON,
  DEFAULT_WEIGHTS,
  WEIGHT_SLIDER_MAX,
  type PenaltyWeights,
  type QueryPayload,
} from "./types.js";

export type WeightName = keyof PenaltyWeights;

export const WEIGHT_NAMES: WeightName[] = [
  "w_len",
  "w_mid",
  "w_time",
  "w_vel",
  "w_skip",
  "w_count",
  "w_stretch",
];

export function clampWeight(value: number): number {
  return Math.min(WEIGHT_SLIDER_MAX, Math.max(0, value));
}

export class QueryController {
  readonly sketch = new SketchCapture();
  private weights: PenaltyWeights = { ...DEFAULT_WEIGHTS };
  private epsilon = DEFAULT_EPSILON;
  private k = 10;
  private constraintText: string | null = null;
  private lastOutcome: QueryOutcome | null = null;

  constructor(
    private readonly scheduler: QueryScheduler,
    private readonly onOutcome: (outcome: QueryOutcome) => void = () => {},
  ) {}

  get canQuery(): boolean {
    return this.sketch.toPayload() !== null;
  }

  get currentWeights(): Readonly<PenaltyWeights> {
    return this.weights;
  }

  get outcome(): QueryOutcome | null {
    return this.lastOutcome;
  }

  setConstraint(text: string | null): void {
    this.constraintText = text && text.trim() ? text.trim() : null;
  }

  buildPayload(): QueryPayload | null {
    const points = this.sketch.toPayload();
    if (!points) return null;
    const payload: QueryPayload = {
      sketch_points: points,
      k: this.k,
      penalty_config: { ...this.weights, epsilon: this.epsilon },
    };
    if (this.constraintText) payload.constraint = this.constraintText;
    return payload;
  }

  /** The Query button: one request, cancelling any pending one. */
  async query(): Promise<QueryOutcome | null> {
    const payload = this.buildPayload();
    if (!payload) return null;
    const outcome = await this.scheduler.run(payload);
    this.lastOutcome = outcome;
    this.onOutcome(outcome);
    return outcome;
  }

  /** A penalty slider change re-issues the query exactly once. */
  async setWeight(name: WeightName, value: number): Promise<QueryOutcome | null> {
    this.weights = { ...this.weights, [name]: clampWeight(value) };
    return this.query();
  }

  /** The precision slider (simplification epsilon) likewise. */
  async setEpsilon(value: number): Promise<QueryOutcome | null> {
    this.epsilon = Math.max(1e-6, value);
    return this.query();
  }

  /** Cancel = abort the in-flight query; the canvas is untouched. */
  cancel(): void {
    this.scheduler.cancel();
  }

  /** Clear = wipe the canvas; results become stale and are dropped. */
  clear(): void {
    this.sketch.clear();
    this.lastOutcome = null;
  }
}
