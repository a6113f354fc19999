/** DOM wiring: canvas, tool buttons, sliders, result overlay. All
 * decision logic lives in the pure modules; this file only adapts
 * browser events onto them. */
import { ApiClient, QueryScheduler, type QueryOutcome } from "./api.js";
import { QueryController, WEIGHT_NAMES } from "./controller.js";
import { buildOverlay, formatScore, type Overlay } from "./render.js";
import type { SignalPoints } from "./types.js";
import { DEFAULT_WEIGHTS, WEIGHT_SLIDER_MAX } from "./types.js";

const COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"];

type Tool = "sketch" | "eraser";

export function mount(root: HTMLElement, baseUrl: string, indexId: string, datasetId: string): void {
  const canvas = document.createElement("canvas");
  canvas.width = 800;
  canvas.height = 500;
  canvas.style.border = "1px solid #999";
  root.appendChild(canvas);
  const ctx = canvas.getContext("2d")!;

  const client = new ApiClient(baseUrl);
  const scheduler = new QueryScheduler(client, indexId);
  const pointsCache = new Map<string, SignalPoints>();
  let overlay: Overlay | null = null;

  const controller = new QueryController(scheduler, (outcome) => {
    void showOutcome(outcome);
  });

  async function showOutcome(outcome: QueryOutcome): Promise<void> {
    if (outcome.kind === "cancelled") return;
    if (outcome.kind === "error") {
      status.textContent = outcome.error.detail;
      return;
    }
    status.textContent = "";
    const matches = outcome.response.matches;
    await Promise.all(
      matches.map(async (m) => {
        if (!pointsCache.has(m.signal_id)) {
          pointsCache.set(m.signal_id, await client.signalPoints(datasetId, m.signal_id));
        }
      }),
    );
    overlay = buildOverlay(matches, pointsCache, canvas.width, canvas.height);
    draw();
  }

  let tool: Tool = "sketch";
  let drawing = false;

  canvas.addEventListener("pointerdown", (e) => {
    const { offsetX: x, offsetY: y } = e;
    if (tool === "eraser") {
      controller.sketch.erase(x, y, 12);
      draw();
      return;
    }
    drawing = true;
    controller.sketch.beginStroke(x, y);
  });
  canvas.addEventListener("pointermove", (e) => {
    if (!drawing) return;
    controller.sketch.extendStroke(e.offsetX, e.offsetY);
    draw();
  });
  const finish = () => {
    if (!drawing) return;
    drawing = false;
    controller.sketch.endStroke();
    queryButton.disabled = !controller.canQuery;
    draw();
  };
  canvas.addEventListener("pointerup", finish);
  canvas.addEventListener("pointerleave", finish);

  const toolbar = document.createElement("div");
  root.appendChild(toolbar);

  function button(label: string, onClick: () => void): HTMLButtonElement {
    const b = document.createElement("button");
    b.textContent = label;
    b.addEventListener("click", onClick);
    toolbar.appendChild(b);
    return b;
  }

  button("Sketch", () => (tool = "sketch"));
  button("Eraser", () => (tool = "eraser"));
  const queryButton = button("Query", () => void controller.query());
  queryButton.disabled = true;
  button("Cancel", () => controller.cancel());
  button("Clear", () => {
    controller.clear();
    overlay = null;
    queryButton.disabled = true;
    draw();
  });

  const sliders = document.createElement("div");
  root.appendChild(sliders);
  for (const name of WEIGHT_NAMES) {
    const label = document.createElement("label");
    label.textContent = name;
    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = String(WEIGHT_SLIDER_MAX);
    input.step = "0.05";
    input.value = String(DEFAULT_WEIGHTS[name]);
    input.addEventListener("change", () => void controller.setWeight(name, Number(input.value)));
    label.appendChild(input);
    sliders.appendChild(label);
  }
  const precision = document.createElement("input");
  precision.type = "range";
  precision.min = "0.005";
  precision.max = "0.2";
  precision.step = "0.005";
  precision.value = "0.02";
  precision.addEventListener("change", () => void controller.setEpsilon(Number(precision.value)));
  const precisionLabel = document.createElement("label");
  precisionLabel.textContent = "precision";
  precisionLabel.appendChild(precision);
  sliders.appendChild(precisionLabel);

  const constraintBox = document.createElement("input");
  constraintBox.type = "text";
  constraintBox.placeholder = "constraint, e.g. time >= 1970";
  constraintBox.addEventListener("change", () => controller.setConstraint(constraintBox.value));
  root.appendChild(constraintBox);

  const status = document.createElement("p");
  root.appendChild(status);

  function draw(): void {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.strokeStyle = "#111";
    ctx.lineWidth = 2;
    for (const stroke of controller.sketch.allStrokes()) {
      ctx.beginPath();
      stroke.points.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
      ctx.stroke();
    }
    if (!overlay) return;
    if (overlay.state === "no-matches") {
      ctx.fillStyle = "#666";
      ctx.fillText("no matches", 10, 20);
      return;
    }
    overlay.polylines.forEach((line, idx) => {
      ctx.strokeStyle = COLORS[idx % COLORS.length]!;
      ctx.lineWidth = 1.5;
      ctx.beginPath();
      line.points.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
      ctx.stroke();
      ctx.fillStyle = ctx.strokeStyle;
      ctx.fillText(`${line.signalId} (${formatScore(line.score)})`, 10, 20 + 14 * idx);
    });
  }
}
