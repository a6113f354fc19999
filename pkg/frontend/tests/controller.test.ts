import { describe, expect, it, vi } from "vitest";

import { ApiClient, QueryScheduler } from "../src/api.js";
import { clampWeight, QueryController } from "../src/controller.js";
import type { QueryResponse } from "../src/types.js";

const EMPTY: QueryResponse = { matches: [], dropped_by_constraint: 0 };

function jsonResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "content-type": "application/json" },
  });
}

function makeScheduler(fetchImpl: typeof fetch): QueryScheduler {
  return new QueryScheduler(new ApiClient("http://test", fetchImpl), "idx-0001");
}

function drawLine(controller: QueryController): void {
  controller.sketch.beginStroke(0, 100);
  controller.sketch.extendStroke(100, 0);
  controller.sketch.endStroke();
}

describe("QueryController", () => {
  it("cannot query without a 2-point stroke", async () => {
    const fetchMock = vi.fn();
    const controller = new QueryController(makeScheduler(fetchMock as never));
    expect(controller.canQuery).toBe(false);
    expect(await controller.query()).toBeNull();
    expect(fetchMock).not.toHaveBeenCalled();
  });

  it("query sends the sketch and full penalty config", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(EMPTY));
    const controller = new QueryController(makeScheduler(fetchMock as never));
    drawLine(controller);
    const outcome = await controller.query();
    expect(outcome?.kind).toBe("result");
    expect(fetchMock).toHaveBeenCalledTimes(1);
    const body = JSON.parse((fetchMock.mock.calls[0]![1] as RequestInit).body as string);
    expect(body.sketch_points).toEqual([[0, 100], [100, 0]]);
    expect(body.penalty_config.w_skip).toBe(1);
    expect(body.penalty_config.epsilon).toBe(0.02);
  });

  it("a penalty slider change triggers exactly one new request", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(EMPTY));
    const controller = new QueryController(makeScheduler(fetchMock as never));
    drawLine(controller);
    await controller.query();
    fetchMock.mockClear();
    await controller.setWeight("w_skip", 2.5);
    expect(fetchMock).toHaveBeenCalledTimes(1);
    const body = JSON.parse((fetchMock.mock.calls[0]![1] as RequestInit).body as string);
    expect(body.penalty_config.w_skip).toBe(2.5);
  });

  it("the precision slider likewise re-issues once", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(EMPTY));
    const controller = new QueryController(makeScheduler(fetchMock as never));
    drawLine(controller);
    fetchMock.mockClear();
    await controller.setEpsilon(0.05);
    expect(fetchMock).toHaveBeenCalledTimes(1);
  });

  it("a constraint is included when set and dropped when cleared", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(EMPTY));
    const controller = new QueryController(makeScheduler(fetchMock as never));
    drawLine(controller);
    controller.setConstraint("time >= 1970");
    await controller.query();
    let body = JSON.parse((fetchMock.mock.calls[0]![1] as RequestInit).body as string);
    expect(body.constraint).toBe("time >= 1970");
    controller.setConstraint("   ");
    await controller.query();
    body = JSON.parse((fetchMock.mock.calls[1]![1] as RequestInit).body as string);
    expect(body.constraint).toBeUndefined();
  });

  it("clear wipes the sketch and the last outcome", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(EMPTY));
    const controller = new QueryController(makeScheduler(fetchMock as never));
    drawLine(controller);
    await controller.query();
    expect(controller.outcome).not.toBeNull();
    controller.clear();
    expect(controller.outcome).toBeNull();
    expect(controller.canQuery).toBe(false);
  });

  it("weights clamp onto the slider range [0, 5]", () => {
    expect(clampWeight(-1)).toBe(0);
    expect(clampWeight(7)).toBe(5);
    expect(clampWeight(2.5)).toBe(2.5);
  });
});

describe("QueryScheduler", () => {
  it("a newer query cancels the pending one", async () => {
    let resolveFirst: ((r: Response) => void) | null = null;
    const fetchMock = vi.fn((_url: string, init?: RequestInit) => {
      if (fetchMock.mock.calls.length === 1) {
        return new Promise<Response>((resolve, reject) => {
          resolveFirst = resolve;
          init?.signal?.addEventListener("abort", () =>
            reject(new DOMException("aborted", "AbortError")),
          );
        });
      }
      return Promise.resolve(jsonResponse(EMPTY));
    });
    const scheduler = makeScheduler(fetchMock as never);
    const first = scheduler.run({ sketch_points: [[0, 0], [1, 1]] });
    const second = scheduler.run({ sketch_points: [[0, 0], [2, 2]] });
    expect((await first).kind).toBe("cancelled");
    expect((await second).kind).toBe("result");
    expect(scheduler.requestCount).toBe(2);
    expect(resolveFirst).not.toBeNull();
  });

  it("cancel() aborts without issuing a new request", async () => {
    const fetchMock = vi.fn((_url: string, init?: RequestInit) => {
      return new Promise<Response>((_resolve, reject) => {
        init?.signal?.addEventListener("abort", () =>
          reject(new DOMException("aborted", "AbortError")),
        );
      });
    });
    const scheduler = makeScheduler(fetchMock as never);
    const pending = scheduler.run({ sketch_points: [[0, 0], [1, 1]] });
    expect(scheduler.inFlight).toBe(true);
    scheduler.cancel();
    expect((await pending).kind).toBe("cancelled");
    expect(scheduler.inFlight).toBe(false);
    expect(scheduler.requestCount).toBe(1);
  });

  it("service errors surface status and detail", async () => {
    const fetchMock = vi.fn(async () =>
      new Response(JSON.stringify({ detail: "unknown field 'bogus'" }), { status: 422 }),
    );
    const scheduler = makeScheduler(fetchMock as never);
    const outcome = await scheduler.run({ sketch_points: [[0, 0], [1, 1]] });
    expect(outcome.kind).toBe("error");
    if (outcome.kind === "error") {
      expect(outcome.error.status).toBe(422);
      expect(outcome.error.detail).toContain("bogus");
    }
  });
});
