import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { RunController } from "../src/runner.js";
import { fakeFetch, json, phonePayload, sseStream } from "./helpers.js";

function runRoutes() {
  return fakeFetch({
    "POST /api/story/queue": () => json({ id: "job9" }),
    "GET /api/story/progress/job9": () =>
      sseStream([
        { phase: "session_started", data: { session: 1 } },
        { phase: "answers_ready", data: { session: 1 } },
        { phase: "session_started", data: { session: 2 } },
        { phase: "session_started", data: { session: 3 } },
        { phase: "done", data: {} },
      ]),
    "GET /api/story/results/job9": () =>
      json({ status: "done", reports: "raw text", model: phonePayload() }),
  });
}

describe("run and watch", () => {
  it("submits, follows the stream and lands on the final model", async () => {
    const { fetchImpl, calls } = runRoutes();
    const run = new RunController(new ApiClient("", fetchImpl));
    const status = await run.run("story text", "knowledge text");
    expect(calls[0].body).toMatchObject({ text: "story text\n\nknowledge text\n" });
    expect(status.phase).toBe("done");
    expect(status.sessionsStarted).toEqual([1, 2, 3]);
    expect(run.model?.sessions[0].session).toBe(3);
    expect(status.result?.reports).toBe("raw text");
  });

  it("keeps filters disabled until the run completes", async () => {
    const { fetchImpl } = runRoutes();
    const gates: boolean[] = [];
    const run: RunController = new RunController(new ApiClient("", fetchImpl), () => {
      gates.push(run.filtersEnabled);
    });
    expect(run.filtersEnabled).toBe(false);
    await run.run("s", "k");
    expect(run.filtersEnabled).toBe(true);
    // every intermediate state change left the filters off
    expect(gates.slice(0, -1).every((enabled) => !enabled)).toBe(true);
    expect(gates.at(-1)).toBe(true);
  });

  it("reports failures with the service's message", async () => {
    const { fetchImpl } = fakeFetch({
      "POST /api/story/queue": () => json({ id: "job9" }),
      "GET /api/story/progress/job9": () =>
        sseStream([{ phase: "failed", data: { error: "boom" } }]),
      "GET /api/story/results/job9": () => json({ status: "failed", error: "boom" }),
    });
    const run = new RunController(new ApiClient("", fetchImpl));
    const status = await run.run("s", "k");
    expect(status.phase).toBe("failed");
    expect(status.error).toBe("boom");
    expect(run.filtersEnabled).toBe(false);
  });
});
