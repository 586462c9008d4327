import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, parseSseChunk } from "../src/api.js";
import { fakeFetch, json, phonePayload, sseStream } from "./helpers.js";

describe("parseSseChunk", () => {
  it("splits complete events and keeps the remainder", () => {
    const buffer =
      'event: session_started\ndata: {"session": 1}\n\n' +
      'event: done\ndata: {"session": null}\n\npartial';
    const { events, rest } = parseSseChunk(buffer);
    expect(events.map((e) => e.phase)).toEqual(["session_started", "done"]);
    expect(events[0].session).toBe(1);
    expect(rest).toBe("partial");
  });

  it("ignores keepalive comments", () => {
    const { events } = parseSseChunk(": keepalive\n\n");
    expect(events).toEqual([]);
  });
});

describe("ApiClient", () => {
  it("queues a story and polls its result", async () => {
    const { fetchImpl, calls } = fakeFetch({
      "POST /api/story/queue": () => json({ id: "job1" }),
      "GET /api/story/results/job1": () =>
        json({ status: "done", reports: "text", model: phonePayload() }),
    });
    const api = new ApiClient("", fetchImpl);
    const { id } = await api.queueStory("session(s(0),[],all).");
    expect(id).toBe("job1");
    const result = await api.results(id);
    expect(result.status).toBe("done");
    expect(calls[0].body).toEqual({ text: "session(s(0),[],all).", options: {} });
  });

  it("turns rejection details into ApiError with diagnostics", async () => {
    const { fetchImpl } = fakeFetch({
      "POST /api/story/queue": () =>
        json(
          {
            detail: {
              message: "the domain text does not parse",
              diagnostics: [{ line: 1, column: 20, message: "boom" }],
            },
          },
          400,
        ),
    });
    const api = new ApiClient("", fetchImpl);
    const error = await api.queueStory("bad").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(400);
    expect(error.diagnostics).toHaveLength(1);
  });

  it("streams progress events until the terminal one", async () => {
    const { fetchImpl } = fakeFetch({
      "GET /api/story/progress/job1": () =>
        sseStream([
          { phase: "session_started", data: { session: 1 } },
          { phase: "session_started", data: { session: 2 } },
          { phase: "session_started", data: { session: 3 } },
          { phase: "done", data: {} },
        ]),
    });
    const api = new ApiClient("", fetchImpl);
    const seen: string[] = [];
    const events = await api.streamProgress("job1", (e) => seen.push(e.phase));
    expect(seen.filter((p) => p === "session_started")).toHaveLength(3);
    expect(events.at(-1)?.phase).toBe("done");
  });

  it("sends the bearer token once signed in", async () => {
    let sawAuth = "";
    const { fetchImpl } = fakeFetch({
      "POST /api/register": () => json({ token: "tok123" }),
      "POST /api/stories": (call) => json({ id: "s1" }),
    });
    const api = new ApiClient("", async (url, init) => {
      sawAuth = ((init?.headers ?? {}) as Record<string, string>)["Authorization"] ?? sawAuth;
      return fetchImpl(url, init);
    });
    await api.register("ada", "pw");
    await api.saveStory({ title: "t", story: "x." });
    expect(sawAuth).toBe("Bearer tok123");
  });
});
