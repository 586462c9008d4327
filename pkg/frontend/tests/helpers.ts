/** Scripted fetch for tests plus a mocked final-session model payload. */

import type { FetchLike } from "../src/api.js";
import type { SessionPayload, StoryPayload } from "../src/model.js";

export interface Call {
  method: string;
  path: string;
  body: unknown;
}

export type Handler = (call: Call) => Response | Promise<Response>;

export function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function fakeFetch(routes: Record<string, Handler>): {
  fetchImpl: FetchLike;
  calls: Call[];
} {
  const calls: Call[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    const call = { method, path, body };
    calls.push(call);
    const handler = routes[`${method} ${path}`] ?? routes[`${method} ${path.split("?")[0]}`];
    if (!handler) throw new Error(`no route for ${method} ${path}`);
    return handler(call);
  };
  return { fetchImpl, calls };
}

function cells(pattern: (t: number) => "positive" | "negative" | "unknown", horizon: number,
               observedAt: number[] = []) {
  return Array.from({ length: horizon + 1 }, (_, t) => ({
    t,
    value: pattern(t),
    observed: observedAt.includes(t),
  }));
}

/** Final scene of the bundled phone-call story, as the service reports it. */
export function phoneFinalSession(): SessionPayload {
  const horizon = 20;
  return {
    session: 3,
    horizon,
    concepts: [
      {
        name: "carried_out(favor1)",
        signature: "carried_out/1",
        kind: "fluent",
        cells: cells(() => "negative", horizon),
      },
      {
        name: "is_ringing(phone1)",
        signature: "is_ringing/1",
        kind: "fluent",
        cells: cells((t) => (t < 7 ? "unknown" : t < 17 ? "positive" : "negative"), horizon),
      },
      {
        name: "is_person(bob)",
        signature: "is_person/1",
        kind: "constant",
        cells: cells(() => "positive", horizon, Array.from({ length: 21 }, (_, t) => t)),
      },
      {
        name: "apologize(mary,bob)",
        signature: "apologize/2",
        kind: "action",
        cells: cells((t) => (t === 18 ? "positive" : "unknown"), horizon, [18]),
      },
    ],
    answers: [
      {
        question: 4,
        choices: [{ literal: "is_embarrassed(mary)", time: 20, verdict: "accepted" }],
      },
    ],
    warnings: [],
  };
}

export function phonePayload(): StoryPayload {
  return { sessions: [phoneFinalSession()] };
}

export function sseStream(events: Array<{ phase: string; data: object }>): Response {
  const text = events
    .map((e) => `event: ${e.phase}\ndata: ${JSON.stringify(e.data)}\n\n`)
    .join("");
  return new Response(text, {
    status: 200,
    headers: { "Content-Type": "text/event-stream" },
  });
}
