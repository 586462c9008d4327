/** HTTP client for the comprehension service.
 *
 * Every semantic result the IDE shows comes through this client; the UI
 * itself never parses, converts or reasons. The fetch implementation is
 * injectable so tests can run against a scripted server.
 */

import type {
  CommentRecord,
  Diagnostic,
  GraphDoc,
  JobResult,
  ProgressEvent,
  StoryRecord,
} from "./model.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly diagnostics: string[];

  constructor(status: number, message: string, diagnostics: string[] = []) {
    super(message);
    this.status = status;
    this.diagnostics = diagnostics;
  }
}

function extractDetail(body: unknown): { message: string; diagnostics: string[] } {
  if (body && typeof body === "object" && "detail" in body) {
    const detail = (body as { detail: unknown }).detail;
    if (typeof detail === "string") return { message: detail, diagnostics: [] };
    if (detail && typeof detail === "object") {
      const d = detail as { message?: string; diagnostics?: unknown[] };
      return {
        message: d.message ?? "request failed",
        diagnostics: (d.diagnostics ?? []).map((x) =>
          typeof x === "string" ? x : JSON.stringify(x),
        ),
      };
    }
  }
  return { message: "request failed", diagnostics: [] };
}

/** Splits a text/event-stream body into (event, data) records. */
export function parseSseChunk(buffer: string): { events: ProgressEvent[]; rest: string } {
  const events: ProgressEvent[] = [];
  const parts = buffer.split("\n\n");
  const rest = parts.pop() ?? "";
  for (const part of parts) {
    let phase = "message";
    let data = "";
    for (const line of part.split("\n")) {
      if (line.startsWith("event: ")) phase = line.slice(7).trim();
      else if (line.startsWith("data: ")) data += line.slice(6);
    }
    if (!data) continue;
    try {
      events.push({ phase, ...(JSON.parse(data) as object) } as ProgressEvent);
    } catch {
      events.push({ phase, session: null });
    }
  }
  return { events, rest };
}

export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private headers(json = true): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: this.headers(body !== undefined),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const parsed = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const { message, diagnostics } = extractDetail(parsed);
      throw new ApiError(response.status, message, diagnostics);
    }
    return parsed as T;
  }

  // accounts ------------------------------------------------------------
  async register(username: string, password: string): Promise<string> {
    const body = await this.request<{ token: string }>("POST", "/api/register", {
      username,
      password,
    });
    this.token = body.token;
    return body.token;
  }

  async login(username: string, password: string): Promise<string> {
    const body = await this.request<{ token: string }>("POST", "/api/login", {
      username,
      password,
    });
    this.token = body.token;
    return body.token;
  }

  // comprehension ---------------------------------------------------------
  queueStory(text: string, options: object = {}): Promise<{ id: string }> {
    return this.request("POST", "/api/story/queue", { text, options });
  }

  results(jobId: string): Promise<JobResult> {
    return this.request("GET", `/api/story/results/${jobId}`);
  }

  /** Streams progress events until the terminal one; resolves with all seen. */
  async streamProgress(
    jobId: string,
    onEvent: (event: ProgressEvent) => void,
  ): Promise<ProgressEvent[]> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/story/progress/${jobId}`, {
      headers: this.headers(false),
    });
    if (!response.ok || response.body === null) {
      throw new ApiError(response.status, "progress stream unavailable");
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    const seen: ProgressEvent[] = [];
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (value) buffer += decoder.decode(value, { stream: true });
      const { events, rest } = parseSseChunk(buffer);
      buffer = rest;
      for (const event of events) {
        seen.push(event);
        onEvent(event);
        if (event.phase === "done" || event.phase === "failed") {
          await reader.cancel().catch(() => undefined);
          return seen;
        }
      }
      if (done) return seen;
    }
  }

  // repository -----------------------------------------------------------
  listStories(scope: "mine" | "public" | "examples"): Promise<StoryRecord[]> {
    return this.request("GET", `/api/stories?scope=${scope}`);
  }

  saveStory(story: {
    title: string;
    story: string;
    knowledge?: string;
    visibility?: "private" | "public";
  }): Promise<StoryRecord> {
    return this.request("POST", "/api/stories", story);
  }

  getStory(id: string): Promise<StoryRecord> {
    return this.request("GET", `/api/stories/${id}`);
  }

  shareStory(id: string): Promise<StoryRecord> {
    return this.request("POST", `/api/stories/${id}/share`);
  }

  listComments(id: string): Promise<CommentRecord[]> {
    return this.request("GET", `/api/stories/${id}/comments`);
  }

  addComment(id: string, body: string): Promise<CommentRecord> {
    return this.request("POST", `/api/stories/${id}/comments`, { body });
  }

  sendFeedback(message: string, contact = ""): Promise<{ id: string }> {
    return this.request("POST", "/api/feedback", { message, contact });
  }

  // converters -------------------------------------------------------------
  parse(text: string, storyOnly = false): Promise<{ ok: boolean; diagnostics: Diagnostic[] }> {
    return this.request("POST", "/api/parse", { text, story_only: storyOnly });
  }

  nlToStar(payload: { annotations?: object; text?: string }): Promise<{
    star: string;
    trace: string[];
  }> {
    return this.request("POST", "/api/convert/nl2star", payload);
  }

  graphToStar(graph: GraphDoc): Promise<{ star: string; diagnostics: string[] }> {
    return this.request("POST", "/api/convert/graph2star", { graph });
  }

  starToGraph(text: string): Promise<{ graph: GraphDoc; diagnostics: Diagnostic[] }> {
    return this.request("POST", "/api/convert/star2graph", { text });
  }
}
