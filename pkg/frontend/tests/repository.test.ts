import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { RepositoryBrowser } from "../src/repository.js";
import { WorkspaceState } from "../src/workspace.js";
import { fakeFetch, json } from "./helpers.js";

const EXAMPLE = {
  id: "ex1",
  owner: "examples",
  title: "The phone call",
  story: "session(s(0),[],all).",
  knowledge: "c(01) :: a causes b.",
  visibility: "public" as const,
  example: true,
  created: 0,
  updated: 0,
};

describe("repository browser", () => {
  it("lists stories per scope", async () => {
    const { fetchImpl, calls } = fakeFetch({
      "GET /api/stories": () => json([EXAMPLE]),
    });
    const browser = new RepositoryBrowser(new ApiClient("", fetchImpl));
    const stories = await browser.open("examples");
    expect(stories).toHaveLength(1);
    expect(calls[0].path).toBe("/api/stories?scope=examples");
  });

  it("shares and comments through the service", async () => {
    const { fetchImpl, calls } = fakeFetch({
      "POST /api/stories/ex1/share": () => json({ ...EXAMPLE, visibility: "public" }),
      "POST /api/stories/ex1/comments": (call) =>
        json({
          id: "c1",
          story_id: "ex1",
          author: "ada",
          body: (call.body as { body: string }).body,
          created: 1,
        }),
      "GET /api/stories/ex1/comments": () => json([]),
    });
    const browser = new RepositoryBrowser(new ApiClient("", fetchImpl));
    await browser.share("ex1");
    const comment = await browser.comment("ex1", "nice story");
    expect(comment.body).toBe("nice story");
    await browser.comments("ex1");
    expect(calls.map((c) => c.method)).toEqual(["POST", "POST", "GET"]);
  });

  it("copies a story into the workspace panes without staleness", () => {
    const browser = new RepositoryBrowser(new ApiClient("", async () => json({})));
    const workspace = new WorkspaceState();
    browser.copyToWorkspace(EXAMPLE, workspace);
    expect(workspace.areas.story.advanced).toBe(EXAMPLE.story);
    expect(workspace.areas.knowledge.advanced).toBe(EXAMPLE.knowledge);
    expect(workspace.isStale("story", "simple")).toBe(false);
    expect(workspace.isStale("knowledge", "simple")).toBe(false);
  });
});
