import { describe, expect, it } from "vitest";

import { WorkspaceState } from "../src/workspace.js";

describe("view modes", () => {
  it("mixed shows both panes, simple and advanced one each", () => {
    const ws = new WorkspaceState();
    expect(ws.visiblePanes("story")).toEqual(["simple", "advanced"]);
    ws.setViewMode("simple");
    expect(ws.visiblePanes("knowledge")).toEqual(["simple"]);
    ws.setViewMode("advanced");
    expect(ws.visiblePanes("output")).toEqual(["advanced"]);
  });

  it("maximizing an area hides the others", () => {
    const ws = new WorkspaceState();
    ws.maximize("story");
    expect(ws.visiblePanes("story")).toEqual(["simple", "advanced"]);
    expect(ws.visiblePanes("knowledge")).toEqual([]);
    ws.maximize(null);
    expect(ws.visiblePanes("knowledge")).toEqual(["simple", "advanced"]);
  });

  it("hidden panes keep their content", () => {
    const ws = new WorkspaceState();
    ws.setPane("story", "simple", "Bob called Mary.");
    ws.setViewMode("advanced");
    expect(ws.areas.story.simple).toBe("Bob called Mary.");
  });
});

describe("stale marking", () => {
  it("editing one pane marks its non-empty sibling stale", () => {
    const ws = new WorkspaceState();
    ws.setPane("story", "advanced", "s(1) :: call(bob,mary,phone1) at 6.");
    expect(ws.isStale("story", "simple")).toBe(false); // sibling empty
    ws.setPane("story", "simple", "Bob called Mary.");
    expect(ws.isStale("story", "advanced")).toBe(true);
  });

  it("a conversion clears the stale flag", () => {
    const ws = new WorkspaceState();
    ws.setPane("story", "simple", "Bob called Mary.");
    ws.setPane("story", "advanced", "old text");
    ws.setPane("story", "simple", "Bob called Mary again.");
    expect(ws.isStale("story", "advanced")).toBe(true);
    ws.applyConversion("story", "advanced", "s(1) :: call(bob,mary,phone1) at 6.");
    expect(ws.isStale("story", "advanced")).toBe(false);
    expect(ws.areas.story.advanced).toContain("call(bob,mary,phone1)");
  });
});
