/** DOM bootstrap of the IDE: three areas, conversion buttons, live output. */

import { ApiClient, ApiError } from "./api.js";
import { GraphEditorModel, EditorGuidance } from "./graphEditor.js";
import { RepositoryBrowser } from "./repository.js";
import { RunController } from "./runner.js";
import { renderAnswers, renderTimeline, type TimelineFilter } from "./timeline.js";
import { WorkspaceState, type AreaName, type PaneName } from "./workspace.js";

const api = new ApiClient("");
const workspace = new WorkspaceState();
const graphEditor = new GraphEditorModel();
const repository = new RepositoryBrowser(api);

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function showGuidance(target: HTMLElement, message: string, details: string[] = []): void {
  target.innerHTML = "";
  const box = document.createElement("div");
  box.className = "guidance";
  box.textContent = message;
  for (const detail of details) {
    const line = document.createElement("div");
    line.className = "guidance-detail";
    line.textContent = detail;
    box.appendChild(line);
  }
  target.appendChild(box);
}

function bindPane(area: AreaName, pane: PaneName, id: string): HTMLTextAreaElement {
  const textarea = el<HTMLTextAreaElement>(id);
  textarea.addEventListener("input", () => {
    workspace.setPane(area, pane, textarea.value);
    refreshStaleBanners();
  });
  return textarea;
}

function refreshStaleBanners(): void {
  for (const area of ["story", "knowledge"] as AreaName[]) {
    for (const pane of ["simple", "advanced"] as PaneName[]) {
      const banner = document.getElementById(`${area}-${pane}-stale`);
      if (banner) banner.hidden = !workspace.isStale(area, pane);
    }
  }
}

function applyViewMode(): void {
  for (const area of ["story", "knowledge", "output"] as AreaName[]) {
    const visible = workspace.visiblePanes(area);
    const section = el<HTMLElement>(`area-${area}`);
    section.hidden = visible.length === 0;
    for (const pane of ["simple", "advanced"] as PaneName[]) {
      const wrap = document.getElementById(`${area}-${pane}-wrap`);
      if (wrap) wrap.hidden = !visible.includes(pane);
    }
  }
}

function selectedFilters(): TimelineFilter[] {
  return Array.from(
    document.querySelectorAll<HTMLInputElement>("input[data-filter]:checked"),
  ).map((box) => box.dataset.filter as TimelineFilter);
}

function renderOutput(run: RunController): void {
  const timelineHost = el<HTMLElement>("timeline");
  const rawHost = el<HTMLTextAreaElement>("output-advanced");
  const model = run.model;
  if (!model) return;
  const last = model.sessions[model.sessions.length - 1];
  timelineHost.innerHTML =
    renderTimeline(last, { filters: selectedFilters(), legend: legendOn }) +
    renderAnswers(last);
  rawHost.value = run.status.result?.reports ?? "";
}

let legendOn = true;

export function boot(): void {
  const storySimple = bindPane("story", "simple", "story-simple");
  const storyAdvanced = bindPane("story", "advanced", "story-advanced");
  const knowledgeAdvanced = bindPane("knowledge", "advanced", "knowledge-advanced");
  const statusLine = el<HTMLElement>("status");
  const guidanceHost = el<HTMLElement>("guidance-host");

  for (const mode of ["simple", "advanced", "mixed"] as const) {
    el<HTMLButtonElement>(`mode-${mode}`).addEventListener("click", () => {
      workspace.setViewMode(mode);
      applyViewMode();
    });
  }

  el<HTMLButtonElement>("convert-nl").addEventListener("click", async () => {
    try {
      const body = await api.nlToStar({ text: storySimple.value });
      workspace.applyConversion("story", "advanced", body.star);
      storyAdvanced.value = body.star;
      refreshStaleBanners();
    } catch (error) {
      if (error instanceof ApiError) showGuidance(guidanceHost, error.message, error.diagnostics);
      else throw error;
    }
  });

  el<HTMLButtonElement>("convert-graph").addEventListener("click", async () => {
    try {
      const star = await graphEditor.emitStar(api);
      workspace.applyConversion("knowledge", "advanced", star);
      knowledgeAdvanced.value = star;
      refreshStaleBanners();
    } catch (error) {
      if (error instanceof EditorGuidance) {
        showGuidance(guidanceHost, error.message, error.details);
      } else throw error;
    }
  });

  el<HTMLButtonElement>("convert-knowledge-to-graph").addEventListener("click", async () => {
    try {
      const body = await api.starToGraph(knowledgeAdvanced.value);
      graphEditor.loadGraph(body.graph);
      workspace.applyConversion("knowledge", "simple", JSON.stringify(body.graph, null, 2));
      statusLine.textContent = `graph loaded: ${body.graph.nodes.length} nodes`;
    } catch (error) {
      if (error instanceof ApiError) showGuidance(guidanceHost, error.message, error.diagnostics);
      else throw error;
    }
  });

  const run = new RunController(api, (status) => {
    statusLine.textContent =
      status.phase === "running"
        ? `reading... sessions started: ${status.sessionsStarted.join(", ") || "-"}`
        : status.phase;
    for (const box of document.querySelectorAll<HTMLInputElement>("input[data-filter]")) {
      box.disabled = !run.filtersEnabled;
    }
    if (status.phase === "done") renderOutput(run);
    if (status.phase === "failed" && status.error) {
      showGuidance(guidanceHost, status.error);
    }
  });

  el<HTMLButtonElement>("start-reading").addEventListener("click", async () => {
    try {
      await run.run(storyAdvanced.value, knowledgeAdvanced.value);
    } catch (error) {
      if (error instanceof ApiError) showGuidance(guidanceHost, error.message, error.diagnostics);
      else throw error;
    }
  });

  for (const box of document.querySelectorAll<HTMLInputElement>("input[data-filter]")) {
    box.addEventListener("change", () => renderOutput(run));
  }
  el<HTMLButtonElement>("legend-toggle").addEventListener("click", () => {
    legendOn = !legendOn;
    renderOutput(run);
  });

  el<HTMLButtonElement>("browse-examples").addEventListener("click", async () => {
    const stories = await repository.open("examples");
    if (stories.length > 0) {
      repository.copyToWorkspace(stories[0], workspace);
      storyAdvanced.value = workspace.areas.story.advanced;
      knowledgeAdvanced.value = workspace.areas.knowledge.advanced;
      statusLine.textContent = `loaded example: ${stories[0].title}`;
    }
  });

  // repository menu: sign-in, save, share, comments in one place
  let currentStoryId: string | null = null;

  el<HTMLButtonElement>("sign-in").addEventListener("click", async () => {
    const username = el<HTMLInputElement>("username").value;
    const password = el<HTMLInputElement>("password").value;
    try {
      await api.login(username, password).catch(() => api.register(username, password));
      statusLine.textContent = `signed in as ${username}`;
    } catch (error) {
      if (error instanceof ApiError) showGuidance(guidanceHost, error.message);
      else throw error;
    }
  });

  el<HTMLButtonElement>("save-story").addEventListener("click", async () => {
    try {
      const record = await api.saveStory({
        title: el<HTMLInputElement>("story-title").value || "untitled",
        story: storyAdvanced.value,
        knowledge: knowledgeAdvanced.value,
      });
      currentStoryId = record.id;
      statusLine.textContent = `saved ${record.title} (${record.visibility})`;
    } catch (error) {
      if (error instanceof ApiError) showGuidance(guidanceHost, error.message);
      else throw error;
    }
  });

  el<HTMLButtonElement>("share-story").addEventListener("click", async () => {
    if (!currentStoryId) return showGuidance(guidanceHost, "save the story first");
    try {
      await repository.share(currentStoryId);
      statusLine.textContent = "story shared to the public repository";
    } catch (error) {
      if (error instanceof ApiError) showGuidance(guidanceHost, error.message);
      else throw error;
    }
  });

  el<HTMLButtonElement>("post-comment").addEventListener("click", async () => {
    if (!currentStoryId) return showGuidance(guidanceHost, "save the story first");
    try {
      await repository.comment(currentStoryId, el<HTMLInputElement>("comment-body").value);
      const comments = await repository.comments(currentStoryId);
      el<HTMLElement>("comments").innerHTML = comments
        .map((c) => `<li><b>${c.author}</b>: ${c.body}</li>`)
        .join("");
    } catch (error) {
      if (error instanceof ApiError) showGuidance(guidanceHost, error.message);
      else throw error;
    }
  });

  applyViewMode();
}

if (typeof document !== "undefined" && document.getElementById("area-story")) {
  boot();
}
