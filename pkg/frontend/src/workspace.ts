/** Workspace layout state: three areas, two panes each, three view modes.
 *
 * Hidden panes keep their content. Editing one pane of an area marks its
 * sibling stale (shown as a banner) instead of auto-syncing; a successful
 * conversion clears the flag.
 */

export type AreaName = "story" | "knowledge" | "output";
export type PaneName = "simple" | "advanced";
export type ViewMode = "simple" | "advanced" | "mixed";

export interface AreaState {
  simple: string;
  advanced: string;
  stale: PaneName | null; // which pane is out of date, if any
}

export class WorkspaceState {
  readonly areas: Record<AreaName, AreaState> = {
    story: { simple: "", advanced: "", stale: null },
    knowledge: { simple: "", advanced: "", stale: null },
    output: { simple: "", advanced: "", stale: null },
  };

  private mode: ViewMode = "mixed";
  private maximized: AreaName | null = null;

  get viewMode(): ViewMode {
    return this.mode;
  }

  setViewMode(mode: ViewMode): void {
    this.mode = mode;
  }

  get maximizedArea(): AreaName | null {
    return this.maximized;
  }

  maximize(area: AreaName | null): void {
    this.maximized = area;
  }

  visiblePanes(area: AreaName): PaneName[] {
    if (this.maximized !== null && this.maximized !== area) return [];
    switch (this.mode) {
      case "simple":
        return ["simple"];
      case "advanced":
        return ["advanced"];
      default:
        return ["simple", "advanced"];
    }
  }

  setPane(area: AreaName, pane: PaneName, content: string): void {
    const state = this.areas[area];
    const sibling: PaneName = pane === "simple" ? "advanced" : "simple";
    state[pane] = content;
    // the other pane no longer reflects this one; mark it stale if non-empty
    state.stale = state[sibling] ? sibling : null;
  }

  /** Record a conversion result landing in the paired pane. */
  applyConversion(area: AreaName, into: PaneName, content: string): void {
    this.areas[area][into] = content;
    this.areas[area].stale = null;
  }

  isStale(area: AreaName, pane: PaneName): boolean {
    return this.areas[area].stale === pane;
  }
}
