/** Story browser: personal workspace, public repository, examples. */

import type { ApiClient } from "./api.js";
import type { CommentRecord, StoryRecord } from "./model.js";
import type { WorkspaceState } from "./workspace.js";

export type Scope = "mine" | "public" | "examples";

export class RepositoryBrowser {
  stories: StoryRecord[] = [];
  scope: Scope = "examples";

  constructor(private readonly api: ApiClient) {}

  async open(scope: Scope): Promise<StoryRecord[]> {
    this.scope = scope;
    this.stories = await this.api.listStories(scope);
    return this.stories;
  }

  share(id: string): Promise<StoryRecord> {
    return this.api.shareStory(id);
  }

  comments(id: string): Promise<CommentRecord[]> {
    return this.api.listComments(id);
  }

  comment(id: string, body: string): Promise<CommentRecord> {
    return this.api.addComment(id, body);
  }

  /** Load a repository story into the editing panes. */
  copyToWorkspace(record: StoryRecord, workspace: WorkspaceState): void {
    workspace.setPane("story", "advanced", record.story);
    workspace.areas.story.stale = null;
    workspace.setPane("knowledge", "advanced", record.knowledge);
    workspace.areas.knowledge.stale = null;
  }
}
