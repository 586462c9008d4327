/** Start-reading control: queue, watch the stream, fetch the final model.
 *
 * Filters stay disabled while a run is in flight; the timeline and raw
 * output render only what the service returns.
 */

import type { ApiClient } from "./api.js";
import type { JobResult, ProgressEvent, StoryPayload } from "./model.js";

export type RunPhase = "idle" | "running" | "done" | "failed";

export interface RunStatus {
  phase: RunPhase;
  jobId: string | null;
  sessionsStarted: number[];
  lastEvent: string | null;
  error: string | null;
  result: JobResult | null;
}

export class RunController {
  status: RunStatus = {
    phase: "idle",
    jobId: null,
    sessionsStarted: [],
    lastEvent: null,
    error: null,
    result: null,
  };

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (status: RunStatus) => void = () => undefined,
  ) {}

  get filtersEnabled(): boolean {
    return this.status.phase === "done";
  }

  get model(): StoryPayload | null {
    return this.status.result?.model ?? null;
  }

  private update(partial: Partial<RunStatus>): void {
    this.status = { ...this.status, ...partial };
    this.onChange(this.status);
  }

  /** Submit the combined story + knowledge text and follow it to the end. */
  async run(storyText: string, knowledgeText: string, options: object = {}): Promise<RunStatus> {
    const text = `${storyText.trimEnd()}\n\n${knowledgeText.trimEnd()}\n`;
    this.update({
      phase: "running",
      jobId: null,
      sessionsStarted: [],
      lastEvent: null,
      error: null,
      result: null,
    });
    const { id } = await this.api.queueStory(text, options);
    this.update({ jobId: id });
    await this.api.streamProgress(id, (event: ProgressEvent) => {
      const started =
        event.phase === "session_started" && typeof event.session === "number"
          ? [...this.status.sessionsStarted, event.session]
          : this.status.sessionsStarted;
      this.update({ lastEvent: event.phase, sessionsStarted: started });
    });
    const result = await this.api.results(id);
    if (result.status === "done") {
      this.update({ phase: "done", result });
    } else {
      this.update({ phase: "failed", result, error: result.error ?? "run failed" });
    }
    return this.status;
  }
}
