/** Payload types mirroring the service API (docs/formats.md, docs/api.md). */

export type CellValue = "positive" | "negative" | "unknown";
export type ConceptKind = "fluent" | "action" | "constant";
export type Verdict = "accepted" | "rejected" | "possible";

export interface Cell {
  t: number;
  value: CellValue;
  observed: boolean;
}

export interface ConceptRow {
  name: string;
  signature: string;
  kind: ConceptKind;
  cells: Cell[];
}

export interface AnswerChoice {
  literal: string;
  time: number;
  verdict: Verdict;
}

export interface AnswerBlock {
  question: number;
  choices: AnswerChoice[];
}

export interface SessionPayload {
  session: number;
  horizon: number;
  concepts: ConceptRow[];
  answers: AnswerBlock[];
  warnings: string[];
}

export interface StoryPayload {
  sessions: SessionPayload[];
}

export interface Diagnostic {
  severity: string;
  line: number;
  column: number;
  message: string;
  hint?: string | null;
}

export interface GraphNodeDoc {
  id: string;
  kind: "causal-rule" | "property-rule" | "literal" | "group";
  label: string;
  polarity?: "positive" | "negative";
  parent?: string;
  x?: number;
  y?: number;
}

export interface GraphEdgeDoc {
  id: string;
  kind: "body" | "head" | "priority";
  source: string;
  target: string;
  arguments: string[];
}

export interface GraphDoc {
  nodes: GraphNodeDoc[];
  edges: GraphEdgeDoc[];
  fluents: string[];
}

export interface StoryRecord {
  id: string;
  owner: string;
  title: string;
  story: string;
  knowledge: string;
  visibility: "private" | "public";
  example: boolean;
  created: number;
  updated: number;
}

export interface CommentRecord {
  id: string;
  story_id: string;
  author: string;
  body: string;
  created: number;
}

export interface ProgressEvent {
  phase: string;
  session: number | null;
  [extra: string]: unknown;
}

export interface JobResult {
  status: "pending" | "done" | "failed";
  reports?: string | null;
  model?: StoryPayload | null;
  error?: string | null;
}
