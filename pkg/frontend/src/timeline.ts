/** Timeline view of a comprehension model.
 *
 * Pure functions from the structured session payload to cell classes and
 * HTML; no reasoning happens here. Green / red / dark grey cells encode
 * positive / negative / unknown, a magnifying-glass badge marks observed
 * values, and the row header's background encodes action / fluent /
 * constant.
 */

import type { Cell, ConceptKind, ConceptRow, SessionPayload } from "./model.js";

export const CELL_CLASS: Record<Cell["value"], string> = {
  positive: "cell-positive",
  negative: "cell-negative",
  unknown: "cell-unknown",
};

export const KIND_CLASS: Record<ConceptKind, string> = {
  action: "kind-action",
  fluent: "kind-fluent",
  constant: "kind-constant",
};

export const OBSERVED_CLASS = "cell-observed";
export const OBSERVED_BADGE = "\u{1F50D}";

export type TimelineFilter =
  | "changing-only"
  | "no-fluents"
  | "no-actions"
  | "no-constants";

export function cellClass(cell: Cell): string {
  return cell.observed
    ? `${CELL_CLASS[cell.value]} ${OBSERVED_CLASS}`
    : CELL_CLASS[cell.value];
}

export function kindClass(kind: ConceptKind): string {
  return KIND_CLASS[kind];
}

/** A row changes when the payload shows both truth values over time. */
export function rowChanges(row: ConceptRow): boolean {
  const seen = new Set(
    row.cells.filter((c) => c.value !== "unknown").map((c) => c.value),
  );
  return seen.size > 1;
}

export function visibleRows(rows: ConceptRow[], filters: TimelineFilter[]): ConceptRow[] {
  return rows.filter((row) => {
    if (filters.includes("no-fluents") && row.kind === "fluent") return false;
    if (filters.includes("no-actions") && row.kind === "action") return false;
    if (filters.includes("no-constants") && row.kind === "constant") return false;
    if (filters.includes("changing-only") && !rowChanges(row)) return false;
    return true;
  });
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export interface TimelineOptions {
  filters?: TimelineFilter[];
  legend?: boolean;
}

export function renderLegend(): string {
  return (
    '<div class="timeline-legend">' +
    '<span class="cell-positive">positive</span>' +
    '<span class="cell-negative">negative</span>' +
    '<span class="cell-unknown">unknown</span>' +
    `<span class="${OBSERVED_CLASS}">${OBSERVED_BADGE} observed</span>` +
    '<span class="kind-action">action</span>' +
    '<span class="kind-fluent">fluent</span>' +
    '<span class="kind-constant">constant</span>' +
    "</div>"
  );
}

export function renderTimeline(session: SessionPayload, options: TimelineOptions = {}): string {
  const rows = visibleRows(session.concepts, options.filters ?? []);
  const parts: string[] = [];
  if (options.legend !== false) parts.push(renderLegend());
  parts.push('<table class="timeline">');
  const header = Array.from({ length: session.horizon + 1 }, (_, t) => `<th>${t}</th>`);
  parts.push(`<thead><tr><th>concept</th>${header.join("")}</tr></thead>`);
  parts.push("<tbody>");
  for (const row of rows) {
    const cells = row.cells
      .map((cell) => {
        const badge = cell.observed ? OBSERVED_BADGE : "";
        return `<td class="${cellClass(cell)}" data-t="${cell.t}">${badge}</td>`;
      })
      .join("");
    parts.push(
      `<tr><th class="${kindClass(row.kind)}">${escapeHtml(row.name)}</th>${cells}</tr>`,
    );
  }
  parts.push("</tbody></table>");
  return parts.join("");
}

export function renderAnswers(session: SessionPayload): string {
  const blocks = session.answers.map((block) => {
    const rows = block.choices
      .map(
        (choice) =>
          `<li class="verdict-${choice.verdict}">${escapeHtml(choice.literal)} at ` +
          `${choice.time}: ${choice.verdict}</li>`,
      )
      .join("");
    return `<div class="answer-block"><h4>q(${block.question})</h4><ul>${rows}</ul></div>`;
  });
  return blocks.join("");
}
