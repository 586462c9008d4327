/** Editing model behind the knowledge-graph canvas.
 *
 * Purely structural: it builds the structured-graph-text document the
 * service understands. All validation and conversion semantics come from
 * the server; invalid shapes surface as guidance messages with element
 * ids to highlight.
 */

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { GraphDoc, GraphEdgeDoc, GraphNodeDoc } from "./model.js";

export type RuleKind = "causal-rule" | "property-rule";

export interface Guidance {
  message: string;
  highlight: string[];
}

export class GraphEditorModel {
  nodes: GraphNodeDoc[] = [];
  edges: GraphEdgeDoc[] = [];
  fluents: string[] = [];
  folded = new Set<string>(); // collapsed group ids; a view concern only

  private edgeCounter = 0;
  private groupCounter = 0;

  toJSON(): GraphDoc {
    return { nodes: [...this.nodes], edges: [...this.edges], fluents: [...this.fluents] };
  }

  loadGraph(doc: GraphDoc): void {
    this.nodes = [...doc.nodes];
    this.edges = [...doc.edges];
    this.fluents = [...doc.fluents];
    this.folded.clear();
    this.edgeCounter = this.edges.length;
    this.groupCounter = this.nodes.filter((n) => n.kind === "group").length;
  }

  node(id: string): GraphNodeDoc | undefined {
    return this.nodes.find((n) => n.id === id);
  }

  /** Auto-assigned unique label: c01, c02, ... / p01, p02, ... */
  nextRuleLabel(kind: RuleKind): string {
    const letter = kind === "causal-rule" ? "c" : "p";
    const taken = new Set(
      this.nodes
        .filter((n) => n.kind === kind)
        .map((n) => Number.parseInt(n.label.slice(1), 10)),
    );
    let index = 1;
    while (taken.has(index)) index += 1;
    return `${letter}${String(index).padStart(2, "0")}`;
  }

  addRule(kind: RuleKind, x = 0, y = 0): GraphNodeDoc {
    const label = this.nextRuleLabel(kind);
    const node: GraphNodeDoc = { id: `rule_${label}`, kind, label, x, y };
    this.nodes.push(node);
    return node;
  }

  addLiteral(
    name: string,
    arity: number,
    polarity: "positive" | "negative",
    x = 0,
    y = 0,
  ): GraphNodeDoc {
    const id = `lit_${name}_${arity}_${polarity === "positive" ? "pos" : "neg"}`;
    const existing = this.node(id);
    if (existing) return existing; // one node per (name, arity, polarity)
    const node: GraphNodeDoc = {
      id,
      kind: "literal",
      label: `${name}/${arity}`,
      polarity,
      x,
      y,
    };
    this.nodes.push(node);
    return node;
  }

  /** Edge kind follows the endpoints: literal->rule body, rule->literal head,
   * rule->rule priority. Anything else is refused with guidance. */
  connect(sourceId: string, targetId: string, args: string[] = []): GraphEdgeDoc {
    const source = this.node(sourceId);
    const target = this.node(targetId);
    if (!source || !target) {
      throw new EditorGuidance("connect existing elements", [sourceId, targetId]);
    }
    const sourceIsRule = source.kind === "causal-rule" || source.kind === "property-rule";
    const targetIsRule = target.kind === "causal-rule" || target.kind === "property-rule";
    let kind: GraphEdgeDoc["kind"];
    if (!sourceIsRule && targetIsRule) kind = "body";
    else if (sourceIsRule && !targetIsRule) kind = "head";
    else if (sourceIsRule && targetIsRule) kind = "priority";
    else {
      throw new EditorGuidance("literals connect only to rules", [sourceId, targetId]);
    }
    this.edgeCounter += 1;
    const edge: GraphEdgeDoc = {
      id: `e${this.edgeCounter}`,
      kind,
      source: sourceId,
      target: targetId,
      arguments: kind === "priority" ? [] : args,
    };
    this.edges.push(edge);
    return edge;
  }

  setArgumentLabel(edgeId: string, args: string[]): void {
    const edge = this.edges.find((e) => e.id === edgeId);
    if (!edge) throw new EditorGuidance("no such edge", [edgeId]);
    if (edge.kind === "priority") {
      throw new EditorGuidance("priority edges carry no arguments", [edgeId]);
    }
    edge.arguments = args;
  }

  removeNode(nodeId: string): void {
    this.nodes = this.nodes.filter((n) => n.id !== nodeId);
    this.edges = this.edges.filter((e) => e.source !== nodeId && e.target !== nodeId);
  }

  group(nodeIds: string[], label: string): GraphNodeDoc {
    for (const id of nodeIds) {
      const node = this.node(id);
      if (!node) throw new EditorGuidance("cannot group a missing node", [id]);
      if (node.kind === "group") {
        throw new EditorGuidance("groups cannot contain other groups", [id]);
      }
      if (node.parent) throw new EditorGuidance("node is already grouped", [id]);
    }
    this.groupCounter += 1;
    const group: GraphNodeDoc = {
      id: `group${this.groupCounter}`,
      kind: "group",
      label,
    };
    this.nodes.push(group);
    for (const id of nodeIds) {
      const node = this.node(id)!;
      node.parent = group.id;
    }
    return group;
  }

  toggleFold(groupId: string): boolean {
    if (this.folded.has(groupId)) {
      this.folded.delete(groupId);
      return false;
    }
    this.folded.add(groupId);
    return true;
  }

  /** Nodes hidden by collapsed groups; rendering skips them. */
  hiddenNodes(): Set<string> {
    const hidden = new Set<string>();
    for (const node of this.nodes) {
      if (node.parent && this.folded.has(node.parent)) hidden.add(node.id);
    }
    return hidden;
  }

  search(query: string): GraphNodeDoc | undefined {
    return this.nodes.find((n) => n.label === query) ??
      this.nodes.find((n) => n.label.includes(query));
  }

  /** Bounding box of all positioned nodes, for fit-to-screen and the
   * bird's-eye navigator. */
  bounds(): { x: number; y: number; width: number; height: number } {
    const placed = this.nodes.filter((n) => n.x !== undefined && n.y !== undefined);
    if (placed.length === 0) return { x: 0, y: 0, width: 0, height: 0 };
    const xs = placed.map((n) => n.x!);
    const ys = placed.map((n) => n.y!);
    const x = Math.min(...xs);
    const y = Math.min(...ys);
    return { x, y, width: Math.max(...xs) - x, height: Math.max(...ys) - y };
  }

  fitTransform(viewWidth: number, viewHeight: number, margin = 20): {
    scale: number;
    offsetX: number;
    offsetY: number;
  } {
    const box = this.bounds();
    if (box.width === 0 && box.height === 0) {
      return { scale: 1, offsetX: margin, offsetY: margin };
    }
    const scale = Math.min(
      (viewWidth - 2 * margin) / Math.max(box.width, 1),
      (viewHeight - 2 * margin) / Math.max(box.height, 1),
    );
    return {
      scale,
      offsetX: margin - box.x * scale,
      offsetY: margin - box.y * scale,
    };
  }

  /** Server-side conversion; guidance from a rejected graph is rethrown
   * with the offending element ids extracted for highlighting. */
  async emitStar(api: ApiClient): Promise<string> {
    try {
      const body = await api.graphToStar(this.toJSON());
      return body.star;
    } catch (error) {
      if (error instanceof ApiError) {
        throw new EditorGuidance(error.message, [], error.diagnostics);
      }
      throw error;
    }
  }
}

export class EditorGuidance extends Error {
  constructor(
    message: string,
    readonly highlight: string[] = [],
    readonly details: string[] = [],
  ) {
    super(message);
  }
}
