import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { EditorGuidance, GraphEditorModel } from "../src/graphEditor.js";
import { fakeFetch, json } from "./helpers.js";

const CAPTION_RULE = "c(01) :: pred1(Argument1,Argument2), pred2 causes pred3(Argument3).\n";

function drawOneRuleGraph(editor: GraphEditorModel): void {
  const pred1 = editor.addLiteral("pred1", 2, "positive", 0, 0);
  const pred2 = editor.addLiteral("pred2", 0, "positive", 0, 80);
  const rule = editor.addRule("causal-rule", 120, 40);
  const pred3 = editor.addLiteral("pred3", 1, "positive", 240, 40);
  editor.connect(pred1.id, rule.id, ["Argument1", "Argument2"]);
  editor.connect(pred2.id, rule.id);
  editor.connect(rule.id, pred3.id, ["Argument3"]);
}

describe("drawing the one-rule graph", () => {
  it("builds four nodes and three edges with inferred edge kinds", () => {
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    const doc = editor.toJSON();
    expect(doc.nodes).toHaveLength(4);
    expect(doc.edges).toHaveLength(3);
    expect(doc.edges.map((e) => e.kind)).toEqual(["body", "body", "head"]);
    expect(doc.edges[0].arguments).toEqual(["Argument1", "Argument2"]);
  });

  it("emits the rule text through the conversion endpoint", async () => {
    const { fetchImpl, calls } = fakeFetch({
      "POST /api/convert/graph2star": (call) => {
        const graph = (call.body as { graph: { nodes: unknown[]; edges: unknown[] } }).graph;
        expect(graph.nodes).toHaveLength(4);
        expect(graph.edges).toHaveLength(3);
        return json({ star: CAPTION_RULE, diagnostics: [] });
      },
    });
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    const star = await editor.emitStar(new ApiClient("", fetchImpl));
    expect(star).toBe(CAPTION_RULE);
    expect(calls).toHaveLength(1);
  });

  it("surfaces server guidance when the graph is invalid", async () => {
    const { fetchImpl } = fakeFetch({
      "POST /api/convert/graph2star": () =>
        json(
          {
            detail: {
              message: "the graph does not express a valid rule set",
              diagnostics: ["error: rule c01 has 2 head literals edges: e3, e4"],
            },
          },
          400,
        ),
    });
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    await expect(editor.emitStar(new ApiClient("", fetchImpl))).rejects.toThrowError(
      EditorGuidance,
    );
  });
});

describe("editing operations", () => {
  it("auto-assigns the next free rule label per kind", () => {
    const editor = new GraphEditorModel();
    expect(editor.addRule("causal-rule").label).toBe("c01");
    expect(editor.addRule("causal-rule").label).toBe("c02");
    expect(editor.addRule("property-rule").label).toBe("p01");
  });

  it("reuses one literal node per name, arity and polarity", () => {
    const editor = new GraphEditorModel();
    const first = editor.addLiteral("p", 1, "positive");
    const again = editor.addLiteral("p", 1, "positive");
    const negated = editor.addLiteral("p", 1, "negative");
    expect(again).toBe(first);
    expect(negated.id).not.toBe(first.id);
  });

  it("connecting two rules draws a priority edge", () => {
    const editor = new GraphEditorModel();
    const strong = editor.addRule("causal-rule");
    const weak = editor.addRule("causal-rule");
    const edge = editor.connect(strong.id, weak.id);
    expect(edge.kind).toBe("priority");
    expect(edge.arguments).toEqual([]);
  });

  it("refuses literal-to-literal edges with guidance", () => {
    const editor = new GraphEditorModel();
    const a = editor.addLiteral("a", 0, "positive");
    const b = editor.addLiteral("b", 0, "positive");
    expect(() => editor.connect(a.id, b.id)).toThrowError(/literals connect only to rules/);
  });

  it("edits argument labels on body and head edges only", () => {
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    editor.setArgumentLabel("e1", ["X", "Y"]);
    expect(editor.toJSON().edges[0].arguments).toEqual(["X", "Y"]);
    const strong = editor.addRule("causal-rule");
    const weak = editor.addRule("causal-rule");
    const priority = editor.connect(strong.id, weak.id);
    expect(() => editor.setArgumentLabel(priority.id, ["X"])).toThrowError(
      /priority edges carry no arguments/,
    );
  });

  it("removing a node drops its edges", () => {
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    editor.removeNode("rule_c01");
    expect(editor.toJSON().edges).toHaveLength(0);
  });
});

describe("grouping, folding, search and fit", () => {
  it("groups nodes one level deep and folds them visually", () => {
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    const group = editor.group(["rule_c01", "lit_pred1_2_pos"], "intro");
    expect(editor.node("rule_c01")?.parent).toBe(group.id);
    expect(() => editor.group(["rule_c01"], "again")).toThrowError(/already grouped/);
    expect(() => editor.group([group.id], "outer")).toThrowError(/other groups/);
    expect(editor.toggleFold(group.id)).toBe(true);
    expect(editor.hiddenNodes()).toEqual(new Set(["rule_c01", "lit_pred1_2_pos"]));
    expect(editor.toggleFold(group.id)).toBe(false);
    expect(editor.hiddenNodes().size).toBe(0);
  });

  it("search finds nodes by label, exact match first", () => {
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    expect(editor.search("pred1/2")?.id).toBe("lit_pred1_2_pos");
    expect(editor.search("pred3")?.id).toBe("lit_pred3_1_pos");
    expect(editor.search("nothing")).toBeUndefined();
  });

  it("fit computes a transform covering the drawing", () => {
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    const { scale, offsetX, offsetY } = editor.fitTransform(520, 220);
    expect(scale).toBeCloseTo(2.0, 5);
    expect(offsetX).toBe(20);
    expect(offsetY).toBe(20);
    const empty = new GraphEditorModel();
    expect(empty.fitTransform(100, 100).scale).toBe(1);
  });

  it("grouping never changes the emitted document's edges", () => {
    const editor = new GraphEditorModel();
    drawOneRuleGraph(editor);
    const before = editor.toJSON().edges;
    editor.group(["rule_c01"], "solo");
    expect(editor.toJSON().edges).toEqual(before);
  });
});
