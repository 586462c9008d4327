"""Background-knowledge graphs: the visual editor's data model.

Rules are nodes, literals are nodes keyed by ``name/arity`` and polarity,
and edges carry the argument terms. Conversion to and from STAR rule text
is lossless up to node ids and positions; guidance diagnostics explain any
graph shape the language cannot express and point at the offending
elements.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import networkx as nx

from .core import (
    Domain,
    FluentDecl,
    Literal,
    Priority,
    Rule,
    RuleLabel,
    Term,
    canonical_text,
)
from .parser import parse_term

CAUSAL_RULE = "causal-rule"
PROPERTY_RULE = "property-rule"
LITERAL = "literal"
GROUP = "group"

_RULE_LABEL_RE = re.compile(r"([cp])(\d+)\Z")
_LITERAL_LABEL_RE = re.compile(r"([a-z][a-zA-Z0-9_]*)/(\d+)\Z")

EXPORT_FORMATS = ("structured-graph-text", "graphml", "image-placeholder-manifest")


class GraphError(ValueError):
    """Structurally impossible graph (dangling edge or parent, duplicate id)."""


@dataclass(frozen=True)
class GraphNode:
    id: str
    kind: str
    label: str
    polarity: Optional[str] = None  # literals only: "positive" | "negative"
    parent: Optional[str] = None
    position: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if self.kind not in (CAUSAL_RULE, PROPERTY_RULE, LITERAL, GROUP):
            raise GraphError(f"unknown node kind {self.kind!r}")
        if self.kind == LITERAL and self.polarity not in ("positive", "negative"):
            raise GraphError("literal nodes need a positive or negative polarity")

    @property
    def is_rule(self) -> bool:
        return self.kind in (CAUSAL_RULE, PROPERTY_RULE)


@dataclass(frozen=True)
class GraphEdge:
    id: str
    kind: str  # "body" | "head" | "priority"
    source: str
    target: str
    argument_label: tuple[Term, ...] = ()

    def __post_init__(self):
        if self.kind not in ("body", "head", "priority"):
            raise GraphError(f"unknown edge kind {self.kind!r}")


@dataclass(frozen=True)
class GuidanceDiagnostic:
    severity: str  # "error" | "warning"
    message: str
    nodes: tuple[str, ...] = ()
    edges: tuple[str, ...] = ()
    hint: Optional[str] = None

    def render(self) -> str:
        where = ""
        if self.nodes:
            where += " nodes: " + ", ".join(self.nodes)
        if self.edges:
            where += " edges: " + ", ".join(self.edges)
        text = f"{self.severity}: {self.message}{where}"
        if self.hint:
            text += f" (hint: {self.hint})"
        return text


@dataclass(frozen=True)
class KnowledgeGraph:
    nodes: tuple[GraphNode, ...] = ()
    edges: tuple[GraphEdge, ...] = ()
    fluents: tuple[FluentDecl, ...] = ()

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate node id")
        edge_ids = [e.id for e in self.edges]
        if len(set(edge_ids)) != len(edge_ids):
            raise GraphError("duplicate edge id")
        known = set(ids)
        for edge in self.edges:
            if edge.source not in known or edge.target not in known:
                raise GraphError(f"edge {edge.id} has a missing endpoint")
        for node in self.nodes:
            if node.parent is not None:
                parent = self.node(node.parent, None)
                if parent is None or parent.kind != GROUP:
                    raise GraphError(f"node {node.id} has a dangling group parent")

    def node(self, node_id: str, default=KeyError) -> Optional[GraphNode]:
        for node in self.nodes:
            if node.id == node_id:
                return node
        if default is KeyError:
            raise KeyError(node_id)
        return default

    def rule_nodes(self) -> list[GraphNode]:
        return [n for n in self.nodes if n.is_rule]

    def edges_into(self, node_id: str, kind: Optional[str] = None) -> list[GraphEdge]:
        return [
            e for e in self.edges if e.target == node_id and (kind is None or e.kind == kind)
        ]

    def edges_out_of(self, node_id: str, kind: Optional[str] = None) -> list[GraphEdge]:
        return [
            e for e in self.edges if e.source == node_id and (kind is None or e.kind == kind)
        ]


def next_rule_label(graph: KnowledgeGraph, kind: str) -> str:
    """Next free auto-assigned label for a new rule node (c01, c02, ...)."""
    letter = "c" if kind == CAUSAL_RULE else "p"
    taken = {
        int(m.group(2))
        for n in graph.rule_nodes()
        if (m := _RULE_LABEL_RE.match(n.label)) and m.group(1) == letter
    }
    index = 1
    while index in taken:
        index += 1
    return f"{letter}{index:02d}"


# -- validation ----------------------------------------------------------


def validate(graph: KnowledgeGraph) -> list[GuidanceDiagnostic]:
    """Guidance for every shape STAR rules cannot express; empty iff
    :func:`graph_to_star` will succeed."""
    diags: list[GuidanceDiagnostic] = []
    seen_labels: dict[str, str] = {}
    for node in graph.nodes:
        if node.is_rule:
            if not _RULE_LABEL_RE.match(node.label):
                diags.append(
                    GuidanceDiagnostic(
                        "error",
                        f"rule label {node.label!r} is not of the c01/p01 form",
                        nodes=(node.id,),
                        hint="rename the rule, e.g. c01",
                    )
                )
                continue
            if node.label in seen_labels:
                diags.append(
                    GuidanceDiagnostic(
                        "error",
                        f"rule label {node.label!r} is used twice",
                        nodes=(seen_labels[node.label], node.id),
                        hint="give each rule a unique label",
                    )
                )
            seen_labels[node.label] = node.id
            expected = "c" if node.kind == CAUSAL_RULE else "p"
            if node.label[0] != expected:
                diags.append(
                    GuidanceDiagnostic(
                        "error",
                        f"{node.kind} node labelled {node.label!r}",
                        nodes=(node.id,),
                        hint=f"labels of {node.kind} nodes start with {expected!r}",
                    )
                )
        elif node.kind == LITERAL:
            if not _LITERAL_LABEL_RE.match(node.label):
                diags.append(
                    GuidanceDiagnostic(
                        "error",
                        f"literal label {node.label!r} is not of the name/arity form",
                        nodes=(node.id,),
                        hint="label literals like have_ask/3",
                    )
                )
        elif node.kind == GROUP and node.parent is not None:
            diags.append(
                GuidanceDiagnostic(
                    "error",
                    "groups cannot be nested inside groups",
                    nodes=(node.id,),
                    hint="flatten the grouping",
                )
            )

    for edge in graph.edges:
        source = graph.node(edge.source)
        target = graph.node(edge.target)
        if edge.kind == "priority":
            if not (source.is_rule and target.is_rule):
                diags.append(
                    GuidanceDiagnostic(
                        "error",
                        "priority edges connect rule nodes only",
                        edges=(edge.id,),
                        nodes=(source.id, target.id),
                        hint="draw the dashed edge from the stronger rule to the weaker one",
                    )
                )
            continue
        if source.kind == LITERAL and target.kind == LITERAL:
            diags.append(
                GuidanceDiagnostic(
                    "error",
                    "literals connect only to rules",
                    edges=(edge.id,),
                    nodes=(source.id, target.id),
                    hint="route the connection through a rule node",
                )
            )
            continue
        if edge.kind == "body" and not (source.kind == LITERAL and target.is_rule):
            diags.append(
                GuidanceDiagnostic(
                    "error",
                    "body edges run from a literal into a rule",
                    edges=(edge.id,),
                    hint="swap the edge direction or its endpoints",
                )
            )
            continue
        if edge.kind == "head" and not (source.is_rule and target.kind == LITERAL):
            diags.append(
                GuidanceDiagnostic(
                    "error",
                    "head edges run from a rule to a literal",
                    edges=(edge.id,),
                    hint="swap the edge direction or its endpoints",
                )
            )
            continue
        literal_node = source if source.kind == LITERAL else target
        match = _LITERAL_LABEL_RE.match(literal_node.label)
        if match and len(edge.argument_label) != int(match.group(2)):
            diags.append(
                GuidanceDiagnostic(
                    "error",
                    f"edge carries {len(edge.argument_label)} arguments but "
                    f"{literal_node.label} expects {match.group(2)}",
                    edges=(edge.id,),
                    nodes=(literal_node.id,),
                    hint="edit the edge's argument labels to match the arity",
                )
            )

    for node in graph.nodes:
        if node.is_rule:
            heads = graph.edges_out_of(node.id, "head")
            if len(heads) == 0:
                diags.append(
                    GuidanceDiagnostic(
                        "error",
                        f"rule {node.label} has no head literal",
                        nodes=(node.id,),
                        hint="draw one edge from the rule to its conclusion literal",
                    )
                )
            elif len(heads) > 1:
                diags.append(
                    GuidanceDiagnostic(
                        "error",
                        f"rule {node.label} has {len(heads)} head literals",
                        nodes=(node.id,),
                        edges=tuple(e.id for e in heads),
                        hint="a rule concludes exactly one literal; split the rule",
                    )
                )
        elif node.kind == LITERAL:
            touching = graph.edges_into(node.id) + graph.edges_out_of(node.id)
            if not [e for e in touching if e.kind in ("body", "head")]:
                diags.append(
                    GuidanceDiagnostic(
                        "error",
                        f"literal {node.label} is referenced nowhere",
                        nodes=(node.id,),
                        hint="connect the literal to a rule or delete it",
                    )
                )
    return diags


# -- conversion ----------------------------------------------------------


def _rule_label_of(node: GraphNode) -> RuleLabel:
    match = _RULE_LABEL_RE.match(node.label)
    kind = "causal" if match.group(1) == "c" else "property"
    return RuleLabel(kind, int(match.group(2)))


def _edge_literal(graph: KnowledgeGraph, edge: GraphEdge, literal_node: GraphNode) -> Literal:
    name = _LITERAL_LABEL_RE.match(literal_node.label).group(1)
    return Literal(literal_node.polarity == "positive", name, tuple(edge.argument_label))


def graph_to_star(graph: KnowledgeGraph) -> tuple[str, list[GuidanceDiagnostic]]:
    """Rule text for a valid graph; ``("", diagnostics)`` otherwise.

    Rules are emitted sorted by label, then the priorities; grouping and
    positions never affect the output.
    """
    diags = validate(graph)
    if any(d.severity == "error" for d in diags):
        return "", diags
    rules: list[Rule] = []
    for node in sorted(graph.rule_nodes(), key=lambda n: n.label):
        label = _rule_label_of(node)
        head_edge = graph.edges_out_of(node.id, "head")[0]
        head = _edge_literal(graph, head_edge, graph.node(head_edge.target))
        body = tuple(
            _edge_literal(graph, edge, graph.node(edge.source))
            for edge in graph.edges_into(node.id, "body")
        )
        rules.append(Rule(label, body, head))
    priorities: list[Priority] = []
    for edge in graph.edges:
        if edge.kind == "priority":
            priorities.append(
                Priority(
                    _rule_label_of(graph.node(edge.source)),
                    _rule_label_of(graph.node(edge.target)),
                )
            )
    priorities.sort(key=canonical_text)
    lines: list[str] = []
    if graph.fluents:
        items = ",".join(canonical_text(f) for f in graph.fluents)
        lines.append(f"fluents([{items}]).")
    lines.extend(canonical_text(rule) for rule in rules)
    lines.extend(canonical_text(p) for p in priorities)
    return "\n".join(lines) + ("\n" if lines else ""), diags


def star_to_graph(
    rules: Sequence[Rule],
    priorities: Sequence[Priority] = (),
    fluents: Sequence[FluentDecl] = (),
) -> KnowledgeGraph:
    """One node per rule, one literal node per (name, arity, polarity)."""
    nodes: list[GraphNode] = []
    edges: list[GraphEdge] = []
    literal_ids: dict[tuple[str, int, bool], str] = {}

    def literal_node(lit: Literal) -> str:
        key = (lit.name, len(lit.args), lit.positive)
        if key not in literal_ids:
            suffix = "pos" if lit.positive else "neg"
            node_id = f"lit_{lit.name}_{len(lit.args)}_{suffix}"
            literal_ids[key] = node_id
            nodes.append(
                GraphNode(
                    node_id,
                    LITERAL,
                    f"{lit.name}/{len(lit.args)}",
                    polarity="positive" if lit.positive else "negative",
                )
            )
        return literal_ids[key]

    rule_ids: dict[RuleLabel, str] = {}
    counter = 0
    for rule in rules:
        label_text = f"{rule.label.letter}{rule.label.index:02d}"
        node_id = f"rule_{label_text}"
        rule_ids[rule.label] = node_id
        kind = CAUSAL_RULE if rule.label.kind == "causal" else PROPERTY_RULE
        nodes.append(GraphNode(node_id, kind, label_text))
        for literal in rule.body:
            counter += 1
            edges.append(
                GraphEdge(f"e{counter}", "body", literal_node(literal), node_id, literal.args)
            )
        counter += 1
        edges.append(
            GraphEdge(f"e{counter}", "head", node_id, literal_node(rule.head), rule.head.args)
        )
    for priority in priorities:
        counter += 1
        edges.append(
            GraphEdge(
                f"e{counter}",
                "priority",
                rule_ids[priority.stronger],
                rule_ids[priority.weaker],
            )
        )
    return KnowledgeGraph(tuple(nodes), tuple(edges), tuple(fluents))


def domain_to_graph(domain: Domain) -> KnowledgeGraph:
    return star_to_graph(domain.rules, domain.priorities, domain.fluents)


# -- grouping ------------------------------------------------------------


def group_rules(graph: KnowledgeGraph, node_ids: Iterable[str], label: str) -> KnowledgeGraph:
    """Attach the given nodes to a fresh group; one level deep only."""
    node_ids = list(node_ids)
    members = []
    for node_id in node_ids:
        node = graph.node(node_id, None)
        if node is None:
            raise GraphError(f"cannot group unknown node {node_id!r}")
        if node.kind == GROUP:
            raise GraphError("groups cannot contain other groups")
        if node.parent is not None:
            raise GraphError(f"node {node_id!r} is already grouped")
        members.append(node)
    taken = {n.id for n in graph.nodes}
    index = 1
    while f"group{index}" in taken:
        index += 1
    group_id = f"group{index}"
    group_node = GraphNode(group_id, GROUP, label)
    new_nodes = tuple(
        replace(n, parent=group_id) if n.id in set(node_ids) else n for n in graph.nodes
    ) + (group_node,)
    return replace(graph, nodes=new_nodes)


# -- interchange ---------------------------------------------------------


def graph_to_json(graph: KnowledgeGraph) -> dict:
    return {
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind,
                "label": n.label,
                **({"polarity": n.polarity} if n.polarity else {}),
                **({"parent": n.parent} if n.parent else {}),
                **(
                    {"x": n.position[0], "y": n.position[1]}
                    if n.position is not None
                    else {}
                ),
            }
            for n in graph.nodes
        ],
        "edges": [
            {
                "id": e.id,
                "kind": e.kind,
                "source": e.source,
                "target": e.target,
                "arguments": [canonical_text(t) for t in e.argument_label],
            }
            for e in graph.edges
        ],
        "fluents": [f.signature for f in graph.fluents],
    }


def graph_from_json(data: dict) -> KnowledgeGraph:
    try:
        nodes = tuple(
            GraphNode(
                raw["id"],
                raw["kind"],
                raw["label"],
                polarity=raw.get("polarity"),
                parent=raw.get("parent"),
                position=(raw["x"], raw["y"]) if "x" in raw and "y" in raw else None,
            )
            for raw in data["nodes"]
        )
        edges = tuple(
            GraphEdge(
                raw["id"],
                raw["kind"],
                raw["source"],
                raw["target"],
                tuple(parse_term(t) for t in raw.get("arguments", ())),
            )
            for raw in data["edges"]
        )
        fluents = []
        for signature in data.get("fluents", ()):
            name, _, arity = signature.partition("/")
            fluents.append(FluentDecl(name, int(arity)))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph document: {exc}") from exc
    return KnowledgeGraph(nodes, edges, tuple(fluents))


def _to_networkx(graph: KnowledgeGraph) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    for node in graph.nodes:
        attrs = {"kind": node.kind, "label": node.label}
        if node.polarity:
            attrs["polarity"] = node.polarity
        if node.parent:
            attrs["parent"] = node.parent
        if node.position is not None:
            attrs["x"], attrs["y"] = node.position
        g.add_node(node.id, **attrs)
    for edge in graph.edges:
        g.add_edge(
            edge.source,
            edge.target,
            key=edge.id,
            kind=edge.kind,
            argumentLabel=",".join(canonical_text(t) for t in edge.argument_label),
        )
    return g


def export(graph: KnowledgeGraph, fmt: str) -> bytes:
    """Serialize for third-party tools; see EXPORT_FORMATS."""
    fmt = fmt.lower()
    if fmt in ("structured-graph-text", "json"):
        return (json.dumps(graph_to_json(graph), indent=2) + "\n").encode("utf-8")
    if fmt == "graphml":
        return ("\n".join(nx.generate_graphml(_to_networkx(graph))) + "\n").encode("utf-8")
    if fmt in ("image-placeholder-manifest", "manifest"):
        manifest = {
            "elements": [
                {
                    "type": "node",
                    "id": n.id,
                    "kind": n.kind,
                    "label": n.label,
                    "polarity": n.polarity,
                    "x": n.position[0] if n.position else 0.0,
                    "y": n.position[1] if n.position else 0.0,
                }
                for n in graph.nodes
            ]
            + [
                {
                    "type": "edge",
                    "id": e.id,
                    "kind": e.kind,
                    "source": e.source,
                    "target": e.target,
                    "label": ",".join(canonical_text(t) for t in e.argument_label),
                }
                for e in graph.edges
            ]
        }
        return (json.dumps(manifest, indent=2) + "\n").encode("utf-8")
    raise ValueError(f"unknown export format {fmt!r}; choose from {', '.join(EXPORT_FORMATS)}")


# -- view helpers (degree-based filters for the editor) -------------------


def low_density_rules(graph: KnowledgeGraph, max_degree: int = 1) -> list[str]:
    """Rule node ids with at most ``max_degree`` connected literals."""
    result = []
    for node in graph.rule_nodes():
        degree = len(graph.edges_into(node.id, "body")) + len(
            graph.edges_out_of(node.id, "head")
        )
        if degree <= max_degree:
            result.append(node.id)
    return result


def disconnected_rules(graph: KnowledgeGraph) -> list[str]:
    """Rule node ids sharing no literal with any other rule."""
    literal_users: dict[str, set[str]] = {}
    for edge in graph.edges:
        if edge.kind == "body":
            literal_users.setdefault(edge.source, set()).add(edge.target)
        elif edge.kind == "head":
            literal_users.setdefault(edge.target, set()).add(edge.source)
    result = []
    for node in graph.rule_nodes():
        linked: set[str] = set()
        for edge in graph.edges_into(node.id, "body"):
            linked |= literal_users.get(edge.source, set())
        for edge in graph.edges_out_of(node.id, "head"):
            linked |= literal_users.get(edge.target, set())
        if not linked - {node.id}:
            result.append(node.id)
    return result
