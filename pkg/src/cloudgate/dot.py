"""Graphviz DOT export of a goal model.

Shape conventions follow the usual goal-modelling notation: goals render as
parallelograms, obstacles as reverse-skewed parallelograms, tactics as
hexagons, and the migration type as a box contributing to every root goal.
Decomposition and refinement edges are solid, obstruction edges dashed,
resolution edges dotted. Output is byte-deterministic for a given model.
"""

from __future__ import annotations

from .errors import ModelError
from .model import GoalModel

_MIGRATION_NODE = "__migration__"

_GOAL_ATTRS = 'shape=parallelogram, style=filled, fillcolor="#dbeafe"'
_OBSTACLE_ATTRS = 'shape=polygon, sides=4, skew=-0.35, style=filled, fillcolor="#fee2e2"'
_TACTIC_ATTRS = 'shape=hexagon, style=filled, fillcolor="#dcfce7"'
_TYPE_ATTRS = 'shape=box, style=filled, fillcolor="#f3f4f6"'


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(model: GoalModel, show_risk: bool = False,
               show_ids: bool = False) -> str:
    violations = model.validate_structure()
    if violations:
        raise ModelError("cannot export an invalid model: " + "; ".join(violations))

    lines = ["digraph goal_model {", "  rankdir=TB;",
             '  node [fontname="Helvetica"];']
    lines.append(f"  {_quote(_MIGRATION_NODE)} "
                 f"[label={_quote('Migration type ' + model.migration_type.value)}, "
                 f"{_TYPE_ATTRS}];")

    def label(node_id: str, text: str) -> str:
        return f"{node_id}: {text}" if show_ids else text

    for node in model.goal_nodes.values():
        lines.append(f"  {_quote(node.node_id)} "
                     f"[label={_quote(label(node.node_id, node.name))}, "
                     f"{_GOAL_ATTRS}];")
    for node in model.obstacle_nodes.values():
        text = node.name
        if show_risk and node.assessment is not None:
            a = node.assessment
            text += (f" [{a.likelihood.value}×{a.consequence.value}"
                     f"={a.effective.value}]")
        lines.append(f"  {_quote(node.node_id)} "
                     f"[label={_quote(label(node.node_id, text))}, "
                     f"{_OBSTACLE_ATTRS}];")
    for node in model.tactic_nodes.values():
        text = node.repo_ref
        if model.repository is not None:
            entry = model.repository.tactic(node.repo_ref)
            if entry is not None:
                text = f"{entry.name} ({node.repo_ref})"
        lines.append(f"  {_quote(node.node_id)} "
                     f"[label={_quote(label(node.node_id, text))}, "
                     f"{_TACTIC_ATTRS}];")

    for root in model.root_goals:
        lines.append(f"  {_quote(_MIGRATION_NODE)} -> {_quote(root)} "
                     "[style=solid, arrowhead=vee];")
    for node in model.goal_nodes.values():
        for child in node.children:
            lines.append(f"  {_quote(node.node_id)} -> {_quote(child)} "
                         "[style=solid];")
    for node in model.obstacle_nodes.values():
        kind, parent = node.parent
        if kind == "goal":
            lines.append(f"  {_quote(node.node_id)} -> {_quote(parent)} "
                         "[style=dashed];")
        else:
            lines.append(f"  {_quote(parent)} -> {_quote(node.node_id)} "
                         "[style=solid];")
        for tactic in node.resolutions:
            lines.append(f"  {_quote(node.node_id)} -> {_quote(tactic)} "
                         "[style=dotted];")

    lines.append("}")
    return "\n".join(lines) + "\n"
