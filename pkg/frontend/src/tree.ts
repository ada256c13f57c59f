// Model tree panel: goals, obstacles, and tactics with kind styling, risk
// badges, and uncovered markers. The tree mirrors the server document
// exactly; it never invents local state.

import { el } from "./dom.js";
import type {
  CheckReport, GoalDoc, ObstacleDoc, RiskMatrix, SessionDocument, TacticDoc,
} from "./types.js";
import { effectiveRisk } from "./types.js";

export interface TreeCallbacks {
  onSelect: (nodeId: string) => void;
  onAddGoal: () => void;
}

export function renderModelTree(
  doc: SessionDocument | null,
  check: CheckReport | null,
  matrix: RiskMatrix,
  selected: string | null,
  callbacks: TreeCallbacks,
): HTMLElement {
  const root = el("div", { className: "model-tree" });
  if (!doc || doc.model.goals.length === 0) {
    root.append(el(
      "div", { className: "placeholder" },
      el("p", {}, "This session has no goals yet."),
      el("button", {
        className: "add-goal-affordance",
        onclick: () => callbacks.onAddGoal(),
      }, "Add a goal"),
    ));
    return root;
  }
  const verdicts = new Map(
    (check?.verdicts ?? []).map((v) => [v.node, v]));

  const badge = (obstacle: ObstacleDoc): HTMLElement | null => {
    const level = effectiveRisk(obstacle.assessment, matrix);
    if (!level) return null;
    return el("span", { className: `badge risk-${level}` }, level);
  };

  const marker = (obstacle: ObstacleDoc): HTMLElement | null => {
    const verdict = verdicts.get(obstacle.id);
    if (!verdict || verdict.verdict === "covered") return null;
    return el("span", { className: `marker marker-${verdict.verdict}` },
              verdict.verdict);
  };

  const row = (nodeId: string, className: string,
               ...content: Array<HTMLElement | string | null>): HTMLElement => {
    const classes = ["node-row", className];
    if (nodeId === selected) classes.push("selected");
    return el("div", {
      className: classes.join(" "),
      "data-node": nodeId,
      onclick: (event) => {
        event.stopPropagation();
        callbacks.onSelect(nodeId);
      },
    }, ...content);
  };

  const renderTactic = (tactic: TacticDoc): HTMLElement =>
    el("li", { className: "tree-tactic" },
       row(tactic.id, "tactic",
           el("span", { className: "kind-icon" }, "⚙"),
           el("span", { className: "node-label" },
              `${tactic.repo_ref}${tactic.note ? ` — ${tactic.note}` : ""}`)));

  const renderObstacle = (obstacle: ObstacleDoc): HTMLElement => {
    const children = el("ul", { className: "children" });
    for (const child of obstacle.children) children.append(renderObstacle(child));
    for (const tactic of obstacle.tactics) children.append(renderTactic(tactic));
    return el("li", { className: "tree-obstacle" },
              row(obstacle.id, "obstacle",
                  el("span", { className: "kind-icon" }, "⚠"),
                  el("span", { className: "node-label" },
                     `${obstacle.name} (${obstacle.id})`),
                  badge(obstacle), marker(obstacle)),
              children);
  };

  const renderGoal = (goal: GoalDoc): HTMLElement => {
    const children = el("ul", { className: "children" });
    for (const sub of goal.children) children.append(renderGoal(sub));
    for (const obstacle of goal.obstacles) {
      children.append(renderObstacle(obstacle));
    }
    return el("li", { className: "tree-goal" },
              row(goal.id, "goal",
                  el("span", { className: "kind-icon" }, "◈"),
                  el("span", { className: "node-label" },
                     `${goal.pattern} [${goal.descriptor}]`
                     + (goal.repo_ref ? ` · ${goal.repo_ref}` : "")),
                  ),
              children);
  };

  const list = el("ul", { className: "roots" });
  for (const goal of doc.model.goals) list.append(renderGoal(goal));
  root.append(list);
  return root;
}
