// Suggestion panels: accept/decline flows for repository obstacles and
// tactics, plus the apply-tactic dialog with its reassessment and
// introduced-obstacle sub-forms. Accepting issues the matching API mutation;
// declining only hides the suggestion locally.

import { el } from "./dom.js";
import type {
  ApplyTacticEffects, Consequence, IntroducedSpecBody, Likelihood, Suggestion,
} from "./types.js";

export interface SuggestionCallbacks {
  onAcceptObstacle: (repoId: string) => void;
  onDeclineObstacle: (repoId: string) => void;
  onApplyTactic: (repoId: string, note: string,
                  effects: ApplyTacticEffects) => void;
  onDeclineTactic: (repoId: string) => void;
}

export function renderObstacleSuggestions(
  suggestions: Suggestion[],
  callbacks: SuggestionCallbacks,
): HTMLElement {
  const root = el("div", { className: "suggestions obstacle-suggestions" },
                  el("h3", {}, "Suggested obstacles"));
  if (suggestions.length === 0) {
    root.append(el("p", { className: "empty" },
                   "nothing to suggest for the current goals"));
    return root;
  }
  const list = el("ul", {});
  for (const suggestion of suggestions) {
    list.append(el(
      "li", { className: "suggestion", "data-repo-id": suggestion.repo_id },
      el("span", { className: "sugg-id" }, suggestion.repo_id),
      el("span", { className: "sugg-meta" },
         ` goals:${suggestion.matched_goals} studies:${suggestion.study_count}`),
      el("div", { className: "sugg-rationale" }, suggestion.rationale),
      el("button", {
        className: "accept",
        onclick: () => callbacks.onAcceptObstacle(suggestion.repo_id),
      }, "accept"),
      el("button", {
        className: "decline",
        onclick: () => callbacks.onDeclineObstacle(suggestion.repo_id),
      }, "decline"),
    ));
  }
  root.append(list);
  return root;
}

interface IntroducedRow {
  kind: "evidential" | "domain";
  ref: string;
  name: string;
}

export function renderTacticSuggestions(
  suggestions: Suggestion[],
  selectedNode: string | null,
  callbacks: SuggestionCallbacks,
): HTMLElement {
  const root = el("div", { className: "suggestions tactic-suggestions" },
                  el("h3", {}, "Suggested tactics"));
  if (!selectedNode) {
    root.append(el("p", { className: "empty" },
                   "select an obstacle to see resolution tactics"));
    return root;
  }
  if (suggestions.length === 0) {
    root.append(el("p", { className: "empty" }, "no tactics left to suggest"));
    return root;
  }
  const list = el("ul", {});
  for (const suggestion of suggestions) {
    const item = el(
      "li", {
        className: `suggestion${suggestion.universal ? " universal" : ""}`,
        "data-repo-id": suggestion.repo_id,
      },
      el("span", { className: "sugg-id" }, suggestion.repo_id),
      suggestion.universal
        ? el("span", { className: "universal-flag" }, "universal")
        : null,
      el("div", { className: "sugg-rationale" }, suggestion.rationale),
    );
    item.append(
      el("button", {
        className: "apply",
        onclick: () => item.append(applyDialog(suggestion, callbacks)),
      }, "apply…"),
      el("button", {
        className: "decline",
        onclick: () => callbacks.onDeclineTactic(suggestion.repo_id),
      }, "decline"),
    );
    list.append(item);
  }
  root.append(list);
  return root;
}

function applyDialog(suggestion: Suggestion,
                     callbacks: SuggestionCallbacks): HTMLElement {
  let note = "";
  let reassess = false;
  let likelihood: Likelihood = "possible";
  let consequence: Consequence = "moderate";
  let reassessNote = "";
  const introduced: IntroducedRow[] = [];

  const dialog = el("form", { className: "apply-dialog" });

  const noteInput = el("input", {
    className: "tactic-note",
    placeholder: suggestion.repo_id === "T41"
      ? "acceptance rationale (required for T41)" : "operationalization note",
    oninput: (event) => {
      note = (event.target as HTMLInputElement).value;
      sync();
    },
  });

  const submitButton = el("button", {
    className: "submit-apply",
    type: "submit",
  }, "apply tactic") as HTMLButtonElement;

  const sync = () => {
    // accepting a risk as-is demands a written rationale
    submitButton.disabled =
      suggestion.repo_id === "T41" && note.trim() === "";
  };

  const likelihoodSelect = selectOf<Likelihood>(
    ["rare", "unlikely", "possible", "likely", "almost-certain"],
    (value) => { likelihood = value; });
  const consequenceSelect = selectOf<Consequence>(
    ["insignificant", "minor", "moderate", "major", "catastrophic"],
    (value) => { consequence = value; });
  likelihoodSelect.value = likelihood;
  consequenceSelect.value = consequence;

  const reassessBlock = el(
    "fieldset", { className: "reassess-block" },
    el("label", {},
       el("input", {
         type: "checkbox",
         className: "reassess-toggle",
         onchange: (event) => {
           reassess = (event.target as HTMLInputElement).checked;
         },
       }),
       " re-rate this obstacle after applying"),
    likelihoodSelect, consequenceSelect,
    el("input", {
      className: "reassess-note",
      placeholder: "why the rating changes",
      oninput: (event) => {
        reassessNote = (event.target as HTMLInputElement).value;
      },
    }),
  );

  const introducedList = el("div", { className: "introduced-list" });
  const addIntroducedRow = () => {
    const rowState: IntroducedRow = { kind: "evidential", ref: "", name: "" };
    introduced.push(rowState);
    const row = el(
      "div", { className: "introduced-row" },
      selectOf<"evidential" | "domain">(["evidential", "domain"], (value) => {
        rowState.kind = value;
      }),
      el("input", {
        className: "introduced-ref",
        placeholder: "O-id (evidential) or name (domain)",
        oninput: (event) => {
          const value = (event.target as HTMLInputElement).value;
          rowState.ref = value;
          rowState.name = value;
        },
      }),
    );
    introducedList.append(row);
  };

  dialog.append(
    noteInput,
    reassessBlock,
    el("div", { className: "introduced-controls" },
       el("button", {
         type: "button",
         className: "add-introduced",
         onclick: addIntroducedRow,
       }, "+ introduced obstacle"),
       introducedList),
    submitButton,
  );
  dialog.addEventListener("submit", (event) => {
    event.preventDefault();
    const effects: ApplyTacticEffects = {};
    if (reassess) {
      effects.reassessment = { likelihood, consequence, note: reassessNote };
    }
    const specs: IntroducedSpecBody[] = [];
    for (const row of introduced) {
      if (row.kind === "evidential" && row.ref.trim()) {
        specs.push({ origin: { kind: "evidential", repo_ref: row.ref.trim() } });
      } else if (row.kind === "domain" && row.name.trim()) {
        specs.push({ origin: { kind: "domain" }, name: row.name.trim() });
      }
    }
    if (specs.length) effects.introduced = specs;
    callbacks.onApplyTactic(suggestion.repo_id, note, effects);
  });
  sync();
  return dialog;
}

function selectOf<T extends string>(options: readonly T[],
                                    onChange: (value: T) => void
                                   ): HTMLSelectElement {
  const select = el("select", {
    onchange: (event) => {
      onChange((event.target as HTMLSelectElement).value as T);
    },
  }) as HTMLSelectElement;
  for (const option of options) {
    select.append(el("option", { value: option }, option));
  }
  return select;
}
