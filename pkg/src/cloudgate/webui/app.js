// Workbench shell: session toolbar, panel switching, and the wiring from UI
// actions to revision-checked API mutations. Rendering is a full re-draw on
// every state change; at desk scale that is simpler and fast enough.
import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { renderHeatmap } from "./heatmap.js";
import { renderAudit, renderCheckReport, renderRepositoryBrowser } from "./panels.js";
import { Store } from "./store.js";
import { renderObstacleSuggestions, renderTacticSuggestions } from "./suggestions.js";
import { renderModelTree } from "./tree.js";
const PANELS = [
    "ModelTree", "RepositoryBrowser", "RiskHeatmap", "CheckReport", "Audit"
];
export class Workbench {
    constructor(root, api = new ApiClient()) {
        this.root = root;
        this.api = api;
        this.store = new Store(api);
        this.store.subscribe(() => this.render());
    }
    async start() {
        await this.store.bootstrap();
        this.render();
    }
    // ------------------------------------------------------------- actions
    async addGoal() {
        const descriptor = window.prompt("Goal descriptor (e.g. Improved availability)");
        if (!descriptor)
            return;
        const repoRef = window.prompt("Repository goal id (G1..G10, empty for none)") || null;
        await this.store.mutate((revision) => this.api.addGoal(this.store.state.sessionId, revision, { descriptor, repo_ref: repoRef }));
    }
    async acceptObstacle(repoId) {
        const state = this.store.state;
        const target = state.selected && this.store.findNodeKind(state.selected)
            === "goal" ? state.selected : this.firstMatchingGoal(repoId);
        if (!target) {
            state.lastError = "select a goal to attach the obstacle to";
            this.render();
            return;
        }
        await this.store.mutate((revision) => this.api.attachObstacle(state.sessionId, revision, {
            target, origin: { kind: "evidential", repo_ref: repoId },
        }));
    }
    firstMatchingGoal(repoId) {
        const suggestion = this.store.state.obstacleSuggestions
            .find((s) => s.repo_id === repoId);
        if (!suggestion || !this.store.state.doc)
            return null;
        const match = suggestion.rationale.match(/\bG[0-9]+\b/g) ?? [];
        const wanted = new Set(match);
        const flat = [];
        const walk = (goal) => {
            flat.push({ id: goal.id, repo_ref: goal.repo_ref });
            goal.children.forEach(walk);
        };
        this.store.state.doc.model.goals.forEach(walk);
        const hit = flat.find((g) => g.repo_ref && wanted.has(g.repo_ref));
        return hit ? hit.id : flat[0]?.id ?? null;
    }
    async applyTactic(repoId, note, effects) {
        const node = this.store.state.selected;
        if (!node)
            return;
        await this.store.mutate((revision) => this.api.applyTactic(this.store.state.sessionId, revision, { node, tactic: repoId, note, effects }));
    }
    async assessSelected(likelihood, consequence, note, override) {
        const node = this.store.state.selected;
        if (!node)
            return;
        await this.store.mutate((revision) => this.api.assess(this.store.state.sessionId, revision, { node, likelihood, consequence, note, override }));
    }
    // ------------------------------------------------------------ rendering
    render() {
        const state = this.store.state;
        clear(this.root);
        if (state.staleConflict) {
            this.root.append(el("div", { className: "stale-banner" }, el("span", {}, "This session changed elsewhere; reload to continue."), el("button", {
                className: "reload",
                onclick: () => void this.store.refresh(),
            }, "Reload session")));
        }
        if (state.lastError) {
            this.root.append(el("div", { className: "error-banner" }, state.lastError));
        }
        this.root.append(this.toolbar());
        const main = el("div", { className: "workbench-main" });
        const left = el("div", { className: "pane pane-left" });
        const right = el("div", { className: "pane pane-right" });
        if (!state.sessionId) {
            left.append(el("p", { className: "placeholder" }, "Create or open a session to start the analysis."));
        }
        else if (state.matrix) {
            left.append(renderModelTree(state.doc, state.check, state.matrix, state.selected, {
                onSelect: (nodeId) => void this.store.select(nodeId),
                onAddGoal: () => void this.addGoal(),
            }));
            right.append(this.panelBody());
        }
        main.append(left, right);
        this.root.append(main);
    }
    toolbar() {
        const state = this.store.state;
        const sessionSelect = el("select", {
            className: "session-select",
            onchange: (event) => {
                const value = event.target.value;
                if (value)
                    void this.store.openSession(value);
            },
        }, el("option", { value: "" }, "open a session…"));
        for (const summary of state.sessions) {
            const option = el("option", { value: summary.session_id }, `${summary.name} (${summary.migration_type}, `
                + `rev ${summary.revision})`);
            sessionSelect.append(option);
        }
        if (state.sessionId)
            sessionSelect.value = state.sessionId;
        const tabs = el("nav", { className: "tabs" });
        for (const panel of PANELS) {
            tabs.append(el("button", {
                className: `tab${state.panel === panel ? " active" : ""}`,
                "data-panel": panel,
                onclick: () => this.store.setPanel(panel),
            }, panel));
        }
        return el("header", { className: "toolbar" }, el("strong", { className: "brand" }, "cloudgate workbench"), sessionSelect, el("button", {
            className: "new-session",
            onclick: () => void this.newSession(),
        }, "new session"), state.sessionId && state.doc
            ? el("span", { className: "session-info" }, `${state.doc.name} · type ${state.doc.migration_type} · `
                + `rev ${state.revision}`)
            : null, tabs);
    }
    async newSession() {
        const name = window.prompt("Session name");
        if (!name)
            return;
        const migration = (window.prompt("Migration type (I, II, III, IV, V)", "V") ?? "V");
        await this.store.createSession(name, migration);
    }
    panelBody() {
        const state = this.store.state;
        switch (state.panel) {
            case "RepositoryBrowser":
                return renderRepositoryBrowser(this.api);
            case "RiskHeatmap": {
                const wrap = el("div", { className: "heatmap-panel" });
                if (!state.selected
                    || this.store.findNodeKind(state.selected) !== "obstacle") {
                    wrap.append(el("p", { className: "empty" }, "select an obstacle in the tree to rate it"));
                    return wrap;
                }
                const obstacle = this.store.findObstacle(state.selected);
                const current = obstacle?.assessment
                    ? { likelihood: obstacle.assessment.likelihood,
                        consequence: obstacle.assessment.consequence }
                    : null;
                wrap.append(el("p", {}, `rating ${state.selected}`));
                wrap.append(renderHeatmap(state.matrix, current, {
                    onPick: (likelihood, consequence, note, override) => void this.assessSelected(likelihood, consequence, note, override),
                }));
                return wrap;
            }
            case "CheckReport":
                return renderCheckReport(state.check);
            case "Audit":
                return renderAudit(state.doc?.audit ?? []);
            case "ModelTree":
            default: {
                const wrap = el("div", { className: "side-suggestions" });
                wrap.append(renderObstacleSuggestions(state.obstacleSuggestions, {
                    onAcceptObstacle: (repoId) => void this.acceptObstacle(repoId),
                    onDeclineObstacle: (repoId) => this.store.decline("obstacle", repoId),
                    onApplyTactic: (repoId, note, effects) => void this.applyTactic(repoId, note, effects),
                    onDeclineTactic: (repoId) => this.store.decline("tactic", repoId, state.selected ?? undefined),
                }));
                wrap.append(renderTacticSuggestions(state.tacticSuggestions, state.selected, {
                    onAcceptObstacle: (repoId) => void this.acceptObstacle(repoId),
                    onDeclineObstacle: (repoId) => this.store.decline("obstacle", repoId),
                    onApplyTactic: (repoId, note, effects) => void this.applyTactic(repoId, note, effects),
                    onDeclineTactic: (repoId) => this.store.decline("tactic", repoId, state.selected ?? undefined),
                }));
                return wrap;
            }
        }
    }
}
