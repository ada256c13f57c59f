// Workbench view state. The server is the single source of truth: every
// mutation goes through a revision-checked POST and is followed by a full
// refetch of the session document and coverage report, so the UI can never
// drift from the model it displays. A 409 flips the staleConflict flag and
// the shell offers a reload instead of retrying blindly.
import { ApiError } from "./api.js";
export class Store {
    constructor(api) {
        this.api = api;
        this.state = {
            sessionId: null,
            revision: 0,
            doc: null,
            check: null,
            selected: null,
            panel: "ModelTree",
            matrix: null,
            sessions: [],
            obstacleSuggestions: [],
            tacticSuggestions: [],
            staleConflict: false,
            lastError: null,
            threshold: "high",
        };
        this.listeners = [];
        this.declined = new Set();
    }
    subscribe(listener) {
        this.listeners.push(listener);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener);
        };
    }
    emit() {
        for (const listener of this.listeners)
            listener(this.state);
    }
    async bootstrap() {
        // the heat-map grid always comes from the server, never a local table
        this.state.matrix = await this.api.riskMatrix();
        this.state.sessions = await this.api.listSessions();
        this.emit();
    }
    setPanel(panel) {
        this.state.panel = panel;
        this.emit();
    }
    setThreshold(threshold) {
        this.state.threshold = threshold;
        void this.refresh();
    }
    async select(nodeId) {
        this.state.selected = nodeId;
        this.state.tacticSuggestions = [];
        if (nodeId && this.state.sessionId && this.state.doc &&
            this.isObstacle(nodeId)) {
            try {
                this.state.tacticSuggestions =
                    (await this.api.suggestionTactics(this.state.sessionId, nodeId))
                        .filter((s) => !this.declined.has(`tactic:${nodeId}:${s.repo_id}`));
            }
            catch (error) {
                this.noteError(error);
            }
        }
        this.emit();
    }
    isObstacle(nodeId) {
        const found = this.findObstacle(nodeId);
        return found !== null;
    }
    findObstacle(nodeId) {
        if (!this.state.doc)
            return null;
        const stack = [...this.state.doc.model.goals.flatMap((g) => {
                const collect = (goal) => [...goal.obstacles, ...goal.children.flatMap(collect)];
                return collect(g);
            })];
        while (stack.length) {
            const node = stack.pop();
            if (node.id === nodeId)
                return node;
            stack.push(...node.children);
        }
        return null;
    }
    async createSession(name, migrationType) {
        const summary = await this.api.createSession(name, migrationType);
        await this.openSession(summary.session_id);
    }
    async openSession(sessionId) {
        this.state.sessionId = sessionId;
        this.state.selected = null;
        this.state.staleConflict = false;
        this.declined.clear();
        await this.refresh();
    }
    async refresh() {
        if (!this.state.sessionId)
            return;
        const id = this.state.sessionId;
        this.state.doc = await this.api.getSession(id);
        this.state.revision = this.state.doc.revision;
        this.state.check = await this.api.check(id, this.state.threshold);
        this.state.sessions = await this.api.listSessions();
        try {
            this.state.obstacleSuggestions =
                (await this.api.suggestionObstacles(id))
                    .filter((s) => !this.declined.has(`obstacle:${s.repo_id}`));
        }
        catch (error) {
            // a model without repository-linked goals has no suggestions yet
            this.state.obstacleSuggestions = [];
            if (!(error instanceof ApiError && error.code === "no_linked_goals")) {
                this.noteError(error);
            }
        }
        if (this.state.selected && !this.findNodeKind(this.state.selected)) {
            this.state.selected = null;
        }
        this.state.staleConflict = false;
        this.emit();
    }
    findNodeKind(nodeId) {
        if (!this.state.doc)
            return null;
        let found = null;
        const walkObstacle = (o) => {
            if (o.id === nodeId)
                found = "obstacle";
            for (const t of o.tactics)
                if (t.id === nodeId)
                    found = "tactic";
            o.children.forEach(walkObstacle);
        };
        const walkGoal = (g) => {
            if (g.id === nodeId)
                found = "goal";
            g.children.forEach(walkGoal);
            g.obstacles.forEach(walkObstacle);
        };
        this.state.doc.model.goals.forEach(walkGoal);
        return found;
    }
    decline(kind, repoId, node) {
        const key = kind === "obstacle"
            ? `obstacle:${repoId}` : `tactic:${node}:${repoId}`;
        this.declined.add(key);
        if (kind === "obstacle") {
            this.state.obstacleSuggestions = this.state.obstacleSuggestions
                .filter((s) => s.repo_id !== repoId);
        }
        else {
            this.state.tacticSuggestions = this.state.tacticSuggestions
                .filter((s) => s.repo_id !== repoId);
        }
        this.emit();
    }
    /** Run a revision-carrying mutation, then re-sync from the server. */
    async mutate(operation) {
        if (!this.state.sessionId)
            throw new Error("no session open");
        this.state.lastError = null;
        try {
            const result = await operation(this.state.revision);
            this.state.revision = result.revision;
            await this.refresh();
            const selected = this.state.selected;
            if (selected)
                await this.select(selected);
            return result;
        }
        catch (error) {
            if (error instanceof ApiError && error.code === "stale_revision") {
                this.state.staleConflict = true;
                this.emit();
                return null;
            }
            this.noteError(error);
            this.emit();
            return null;
        }
    }
    noteError(error) {
        this.state.lastError =
            error instanceof Error ? error.message : String(error);
    }
}
