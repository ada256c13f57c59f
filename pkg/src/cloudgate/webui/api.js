// Typed client for the workbench HTTP API. Every mutation carries the
// caller's revision; the server's compare-and-set answers with the new one.
export class ApiError extends Error {
    constructor(body) {
        super(body.message);
        this.status = body.status;
        this.code = body.code;
        this.location = body.location;
    }
}
async function parseError(response) {
    try {
        return new ApiError((await response.json()));
    }
    catch {
        return new ApiError({
            status: response.status,
            code: "http_error",
            message: response.statusText || `HTTP ${response.status}`,
            location: null,
        });
    }
}
export class ApiClient {
    constructor(base = "", fetchImpl = (input, init) => fetch(input, init)) {
        this.base = base;
        this.fetchImpl = fetchImpl;
    }
    async request(path, init) {
        const response = await this.fetchImpl(this.base + path, init);
        if (!response.ok)
            throw await parseError(response);
        const type = response.headers.get("content-type") ?? "";
        if (type.includes("json"))
            return (await response.json());
        return (await response.text());
    }
    post(path, body) {
        return this.request(path, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    riskMatrix() {
        return this.request("/api/risk-matrix");
    }
    datasetVersion() {
        return this.request("/api/dataset/version");
    }
    repoGoals() {
        return this.request("/api/repo/goals");
    }
    repoObstacles(params = {}) {
        const q = new URLSearchParams();
        if (params.goal)
            q.set("goal", params.goal);
        if (params.migration_type)
            q.set("migration_type", params.migration_type);
        if (params.text)
            q.set("text", params.text);
        const qs = q.toString();
        return this.request(`/api/repo/obstacles${qs ? "?" + qs : ""}`);
    }
    repoTactics(params = {}) {
        const q = new URLSearchParams();
        if (params.obstacle)
            q.set("obstacle", params.obstacle);
        if (params.category)
            q.set("category", params.category);
        if (params.universal !== undefined)
            q.set("universal", String(params.universal));
        const qs = q.toString();
        return this.request(`/api/repo/tactics${qs ? "?" + qs : ""}`);
    }
    repoEntry(id) {
        return this.request(`/api/repo/entries/${encodeURIComponent(id)}`);
    }
    listSessions() {
        return this.request("/api/sessions");
    }
    createSession(name, migrationType, sessionId) {
        return this.post("/api/sessions", {
            name, migration_type: migrationType,
            ...(sessionId ? { session_id: sessionId } : {}),
        });
    }
    getSession(id) {
        return this.request(`/api/sessions/${encodeURIComponent(id)}`);
    }
    deleteSession(id) {
        return this.request(`/api/sessions/${encodeURIComponent(id)}`, { method: "DELETE" });
    }
    addGoal(id, revision, body) {
        return this.post(`/api/sessions/${id}/goals`, { revision, ...body });
    }
    attachObstacle(id, revision, body) {
        return this.post(`/api/sessions/${id}/obstacles`, { revision, ...body });
    }
    attachTactic(id, revision, body) {
        return this.post(`/api/sessions/${id}/tactics`, { revision, ...body });
    }
    assess(id, revision, body) {
        return this.post(`/api/sessions/${id}/assess`, { revision, ...body });
    }
    reassess(id, revision, body) {
        return this.post(`/api/sessions/${id}/reassess`, { revision, ...body });
    }
    applyTactic(id, revision, body) {
        return this.post(`/api/sessions/${id}/apply-tactic`, { revision, ...body });
    }
    suggestionObstacles(id) {
        return this.request(`/api/sessions/${id}/suggestions/obstacles`);
    }
    suggestionTactics(id, node) {
        return this.request(`/api/sessions/${id}/suggestions/tactics?node=${encodeURIComponent(node)}`);
    }
    check(id, threshold = "high") {
        return this.request(`/api/sessions/${id}/check?threshold=${threshold}`);
    }
    exportDot(id) {
        return this.request(`/api/sessions/${id}/export/dot`);
    }
    audit(id) {
        return this.request(`/api/sessions/${id}/audit`);
    }
}
