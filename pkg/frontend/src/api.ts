// Typed client for the workbench HTTP API. Every mutation carries the
// caller's revision; the server's compare-and-set answers with the new one.

import type {
  ApiErrorBody, ApplyTacticEffects, CheckReport, MigrationType, OriginBody,
  RepoEntry, RiskMatrix, SessionDocument, SessionSummary, Suggestion,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly location: string | null;

  constructor(body: ApiErrorBody) {
    super(body.message);
    this.status = body.status;
    this.code = body.code;
    this.location = body.location;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    return new ApiError((await response.json()) as ApiErrorBody);
  } catch {
    return new ApiError({
      status: response.status,
      code: "http_error",
      message: response.statusText || `HTTP ${response.status}`,
      location: null,
    });
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(private readonly base: string = "",
              private readonly fetchImpl: FetchLike =
                (input, init) => fetch(input, init)) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) throw await parseError(response);
    const type = response.headers.get("content-type") ?? "";
    if (type.includes("json")) return (await response.json()) as T;
    return (await response.text()) as unknown as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  riskMatrix(): Promise<RiskMatrix> {
    return this.request("/api/risk-matrix");
  }

  datasetVersion(): Promise<{ version: string }> {
    return this.request("/api/dataset/version");
  }

  repoGoals(): Promise<RepoEntry[]> {
    return this.request("/api/repo/goals");
  }

  repoObstacles(params: { goal?: string; migration_type?: string;
                          text?: string } = {}): Promise<RepoEntry[]> {
    const q = new URLSearchParams();
    if (params.goal) q.set("goal", params.goal);
    if (params.migration_type) q.set("migration_type", params.migration_type);
    if (params.text) q.set("text", params.text);
    const qs = q.toString();
    return this.request(`/api/repo/obstacles${qs ? "?" + qs : ""}`);
  }

  repoTactics(params: { obstacle?: string; category?: string;
                        universal?: boolean } = {}): Promise<RepoEntry[]> {
    const q = new URLSearchParams();
    if (params.obstacle) q.set("obstacle", params.obstacle);
    if (params.category) q.set("category", params.category);
    if (params.universal !== undefined) q.set("universal", String(params.universal));
    const qs = q.toString();
    return this.request(`/api/repo/tactics${qs ? "?" + qs : ""}`);
  }

  repoEntry(id: string): Promise<RepoEntry> {
    return this.request(`/api/repo/entries/${encodeURIComponent(id)}`);
  }

  listSessions(): Promise<SessionSummary[]> {
    return this.request("/api/sessions");
  }

  createSession(name: string, migrationType: MigrationType,
                sessionId?: string): Promise<SessionSummary> {
    return this.post("/api/sessions", {
      name, migration_type: migrationType,
      ...(sessionId ? { session_id: sessionId } : {}),
    });
  }

  getSession(id: string): Promise<SessionDocument> {
    return this.request(`/api/sessions/${encodeURIComponent(id)}`);
  }

  deleteSession(id: string): Promise<{ deleted: string }> {
    return this.request(`/api/sessions/${encodeURIComponent(id)}`,
                        { method: "DELETE" });
  }

  addGoal(id: string, revision: number, body: {
    descriptor: string; pattern?: string; repo_ref?: string | null;
    parent?: string | null;
  }): Promise<{ revision: number; created: string[] }> {
    return this.post(`/api/sessions/${id}/goals`, { revision, ...body });
  }

  attachObstacle(id: string, revision: number, body: {
    target: string; origin: OriginBody; name?: string | null;
  }): Promise<{ revision: number; created: string[] }> {
    return this.post(`/api/sessions/${id}/obstacles`, { revision, ...body });
  }

  attachTactic(id: string, revision: number, body: {
    node: string; tactic: string; note?: string;
  }): Promise<{ revision: number; created: string[] }> {
    return this.post(`/api/sessions/${id}/tactics`, { revision, ...body });
  }

  assess(id: string, revision: number, body: {
    node: string; likelihood: string; consequence: string; note?: string;
    override?: string | null;
  }): Promise<{ revision: number; computed: string; effective: string }> {
    return this.post(`/api/sessions/${id}/assess`, { revision, ...body });
  }

  reassess(id: string, revision: number, body: {
    node: string; tactic_node: string; likelihood: string; consequence: string;
    note?: string;
  }): Promise<{ revision: number; computed: string; effective: string }> {
    return this.post(`/api/sessions/${id}/reassess`, { revision, ...body });
  }

  applyTactic(id: string, revision: number, body: {
    node: string; tactic: string; note?: string; effects?: ApplyTacticEffects;
  }): Promise<{ revision: number; created: string[] }> {
    return this.post(`/api/sessions/${id}/apply-tactic`, { revision, ...body });
  }

  suggestionObstacles(id: string): Promise<Suggestion[]> {
    return this.request(`/api/sessions/${id}/suggestions/obstacles`);
  }

  suggestionTactics(id: string, node: string): Promise<Suggestion[]> {
    return this.request(
      `/api/sessions/${id}/suggestions/tactics?node=${encodeURIComponent(node)}`);
  }

  check(id: string, threshold = "high"): Promise<CheckReport> {
    return this.request(`/api/sessions/${id}/check?threshold=${threshold}`);
  }

  exportDot(id: string): Promise<string> {
    return this.request(`/api/sessions/${id}/export/dot`);
  }

  audit(id: string): Promise<import("./types.js").AuditEntryDoc[]> {
    return this.request(`/api/sessions/${id}/audit`);
  }
}
