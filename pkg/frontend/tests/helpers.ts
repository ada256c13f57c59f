import type {
  GoalDoc, ObstacleDoc, RiskMatrix, SessionDocument,
} from "../src/types.js";

// Table-4-shaped matrix for unit tests (the real UI always fetches it).
export const MATRIX: RiskMatrix = {
  likelihoods: ["rare", "unlikely", "possible", "likely", "almost-certain"],
  consequences: ["insignificant", "minor", "moderate", "major", "catastrophic"],
  grid: [
    ["L", "L", "M", "H", "H"],
    ["L", "L", "M", "H", "E"],
    ["L", "M", "H", "E", "E"],
    ["M", "H", "H", "E", "V"],
    ["H", "H", "E", "E", "V"],
  ],
};

export function obstacle(partial: Partial<ObstacleDoc> & { id: string;
                         name: string }): ObstacleDoc {
  return {
    origin: { kind: "evidential", repo_ref: partial.id },
    assessment: null,
    children: [],
    tactics: [],
    introduced_by: null,
    ...partial,
  };
}

export function goal(partial: Partial<GoalDoc> & { id: string;
                     descriptor: string }): GoalDoc {
  return {
    pattern: "Achieve",
    repo_ref: null,
    children: [],
    obstacles: [],
    ...partial,
  };
}

export function sessionDoc(goals: GoalDoc[], revision = 0): SessionDocument {
  return {
    format_version: 1,
    session_id: "fixture",
    name: "fixture",
    migration_type: "V",
    repository_version: "1.0",
    revision,
    model: { goals },
    audit: [],
  };
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}
