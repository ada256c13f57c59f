// Wire types mirroring the HTTP API payloads.

export type Likelihood =
  | "rare" | "unlikely" | "possible" | "likely" | "almost-certain";
export type Consequence =
  | "insignificant" | "minor" | "moderate" | "major" | "catastrophic";
export type RiskLevel = "L" | "M" | "H" | "E" | "V";
export type MigrationType = "I" | "II" | "III" | "IV" | "V";

export interface RiskMatrix {
  likelihoods: Likelihood[];
  consequences: Consequence[];
  grid: RiskLevel[][];
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
  location: string | null;
}

export interface SessionSummary {
  session_id: string;
  name: string;
  migration_type: MigrationType;
  revision: number;
  repository_version: string;
}

export interface AssessmentDoc {
  likelihood: Likelihood;
  consequence: Consequence;
  override: RiskLevel | null;
  note: string;
  history: Array<{
    likelihood: Likelihood;
    consequence: Consequence;
    override: RiskLevel | null;
    note: string;
    tactic_node: string | null;
  }>;
}

export interface TacticDoc {
  id: string;
  repo_ref: string;
  note: string;
  introduced: string[];
}

export interface ObstacleDoc {
  id: string;
  name: string;
  origin: { kind: "evidential" | "domain"; repo_ref: string | null };
  assessment: AssessmentDoc | null;
  children: ObstacleDoc[];
  tactics: TacticDoc[];
  introduced_by: string | null;
}

export interface GoalDoc {
  id: string;
  pattern: "Achieve" | "Maintain" | "Avoid";
  descriptor: string;
  repo_ref: string | null;
  children: GoalDoc[];
  obstacles: ObstacleDoc[];
}

export interface AuditEntryDoc {
  step: string;
  action: string;
  subject: string[];
  timestamp: string;
  revision: number;
  note: string;
  details: Record<string, unknown>;
}

export interface SessionDocument {
  format_version: number;
  session_id: string;
  name: string;
  migration_type: MigrationType;
  repository_version: string;
  revision: number;
  model: { goals: GoalDoc[] };
  audit: AuditEntryDoc[];
}

export interface Suggestion {
  kind: "obstacle" | "tactic";
  repo_id: string;
  matched_goals: number;
  study_count: number;
  universal: boolean;
  rationale: string;
}

export interface CheckVerdict {
  node: string;
  name: string;
  verdict: "covered" | "uncovered" | "unassessed";
  reason: string;
  effective_risk: RiskLevel | null;
}

export interface CheckReport {
  threshold: RiskLevel;
  verdicts: CheckVerdict[];
  violations: string[];
  ok: boolean;
}

export interface RepoEntry {
  kind: "goal" | "obstacle" | "tactic" | "study";
  id: string;
  name?: string;
  definition?: string;
  citation?: string;
  year?: number;
  impacted_goals?: string[];
  migration_types?: MigrationType[];
  related_obstacles?: string[];
  universal?: boolean;
  category?: string;
  source_studies?: string[];
  data_quality_notes?: string[];
}

export interface OriginBody {
  kind: "evidential" | "domain";
  repo_ref?: string | null;
}

export interface IntroducedSpecBody {
  origin: OriginBody;
  name?: string | null;
  target?: string | null;
}

export interface ApplyTacticEffects {
  reassessment?: {
    likelihood: Likelihood;
    consequence: Consequence;
    note: string;
  } | null;
  introduced?: IntroducedSpecBody[];
}

export function effectiveRisk(a: AssessmentDoc | null,
                              matrix: RiskMatrix): RiskLevel | null {
  if (!a) return null;
  if (a.override) return a.override;
  return computedRisk(a.likelihood, a.consequence, matrix);
}

export function computedRisk(likelihood: Likelihood, consequence: Consequence,
                             matrix: RiskMatrix): RiskLevel {
  const row = matrix.likelihoods.indexOf(likelihood);
  const col = matrix.consequences.indexOf(consequence);
  const level = matrix.grid[row]?.[col];
  if (!level) throw new Error(`matrix has no cell (${likelihood}, ${consequence})`);
  return level;
}
