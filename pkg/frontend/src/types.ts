/** Payload shapes of the coaching API, consumed verbatim. */

export type ClaimValue = number | string | boolean;
export type Claims = Record<string, ClaimValue>;

export interface IssueSpecJson {
  name: string;
  kind: "allocated-integer" | "shared-categorical" | "shared-binary";
  min?: number;
  max?: number;
  options?: string[];
  description?: string;
}

export interface ProfileJson {
  weights: Record<string, string | number>;
  option_multipliers?: Record<string, Record<string, string | number>>;
}

export interface ScenarioJson {
  id: string;
  max_turns: number;
  issues: IssueSpecJson[];
  agent_prefs: ProfileJson;
  partner_prefs: ProfileJson;
}

export interface CandidateRow {
  claims: Claims;
  s_a: string;
  s_p_est: string;
  ts?: string;
  si?: string;
  pap?: string;
  sa?: string;
  final?: string;
}

export interface TacticRationale {
  name?: string;
  group?: string;
  when?: string;
  how?: string;
  why?: string;
}

export interface StageTraceJson {
  turn: number;
  fairness: string;
  stance: string;
  lambda: string;
  s_max: string;
  candidates: CandidateRow[];
  tactic: string | null;
  tactic_rationale: TacticRationale;
  selected: CandidateRow | null;
  infeasible: boolean;
  adapter_fallback: boolean;
}

export interface AdvicePayload {
  mode: "ask-preference" | "propose-offer" | "accept" | "walk-away";
  reason: string;
  warn: boolean;
  ask?: "highest" | "lowest";
  trace?: StageTraceJson;
  recommended?: { claims: Claims };
  ipp?: { status: string; weights: Record<string, string> };
}

export interface StatementJson {
  type: "statement";
  issue: string;
  relation: "highest" | "lowest" | "greater-than";
  other_issue?: string;
  turn: number;
}

export interface PartnerEventPayload {
  offer?: { claims: Claims };
  statements?: StatementJson[];
}

export interface MovePayload {
  type: "offer" | "accept" | "walk-away" | "ask";
  offer?: { claims: Claims };
  ask?: "highest" | "lowest";
  reason?: string;
}

export interface CommitSummary {
  session_id: string;
  turn: number;
  own_offer_count: number;
  partner_offer_count: number;
  own_last_score: string | null;
  closed: boolean;
  outcome?: Record<string, unknown>;
}

export interface FrontierPoint {
  claims: Claims;
  agent: string;
  partner: string;
}

export interface OfferRow {
  by: "agent" | "partner";
  turn: number;
  claims: Claims;
  agent: string;
  partner: string;
  member: boolean;
  distance: string;
}

export interface ReportPayload {
  session_id: string;
  scenario: ScenarioJson;
  config: Record<string, unknown>;
  events: Array<Record<string, unknown>>;
  traces: StageTraceJson[];
  frontier: FrontierPoint[];
  offers: OfferRow[];
  outcome: Record<string, unknown> | null;
  closed: boolean;
}

export interface SessionCreated {
  session_id: string;
  config: Record<string, unknown>;
  scenario: ScenarioJson;
}

/** Exact wire number ("12.4", "7/18", "30") to a display float. */
export function wireToNumber(value: string | number): number {
  if (typeof value === "number") return value;
  const slash = value.indexOf("/");
  if (slash >= 0) {
    const num = Number(value.slice(0, slash));
    const den = Number(value.slice(slash + 1));
    return num / den;
  }
  return Number(value);
}
