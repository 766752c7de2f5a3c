/** Thin typed client for the coaching service. All negotiation math stays
 * server-side; this module only moves JSON. */

import type {
  AdvicePayload,
  CommitSummary,
  MovePayload,
  PartnerEventPayload,
  ReportPayload,
  ScenarioJson,
  SessionCreated,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly details: string[];
  readonly status: number;

  constructor(status: number, code: string, message: string, details: string[] = []) {
    super(message);
    this.status = status;
    this.code = code;
    this.details = details;
  }
}

type FetchLike = typeof fetch;

export class CoachClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = globalThis.fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let data: unknown = null;
    try {
      data = text ? JSON.parse(text) : null;
    } catch {
      throw new ApiError(response.status, "bad-json", `non-JSON response: ${text.slice(0, 200)}`);
    }
    if (!response.ok) {
      const envelope = (data as { error?: { code?: string; message?: string; details?: string[] } })?.error;
      throw new ApiError(
        response.status,
        envelope?.code ?? "unknown",
        envelope?.message ?? `request failed with ${response.status}`,
        envelope?.details ?? [],
      );
    }
    return data as T;
  }

  healthz(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }

  createSession(scenario: ScenarioJson, config?: Record<string, unknown>): Promise<SessionCreated> {
    return this.request("POST", "/sessions", config ? { scenario, config } : { scenario });
  }

  advise(sessionId: string, event: PartnerEventPayload): Promise<AdvicePayload> {
    return this.request("POST", `/sessions/${sessionId}/advise`, event);
  }

  commit(
    sessionId: string,
    move: MovePayload,
    partnerEvent?: PartnerEventPayload,
  ): Promise<CommitSummary> {
    const payload: Record<string, unknown> = { move };
    if (partnerEvent && (partnerEvent.offer || partnerEvent.statements?.length)) {
      payload.partner_event = partnerEvent;
    }
    return this.request("POST", `/sessions/${sessionId}/commit`, payload);
  }

  report(sessionId: string): Promise<ReportPayload> {
    return this.request("GET", `/sessions/${sessionId}/report`);
  }
}
