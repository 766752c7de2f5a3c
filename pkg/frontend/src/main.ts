/** App wiring: session setup, the partner-event form, advice, commit, report. */

import { ApiError, CoachClient } from "./api.js";
import type {
  AdvicePayload,
  CandidateRow,
  Claims,
  PartnerEventPayload,
  ReportPayload,
  ScenarioJson,
  StatementJson,
} from "./types.js";
import { validateClaims } from "./validate.js";
import {
  claimsLabel,
  renderAdvice,
  renderOutcome,
  renderPareto,
  renderTimeline,
  renderWhatIf,
} from "./views.js";

const DEFAULT_SCENARIO: ScenarioJson = {
  id: "campsite",
  max_turns: 40,
  issues: [
    { name: "food", kind: "allocated-integer", min: 0, max: 3 },
    { name: "water", kind: "allocated-integer", min: 0, max: 3 },
    { name: "firewood", kind: "allocated-integer", min: 0, max: 3 },
  ],
  agent_prefs: { weights: { food: 5, water: 4, firewood: 3 } },
  partner_prefs: { weights: { food: 3, water: 4, firewood: 5 } },
};

export interface App {
  root: HTMLElement;
  client: CoachClient;
  sessionId: string | null;
  scenario: ScenarioJson | null;
  lastAdvice: AdvicePayload | null;
  lastEvent: PartnerEventPayload | null;
  start(scenario?: ScenarioJson): Promise<void>;
  readPartnerEvent(): PartnerEventPayload | null;
  advise(): Promise<AdvicePayload | null>;
  commitOffer(claims: Claims): Promise<void>;
  commitMode(kind: "accept" | "walk-away" | "ask", ask?: "highest" | "lowest"): Promise<void>;
  refreshReport(): Promise<ReportPayload>;
}

function byId<T extends HTMLElement>(root: HTMLElement, id: string): T {
  const node = root.querySelector<T>(`#${id}`);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

export function buildSkeleton(root: HTMLElement): void {
  root.innerHTML = `
    <section id="setup">
      <h2>Session</h2>
      <textarea id="scenario-json" rows="8" spellcheck="false"></textarea>
      <button id="start-session" type="button">start session</button>
      <span id="session-label"></span>
    </section>
    <section id="partner-event">
      <h2>Their move</h2>
      <div id="offer-fields"></div>
      <label><input type="checkbox" id="offer-included"> includes an offer</label>
      <div id="statement-fields">
        <select id="statement-issue"><option value="">(no statement)</option></select>
        <select id="statement-relation">
          <option value="highest">is their highest priority</option>
          <option value="lowest">is their lowest priority</option>
        </select>
      </div>
      <div id="field-errors" class="field-errors"></div>
      <button id="get-advice" type="button">get advice</button>
    </section>
    <section id="advice-section">
      <h2>Advice</h2>
      <div id="advice"></div>
      <div id="what-if"></div>
      <div id="manual-moves">
        <button id="commit-accept" type="button">accept their offer</button>
        <button id="commit-walk" type="button">walk away</button>
        <button id="commit-ask" type="button">ask a question</button>
      </div>
    </section>
    <section id="report-section">
      <h2>Timeline</h2>
      <div id="outcome"></div>
      <div id="timeline"></div>
      <h2>Score space</h2>
      <svg id="pareto" width="320" height="320"></svg>
    </section>
  `;
}

function offerFieldsFor(root: HTMLElement, scenario: ScenarioJson): void {
  const holder = byId<HTMLDivElement>(root, "offer-fields");
  holder.replaceChildren();
  for (const spec of scenario.issues) {
    const label = document.createElement("label");
    label.className = "offer-field";
    label.textContent = `${spec.name} they keep: `;
    if (spec.kind === "allocated-integer") {
      const input = document.createElement("input");
      input.type = "number";
      input.min = String(spec.min ?? 0);
      input.max = String(spec.max ?? 0);
      input.value = String(spec.min ?? 0);
      input.dataset.issue = spec.name;
      input.className = "claim-input";
      label.append(input);
    } else if (spec.kind === "shared-categorical") {
      const select = document.createElement("select");
      select.dataset.issue = spec.name;
      select.className = "claim-input";
      for (const option of spec.options ?? []) {
        const node = document.createElement("option");
        node.value = option;
        node.textContent = option;
        select.append(node);
      }
      label.append(select);
    } else {
      const input = document.createElement("input");
      input.type = "checkbox";
      input.dataset.issue = spec.name;
      input.className = "claim-input";
      label.append(input);
    }
    holder.append(label);
  }
  const statementIssue = byId<HTMLSelectElement>(root, "statement-issue");
  statementIssue.replaceChildren();
  const none = document.createElement("option");
  none.value = "";
  none.textContent = "(no statement)";
  statementIssue.append(none);
  for (const spec of scenario.issues) {
    const option = document.createElement("option");
    option.value = spec.name;
    option.textContent = spec.name;
    statementIssue.append(option);
  }
}

export function createApp(root: HTMLElement, client: CoachClient): App {
  buildSkeleton(root);
  const scenarioBox = byId<HTMLTextAreaElement>(root, "scenario-json");
  scenarioBox.value = JSON.stringify(DEFAULT_SCENARIO, null, 2);

  const app: App = {
    root,
    client,
    sessionId: null,
    scenario: null,
    lastAdvice: null,
    lastEvent: null,

    async start(scenario?: ScenarioJson): Promise<void> {
      const parsed = scenario ?? (JSON.parse(scenarioBox.value) as ScenarioJson);
      const created = await client.createSession(parsed);
      app.sessionId = created.session_id;
      app.scenario = created.scenario;
      byId<HTMLSpanElement>(root, "session-label").textContent =
        `session ${created.session_id.slice(0, 8)}`;
      offerFieldsFor(root, created.scenario);
      await app.refreshReport();
    },

    readPartnerEvent(): PartnerEventPayload | null {
      if (!app.scenario) return null;
      const errorsBox = byId<HTMLDivElement>(root, "field-errors");
      errorsBox.replaceChildren();
      const event: PartnerEventPayload = {};
      const issueSelect = byId<HTMLSelectElement>(root, "statement-issue");
      if (issueSelect.value) {
        const relation = byId<HTMLSelectElement>(root, "statement-relation").value as
          StatementJson["relation"];
        event.statements = [{
          type: "statement", issue: issueSelect.value, relation, turn: 0,
        }];
      }
      const includeOffer = byId<HTMLInputElement>(root, "offer-included").checked;
      if (includeOffer) {
        const claims: Claims = {};
        for (const input of root.querySelectorAll<HTMLElement>(".claim-input")) {
          const issue = (input as HTMLElement).dataset.issue!;
          if (input instanceof HTMLInputElement && input.type === "number") {
            claims[issue] = Number(input.value);
          } else if (input instanceof HTMLInputElement) {
            claims[issue] = input.checked;
          } else if (input instanceof HTMLSelectElement) {
            claims[issue] = input.value;
          }
        }
        const errors = validateClaims(app.scenario, claims);
        if (errors.length) {
          for (const error of errors) {
            const line = document.createElement("p");
            line.className = "field-error";
            line.dataset.issue = error.issue;
            line.textContent = `${error.issue}: ${error.message}`;
            errorsBox.append(line);
          }
          return null;
        }
        event.offer = { claims };
      }
      return event;
    },

    async advise(): Promise<AdvicePayload | null> {
      if (!app.sessionId) return null;
      const event = app.readPartnerEvent();
      if (event === null) return null;
      const adviceBox = byId<HTMLDivElement>(root, "advice");
      try {
        const advice = await client.advise(app.sessionId, event);
        app.lastAdvice = advice;
        app.lastEvent = event;
        renderAdvice(adviceBox, advice, {
          onPreview: (candidate: CandidateRow) =>
            renderWhatIf(byId<HTMLDivElement>(root, "what-if"), candidate),
          onCommitRecommended: (claims: Claims) => void app.commitOffer(claims),
        });
        return advice;
      } catch (error) {
        adviceBox.replaceChildren();
        const banner = document.createElement("div");
        banner.className = "banner banner-error";
        banner.textContent = error instanceof ApiError
          ? `${error.message} ${error.details.join("; ")}`
          : String(error);
        adviceBox.append(banner);
        return null;
      }
    },

    async commitOffer(claims: Claims): Promise<void> {
      if (!app.sessionId) return;
      await client.commit(app.sessionId, { type: "offer", offer: { claims } },
        app.lastEvent ?? undefined);
      app.lastEvent = null;
      renderWhatIf(byId<HTMLDivElement>(root, "what-if"), null);
      await app.refreshReport();
    },

    async commitMode(kind: "accept" | "walk-away" | "ask", ask?: "highest" | "lowest"):
        Promise<void> {
      if (!app.sessionId) return;
      const move = kind === "ask"
        ? { type: kind, ask: ask ?? (app.lastAdvice?.ask ?? "highest") }
        : { type: kind };
      await client.commit(app.sessionId, move as never, app.lastEvent ?? undefined);
      app.lastEvent = null;
      await app.refreshReport();
    },

    async refreshReport(): Promise<ReportPayload> {
      if (!app.sessionId) throw new Error("no session");
      const report = await client.report(app.sessionId);
      renderTimeline(byId<HTMLDivElement>(root, "timeline"), report.events);
      renderOutcome(byId<HTMLDivElement>(root, "outcome"), report.outcome);
      renderPareto(
        byId<SVGSVGElement & HTMLElement>(root, "pareto") as unknown as SVGSVGElement,
        report.frontier,
        report.offers,
      );
      return report;
    },
  };

  byId<HTMLButtonElement>(root, "start-session")
    .addEventListener("click", () => void app.start());
  byId<HTMLButtonElement>(root, "get-advice")
    .addEventListener("click", () => void app.advise());
  byId<HTMLButtonElement>(root, "commit-accept")
    .addEventListener("click", () => void app.commitMode("accept"));
  byId<HTMLButtonElement>(root, "commit-walk")
    .addEventListener("click", () => void app.commitMode("walk-away"));
  byId<HTMLButtonElement>(root, "commit-ask")
    .addEventListener("click", () => void app.commitMode("ask"));
  return app;
}

declare global {
  interface Window {
    coachApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const root = document.getElementById("app") as HTMLElement;
  window.coachApp = createApp(root, new CoachClient(""));
}
