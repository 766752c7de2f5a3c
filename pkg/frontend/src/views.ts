/** DOM renderers. Every number shown comes from the server untouched; the
 * only client-side math is scaling bar widths for display. */

import type {
  AdvicePayload,
  CandidateRow,
  Claims,
  FrontierPoint,
  OfferRow,
  StageTraceJson,
} from "./types.js";
import { wireToNumber } from "./types.js";

export interface AdviceHandlers {
  onPreview?: (candidate: CandidateRow) => void;
  onCommitRecommended?: (claims: Claims) => void;
}

export function claimsLabel(claims: Claims): string {
  return Object.entries(claims)
    .map(([issue, value]) => `${issue}=${value}`)
    .join(" ");
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderSignalBadges(trace: StageTraceJson): HTMLElement {
  const wrap = el("div", "signals");
  const fairness = el("span", `badge badge-fairness badge-${trace.fairness}`,
    `fairness: ${trace.fairness}`);
  const stance = el("span", `badge badge-stance badge-${trace.stance}`,
    `stance: ${trace.stance}`);
  const lp = el("span", "badge badge-params",
    `λ=${trace.lambda} cap=${trace.s_max}`);
  wrap.append(fairness, stance, lp);
  return wrap;
}

function bar(value: string | undefined): HTMLElement {
  const cell = el("div", "bar-wrap");
  const fill = el("div", "bar-fill");
  const fraction = value === undefined ? 0 : Math.max(0, Math.min(1, wireToNumber(value)));
  fill.style.width = `${(fraction * 100).toFixed(1)}%`;
  fill.title = value ?? "";
  const label = el("span", "bar-label", value ?? "-");
  cell.append(fill, label);
  return cell;
}

export function renderCandidateTable(
  trace: StageTraceJson,
  handlers: AdviceHandlers = {},
): HTMLElement {
  const table = el("table", "candidates");
  const head = el("tr");
  for (const col of ["offer", "own", "theirs (est.)", "TS", "SI", "PAP", "SA", "final", ""]) {
    head.append(el("th", undefined, col));
  }
  table.append(head);
  const selectedKey = trace.selected ? claimsLabel(trace.selected.claims) : null;
  const rows = [...trace.candidates].sort(
    (a, b) => wireToNumber(b.final ?? "0") - wireToNumber(a.final ?? "0"),
  );
  for (const candidate of rows) {
    const row = el("tr", "candidate-row");
    const key = claimsLabel(candidate.claims);
    row.dataset.claims = key;
    if (selectedKey === key) row.classList.add("recommended");
    row.append(el("td", "claims", key));
    row.append(el("td", "num", candidate.s_a));
    row.append(el("td", "num", candidate.s_p_est));
    for (const metric of [candidate.ts, candidate.si, candidate.pap, candidate.sa, candidate.final]) {
      const cell = el("td", "metric");
      cell.append(bar(metric));
      row.append(cell);
    }
    const actions = el("td", "actions");
    const preview = el("button", "preview-btn", "what-if");
    preview.type = "button";
    preview.addEventListener("click", () => handlers.onPreview?.(candidate));
    actions.append(preview);
    row.append(actions);
    table.append(row);
  }
  return table;
}

export function renderTacticCard(trace: StageTraceJson): HTMLElement {
  const card = el("div", "tactic-card");
  const info = trace.tactic_rationale ?? {};
  card.append(el("h3", undefined, `${trace.tactic ?? "?"} — ${info.name ?? ""} (${info.group ?? ""})`));
  for (const [label, text] of [["when", info.when], ["how", info.how], ["why", info.why]] as const) {
    if (text) {
      const row = el("p", `tactic-${label}`);
      row.append(el("strong", undefined, `${label}: `), document.createTextNode(text));
      card.append(row);
    }
  }
  return card;
}

export function renderAdvice(
  container: HTMLElement,
  advice: AdvicePayload,
  handlers: AdviceHandlers = {},
): void {
  container.replaceChildren();
  try {
    if (advice.mode === "ask-preference") {
      const banner = el("div", "banner banner-ask");
      banner.append(el("strong", undefined, "Ask: "),
        document.createTextNode(
          advice.ask === "highest"
            ? "which issue matters most to them?"
            : "which issue matters least to them?"));
      container.append(banner);
      return;
    }
    if (advice.mode === "accept") {
      const banner = el("div", "banner banner-accept");
      banner.append(el("strong", undefined, "Accept. "), document.createTextNode(advice.reason));
      container.append(banner);
      return;
    }
    if (advice.mode === "walk-away") {
      const banner = el("div", "banner banner-walk");
      banner.append(el("strong", undefined, "Walk away. "), document.createTextNode(advice.reason));
      container.append(banner);
      return;
    }
    if (advice.mode !== "propose-offer" || !advice.trace) {
      throw new Error(`unexpected advice payload: mode=${String(advice.mode)}`);
    }
    if (advice.warn) {
      container.append(el("div", "banner banner-warn", advice.reason));
    }
    const trace = advice.trace;
    if (trace.infeasible || !trace.selected || trace.candidates.length === 0) {
      container.append(el("div", "banner banner-infeasible",
        "No feasible counteroffer under the current bounds."));
      return;
    }
    container.append(renderSignalBadges(trace));
    const recommend = el("div", "recommended-offer");
    recommend.append(el("strong", undefined, "Recommended: "),
      document.createTextNode(`${claimsLabel(trace.selected.claims)} `),
      el("span", "rec-score", `(own ${trace.selected.s_a}, theirs ~${trace.selected.s_p_est})`));
    const commitBtn = el("button", "commit-recommended", "commit this offer");
    commitBtn.type = "button";
    commitBtn.addEventListener("click", () =>
      handlers.onCommitRecommended?.(trace.selected!.claims));
    recommend.append(commitBtn);
    container.append(recommend);
    container.append(renderCandidateTable(trace, handlers));
    container.append(renderTacticCard(trace));
  } catch (error) {
    container.replaceChildren();
    const banner = el("div", "banner banner-error");
    banner.append(el("strong", undefined, "Could not render advice. "));
    banner.append(el("pre", "raw-payload", JSON.stringify(advice, null, 2)));
    banner.append(el("p", undefined, String(error)));
    container.append(banner);
  }
}

export function renderWhatIf(container: HTMLElement, candidate: CandidateRow | null): void {
  container.replaceChildren();
  if (!candidate) return;
  const panel = el("div", "what-if-panel");
  panel.append(el("h3", undefined, "What-if preview (not committed)"));
  panel.append(el("p", undefined,
    `Playing ${claimsLabel(candidate.claims)} would keep ${candidate.s_a} for you ` +
    `and leave them an estimated ${candidate.s_p_est}. Your next cap would become ` +
    `${candidate.s_a}. Nothing is sent until you commit.`));
  container.append(panel);
}

export function renderTimeline(container: HTMLElement, events: Array<Record<string, unknown>>): void {
  container.replaceChildren();
  const list = el("ol", "timeline");
  for (const event of events) {
    const type = String(event.type ?? "");
    const by = String(event.by ?? "");
    let text = "";
    if (type === "offer") {
      text = `${by} offered ${claimsLabel(event.claims as Claims)}`;
    } else if (type === "statement") {
      text = `${by} said ${String(event.issue)} is their ${String(event.relation)}`;
    } else if (type === "mode") {
      text = `${by}: ${String(event.mode)}${event.ask ? ` (${String(event.ask)})` : ""}`;
    } else if (type === "stage-trace") {
      continue;
    } else if (type === "outcome") {
      text = `outcome: ${String(event.result)}`;
    } else {
      text = type;
    }
    const item = el("li", `timeline-${type} timeline-by-${by}`, `t${String(event.turn ?? "?")} ${text}`);
    list.append(item);
  }
  container.append(list);
}

export function renderOutcome(container: HTMLElement, outcome: Record<string, unknown> | null): void {
  container.replaceChildren();
  if (!outcome) return;
  const banner = el("div", "banner banner-outcome");
  if (outcome.result === "agreement") {
    banner.textContent =
      `Agreement: you ${String(outcome.agent_score)}, them ${String(outcome.partner_score)}.`;
  } else {
    banner.textContent = "Walked away: no deal.";
  }
  container.append(banner);
}

export function renderPareto(
  svg: SVGSVGElement,
  frontier: FrontierPoint[],
  offers: OfferRow[],
): void {
  const ns = "http://www.w3.org/2000/svg";
  svg.replaceChildren();
  const width = 320;
  const height = 320;
  const pad = 30;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  const values = frontier
    .flatMap((p) => [wireToNumber(p.agent), wireToNumber(p.partner)])
    .concat(offers.flatMap((o) => [wireToNumber(o.agent), wireToNumber(o.partner)]));
  const maxScore = Math.max(1, ...values);
  const x = (v: number) => pad + (v / maxScore) * (width - 2 * pad);
  const y = (v: number) => height - pad - (v / maxScore) * (height - 2 * pad);

  const axes = document.createElementNS(ns, "path");
  axes.setAttribute("d", `M ${pad} ${pad} L ${pad} ${height - pad} L ${width - pad} ${height - pad}`);
  axes.setAttribute("class", "axes");
  axes.setAttribute("fill", "none");
  axes.setAttribute("stroke", "#888");
  svg.append(axes);

  for (const point of frontier) {
    const dot = document.createElementNS(ns, "circle");
    dot.setAttribute("cx", String(x(wireToNumber(point.agent))));
    dot.setAttribute("cy", String(y(wireToNumber(point.partner))));
    dot.setAttribute("r", "5");
    dot.setAttribute("class", "frontier-point");
    dot.setAttribute("fill", "none");
    dot.setAttribute("stroke", "#2e8b57");
    const title = document.createElementNS(ns, "title");
    title.textContent = `frontier (${point.agent}, ${point.partner})`;
    dot.append(title);
    svg.append(dot);
  }
  for (const offer of offers) {
    const dot = document.createElementNS(ns, "circle");
    dot.setAttribute("cx", String(x(wireToNumber(offer.agent))));
    dot.setAttribute("cy", String(y(wireToNumber(offer.partner))));
    dot.setAttribute("r", "3.5");
    dot.setAttribute("class", `offer-point offer-${offer.by}`);
    dot.setAttribute("fill", offer.by === "agent" ? "#1e6fd9" : "#d9534f");
    const title = document.createElementNS(ns, "title");
    title.textContent = `${offer.by} t${offer.turn} (${offer.agent}, ${offer.partner})`;
    dot.append(title);
    svg.append(dot);
  }
}
