import { beforeEach, describe, expect, it } from "vitest";

import type { AdvicePayload, StageTraceJson } from "../src/types.js";
import { renderAdvice, renderTimeline, renderWhatIf } from "../src/views.js";

const trace: StageTraceJson = {
  turn: 9,
  fairness: "unfair",
  stance: "generous",
  lambda: "0.3",
  s_max: "30",
  tactic: "RC",
  tactic_rationale: { name: "Reciprocal concession", group: "collaborative",
    when: "they conceded", how: "match it", why: "keeps pace symmetric" },
  infeasible: false,
  adapter_fallback: false,
  candidates: [
    { claims: { food: 3, water: 3, firewood: 1 }, s_a: "30", s_p_est: "10",
      ts: "5/18", si: "0.5", pap: "0.33", sa: "0", final: "0.12" },
    { claims: { food: 3, water: 2, firewood: 1 }, s_a: "26", s_p_est: "14",
      ts: "7/18", si: "0.61", pap: "0.44", sa: "1", final: "0.8" },
    { claims: { food: 3, water: 3, firewood: 0 }, s_a: "27", s_p_est: "15",
      ts: "5/12", si: "0.64", pap: "0.47", sa: "0.75", final: "0.65" },
  ],
  selected: { claims: { food: 3, water: 2, firewood: 1 }, s_a: "26", s_p_est: "14",
    final: "0.8" },
};

const advice: AdvicePayload = {
  mode: "propose-offer",
  reason: "countering",
  warn: false,
  trace,
  recommended: { claims: { food: 3, water: 2, firewood: 1 } },
};

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "<div id='c'></div>";
  container = document.getElementById("c")!;
});

describe("renderAdvice (propose mode)", () => {
  it("sorts the candidate table by final score and highlights the pick", () => {
    renderAdvice(container, advice);
    const rows = [...container.querySelectorAll("tr.candidate-row")];
    expect(rows).toHaveLength(3);
    const finals = rows.map((r) => r.querySelectorAll("td.metric .bar-label")[4].textContent);
    expect(finals).toEqual(["0.8", "0.65", "0.12"]);
    expect(rows[0].classList.contains("recommended")).toBe(true);
    expect(rows[1].classList.contains("recommended")).toBe(false);
    expect(container.querySelector(".recommended-offer")!.textContent)
      .toContain("food=3 water=2 firewood=1");
  });

  it("renders signal badges and the tactic card", () => {
    renderAdvice(container, advice);
    expect(container.querySelector(".badge-fairness")!.textContent).toContain("unfair");
    expect(container.querySelector(".badge-stance")!.textContent).toContain("generous");
    const card = container.querySelector(".tactic-card")!;
    expect(card.textContent).toContain("RC");
    expect(card.textContent).toContain("match it");
  });

  it("wires the what-if preview callback", () => {
    let previewed: unknown = null;
    renderAdvice(container, advice, { onPreview: (c) => { previewed = c; } });
    const secondRow = [...container.querySelectorAll("tr.candidate-row")][1];
    (secondRow.querySelector("button.preview-btn") as HTMLButtonElement).click();
    expect(previewed).not.toBeNull();
    expect((previewed as { s_a: string }).s_a).toBe("27");
  });
});

describe("renderAdvice (other modes)", () => {
  it("accept banner carries the threshold arithmetic in the reason", () => {
    renderAdvice(container, {
      mode: "accept", warn: false,
      reason: "their offer gives us 30, meeting our last ask of 30",
    });
    const banner = container.querySelector(".banner-accept")!;
    expect(banner.textContent).toContain("meeting our last ask of 30");
  });

  it("infeasible trace shows the notice and no table", () => {
    renderAdvice(container, {
      mode: "propose-offer", reason: "", warn: false,
      trace: { ...trace, infeasible: true, candidates: [], selected: null },
    });
    expect(container.querySelector(".banner-infeasible")).not.toBeNull();
    expect(container.querySelector("table.candidates")).toBeNull();
  });

  it("schema mismatch falls back to an error banner with the raw payload", () => {
    renderAdvice(container, { mode: "propose-offer", reason: "", warn: false } as AdvicePayload);
    const banner = container.querySelector(".banner-error")!;
    expect(banner.textContent).toContain("Could not render advice");
    expect(banner.querySelector(".raw-payload")!.textContent).toContain("propose-offer");
  });
});

describe("renderWhatIf / renderTimeline", () => {
  it("preview panel is explicit that nothing is committed", () => {
    renderWhatIf(container, trace.candidates[2]);
    expect(container.querySelector(".what-if-panel")!.textContent).toContain("not committed");
    renderWhatIf(container, null);
    expect(container.querySelector(".what-if-panel")).toBeNull();
  });

  it("timeline lists offers and statements, skipping stage traces", () => {
    renderTimeline(container, [
      { type: "mode", by: "partner", turn: 0, mode: "open" },
      { type: "statement", by: "partner", turn: 2, issue: "firewood", relation: "highest" },
      { type: "stage-trace", turn: 5, trace: {} },
      { type: "offer", by: "agent", turn: 5, claims: { food: 3, water: 3, firewood: 1 } },
    ]);
    const items = [...container.querySelectorAll("li")];
    expect(items).toHaveLength(3);
    expect(items[1].textContent).toContain("firewood is their highest");
    expect(items[2].textContent).toContain("agent offered food=3");
  });
});
