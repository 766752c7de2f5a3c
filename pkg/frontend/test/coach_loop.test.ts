/** Scripted end-to-end coach loop against the live Python service.
 *
 * Drives the real DOM app in jsdom: creates a session, feeds the documented
 * opening (two priority statements, then a sequence of counterpart offers),
 * commits the recommendation each turn, and checks that what the UI rendered
 * matches the server's stored stage traces turn for turn. Also checks that a
 * what-if preview of a non-recommended candidate never touches the committed
 * timeline, and that client-side validation blocks bad input before any
 * request leaves the browser.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { CoachClient } from "../src/api.js";
import { createApp, type App } from "../src/main.js";
import type { Claims } from "../src/types.js";
import { claimsLabel } from "../src/views.js";

const PORT = 8731 + (process.pid % 97);
const BASE = `http://127.0.0.1:${PORT}`;
const nodeFetch: typeof fetch = (...args) => fetch(...args);

let server: ChildProcess;
let requests = 0;
const countingFetch: typeof fetch = (...args) => {
  requests += 1;
  return nodeFetch(...args);
};

async function waitForHealthz(): Promise<void> {
  for (let attempt = 0; attempt < 120; attempt += 1) {
    try {
      const response = await nodeFetch(`${BASE}/healthz`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("coach service did not come up");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "negokit.cli", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  await waitForHealthz();
});

afterAll(() => {
  server?.kill("SIGTERM");
});

function setStatement(app: App, issue: string, relation: "highest" | "lowest"): void {
  (app.root.querySelector("#statement-issue") as HTMLSelectElement).value = issue;
  (app.root.querySelector("#statement-relation") as HTMLSelectElement).value = relation;
}

function clearStatement(app: App): void {
  (app.root.querySelector("#statement-issue") as HTMLSelectElement).value = "";
}

function setOffer(app: App, claims: Record<string, number>): void {
  (app.root.querySelector("#offer-included") as HTMLInputElement).checked = true;
  for (const [issue, value] of Object.entries(claims)) {
    const input = app.root.querySelector(
      `.claim-input[data-issue="${issue}"]`,
    ) as HTMLInputElement;
    input.value = String(value);
  }
}

function clearOffer(app: App): void {
  (app.root.querySelector("#offer-included") as HTMLInputElement).checked = false;
}

function renderedRecommendation(app: App): string {
  const row = app.root.querySelector("tr.recommended") as HTMLTableRowElement;
  expect(row).not.toBeNull();
  return row.dataset.claims!;
}

describe("coach loop against the live service", () => {
  it("renders server recommendations turn-for-turn and keeps previews uncommitted", async () => {
    document.body.innerHTML = "<div id='root'></div>";
    const app = createApp(
      document.getElementById("root") as HTMLElement,
      new CoachClient(BASE, countingFetch),
    );
    await app.start();
    expect(app.sessionId).toBeTruthy();

    // opening: service asks for their top priority
    clearStatement(app);
    clearOffer(app);
    let advice = await app.advise();
    expect(advice?.mode).toBe("ask-preference");
    expect(app.root.querySelector(".banner-ask")!.textContent).toContain("most");
    await app.commitMode("ask", "highest");

    // they answer: firewood is highest -> ask for their lowest
    setStatement(app, "firewood", "highest");
    advice = await app.advise();
    expect(advice?.mode).toBe("ask-preference");
    expect(app.root.querySelector(".banner-ask")!.textContent).toContain("least");
    await app.commitMode("ask", "lowest");

    // they answer: food is lowest -> first proposal
    const renderedByTurn: string[] = [];
    setStatement(app, "food", "lowest");
    advice = await app.advise();
    expect(advice?.mode).toBe("propose-offer");
    let rendered = renderedRecommendation(app);
    expect(rendered).toBe(claimsLabel(advice!.trace!.selected!.claims));
    expect(rendered).toBe("food=3 water=3 firewood=1");
    renderedByTurn.push(rendered);
    await app.commitOffer(advice!.trace!.selected!.claims);

    // counterpart offers, in order; commit the recommendation each turn
    const partnerOffers: Array<Record<string, number>> = [
      { food: 1, water: 2, firewood: 2 },
      { food: 1, water: 2, firewood: 2 },
      { food: 2, water: 1, firewood: 2 },
      { food: 0, water: 2, firewood: 2 },
    ];
    clearStatement(app);
    for (const [index, claims] of partnerOffers.entries()) {
      setOffer(app, claims);
      advice = await app.advise();
      expect(advice?.mode).toBe("propose-offer");
      rendered = renderedRecommendation(app);
      expect(rendered).toBe(claimsLabel(advice!.trace!.selected!.claims));
      renderedByTurn.push(rendered);

      if (index === 1) {
        // what-if preview of a non-recommended candidate must not commit
        const before = await app.client.report(app.sessionId!);
        const rows = [...app.root.querySelectorAll("tr.candidate-row")];
        const other = rows.find((r) => !r.classList.contains("recommended"))!;
        (other.querySelector("button.preview-btn") as HTMLButtonElement).click();
        expect(app.root.querySelector(".what-if-panel")).not.toBeNull();
        expect(app.root.querySelector(".what-if-panel")!.textContent)
          .toContain("not committed");
        const after = await app.client.report(app.sessionId!);
        expect(after.events).toEqual(before.events);
        expect(after.traces).toEqual(before.traces);
      }

      await app.commitOffer(advice!.trace!.selected!.claims);
    }

    // the server's stored stage traces match what the UI rendered, in order
    const report = await app.client.report(app.sessionId!);
    expect(report.traces).toHaveLength(renderedByTurn.length);
    report.traces.forEach((trace, index) => {
      expect(claimsLabel(trace.selected!.claims)).toBe(renderedByTurn[index]);
    });
    // the advised path never escalates
    const ownScores = report.traces.map((t) => Number(t.selected!.s_a));
    for (let i = 1; i < ownScores.length; i += 1) {
      expect(ownScores[i]).toBeLessThanOrEqual(ownScores[i - 1]);
    }
    // the timeline shows both sides' offers
    const offerEvents = report.events.filter((e) => e.type === "offer");
    expect(offerEvents.length).toBe(renderedByTurn.length + partnerOffers.length);
  });

  it("blocks out-of-range units client-side before any request", async () => {
    document.body.innerHTML = "<div id='root'></div>";
    const app = createApp(
      document.getElementById("root") as HTMLElement,
      new CoachClient(BASE, countingFetch),
    );
    await app.start();
    setOffer(app, { food: 9, water: 0, firewood: 0 });
    const sent = requests;
    const advice = await app.advise();
    expect(advice).toBeNull();
    expect(requests).toBe(sent); // nothing left the browser
    const error = app.root.querySelector(".field-error") as HTMLElement;
    expect(error).not.toBeNull();
    expect(error.dataset.issue).toBe("food");
  });

  it("statement-only events update the inferred preferences in the advice", async () => {
    document.body.innerHTML = "<div id='root'></div>";
    const app = createApp(
      document.getElementById("root") as HTMLElement,
      new CoachClient(BASE, countingFetch),
    );
    await app.start();
    setStatement(app, "firewood", "highest");
    const advice = await app.advise();
    expect(advice?.ipp?.weights?.firewood).toBe("5");
  });
});
