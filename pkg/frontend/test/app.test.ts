// DOM behaviour with a scripted fetch: what goes out, what gets
// rendered, and what never gets sent at all.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { initApp } from "../src/main.js";
import type { AnalyzeResponse } from "../src/types.js";

interface MockCall {
  url: string;
  body: unknown;
  respond: (status: number, body: unknown) => void;
  fail: () => void;
}

function makeFetchMock() {
  const calls: MockCall[] = [];
  const fetchFn = (url: string, init?: RequestInit) =>
    new Promise<Response>((resolve, reject) => {
      init?.signal?.addEventListener("abort", () =>
        reject(new DOMException("The operation was aborted.", "AbortError"))
      );
      calls.push({
        url: String(url),
        body: init?.body ? JSON.parse(String(init.body)) : null,
        respond: (status, body) =>
          resolve(
            new Response(JSON.stringify(body), {
              status,
              headers: { "Content-Type": "application/json" },
            })
          ),
        fail: () => reject(new TypeError("fetch failed")),
      });
    });
  return { calls, fetchFn };
}

function powerEnvelope(power: number, body: Record<string, unknown>): AnalyzeResponse {
  return {
    engine_version: "0.1.0",
    request: body as AnalyzeResponse["request"],
    effect: { kind: "dz", value: 0.453125, derivation: "mean of differences over their SD", warnings: [] },
    result: { power, noncentrality: 2.3544, df1: 26, df2: null, critical_value: 2.0555 },
    warnings: [],
  };
}

const flush = () => new Promise((r) => setTimeout(r, 0));

let mock: ReturnType<typeof makeFetchMock>;
let root: HTMLElement;

function analyzeCalls(): MockCall[] {
  return mock.calls.filter((c) => c.url.endsWith("/api/analyze"));
}

function type(field: string, value: string): void {
  const input = root.querySelector(`[data-field="${field}"]`) as HTMLInputElement;
  input.value = value;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

function click(selector: string): void {
  (root.querySelector(selector) as HTMLElement).click();
}

function text(selector: string): string {
  return root.querySelector(selector)?.textContent ?? "";
}

function fillPairedPostHoc(): void {
  click('[data-family="paired_t"]');
  click('[data-analysis="post_hoc"]');
  type("meanDiff", "-0.29");
  type("sdDiff", "0.64");
  type("nPairs", "27");
}

beforeEach(() => {
  mock = makeFetchMock();
  vi.stubGlobal("fetch", mock.fetchFn);
  root = document.createElement("div");
  document.body.appendChild(root);
  initApp(root);
});

afterEach(() => {
  vi.unstubAllGlobals();
  root.remove();
});

describe("layout and defaults", () => {
  it("starts on independent t with the defaults filled in", () => {
    expect(text('[data-family="independent_t"]')).toContain("Independent t");
    expect(root.querySelector('[data-family="independent_t"]')?.className).toContain("active");
    expect((root.querySelector('[data-field="alpha"]') as HTMLInputElement).value).toBe("0.05");
    expect((root.querySelector('[data-field="tails"]') as HTMLSelectElement).value).toBe("two");
  });

  it("shows target power and drop rate defaults in a-priori mode", () => {
    click('[data-analysis="a_priori"]');
    expect((root.querySelector('[data-field="targetPower"]') as HTMLInputElement).value).toBe("0.8");
    expect((root.querySelector('[data-field="dropRate"]') as HTMLInputElement).value).toBe("0.10");
  });

  it("offers the curve only for the paired family", () => {
    const curveBtn = () => root.querySelector('[data-analysis="curve"]') as HTMLButtonElement;
    expect(curveBtn().disabled).toBe(true);
    click('[data-family="paired_t"]');
    expect(curveBtn().disabled).toBe(false);
  });

  it("reports the engine version from the health probe", async () => {
    const health = mock.calls.find((c) => c.url.endsWith("/api/health"));
    health?.respond(200, { status: "ok", engine_version: "9.9.9" });
    await flush();
    expect(text("#engine-version")).toBe("engine v9.9.9");
  });
});

describe("state retention", () => {
  it("keeps entered summaries when switching analysis mode", () => {
    click('[data-family="paired_t"]');
    type("meanDiff", "-0.29");
    type("sdDiff", "0.64");
    click('[data-analysis="a_priori"]');
    expect((root.querySelector('[data-field="meanDiff"]') as HTMLInputElement).value).toBe("-0.29");
    expect((root.querySelector('[data-field="sdDiff"]') as HTMLInputElement).value).toBe("0.64");
  });

  it("keeps each family's inputs when tabbing away and back", () => {
    type("group1.mean", "25.4");
    click('[data-family="paired_t"]');
    click('[data-family="independent_t"]');
    expect((root.querySelector('[data-field="group1.mean"]') as HTMLInputElement).value).toBe("25.4");
  });
});

describe("validation gate", () => {
  it("blocks sd = 0 with an inline message and sends nothing", () => {
    fillPairedPostHoc();
    type("sdDiff", "0");
    click("#run-btn");
    expect(text("#form-errors")).toContain("> 0");
    expect(root.querySelector('[data-field="sdDiff"]')?.className).toContain("invalid");
    expect(analyzeCalls()).toHaveLength(0);
  });

  it("never sends a request on keystrokes alone", () => {
    fillPairedPostHoc();
    expect(analyzeCalls()).toHaveLength(0);
  });
});

describe("submission", () => {
  it("renders the power card from the response", async () => {
    fillPairedPostHoc();
    click("#run-btn");
    const call = analyzeCalls()[0];
    expect(call.body).toMatchObject({
      analysis: "post_hoc",
      family: "paired_t",
      alpha: 0.05,
      mean_diff: -0.29,
      sd_diff: 0.64,
      n: 27,
    });
    call.respond(200, powerEnvelope(0.6206, call.body as Record<string, unknown>));
    await flush();
    expect(text("#out-power")).toBe("0.6206");
    expect(text("#result-card")).toContain("dz = 0.4531");
    expect(text("#history-list")).toContain("power 0.6206");
    expect(root.querySelector("#copy-csv")?.className).not.toContain("hidden");
  });

  it("keeps only the newest of two overlapping submissions", async () => {
    fillPairedPostHoc();
    click("#run-btn");
    type("nPairs", "40");
    click("#run-btn");
    const [first, second] = analyzeCalls();
    expect((second.body as { n: number }).n).toBe(40);
    second.respond(200, powerEnvelope(0.9, second.body as Record<string, unknown>));
    await flush();
    expect(text("#out-power")).toBe("0.9000");
    // the first request was aborted: it must not land in history either
    expect(root.querySelectorAll("#history-list li").length).toBe(1);
    expect(first).toBeDefined();
  });

  it("shows an unreachable-service banner without wiping the last result", async () => {
    fillPairedPostHoc();
    click("#run-btn");
    const ok = analyzeCalls()[0];
    ok.respond(200, powerEnvelope(0.6206, ok.body as Record<string, unknown>));
    await flush();

    click("#run-btn");
    analyzeCalls()[1].fail();
    await flush();
    expect(text("#result-banner")).toContain("unreachable");
    expect(text("#out-power")).toBe("0.6206"); // card untouched
  });

  it("maps a 400 with missing fields onto the form", async () => {
    fillPairedPostHoc();
    click("#run-btn");
    analyzeCalls()[0].respond(400, { error: "missing required field(s): n", missing: ["n"] });
    await flush();
    expect(text("#form-errors")).toContain("missing n");
  });

  it("surfaces a 422 domain error in the banner", async () => {
    fillPairedPostHoc();
    click("#run-btn");
    analyzeCalls()[0].respond(422, { error: "alpha must lie in (0, 1), got 1.5" });
    await flush();
    expect(text("#result-banner")).toContain("alpha must lie in (0, 1)");
  });
});

describe("curve rendering", () => {
  it("draws reference lines, crossing notes and a hover readout", async () => {
    click('[data-family="paired_t"]');
    click('[data-analysis="curve"]');
    type("meanDiff", "-0.29");
    type("sdDiff", "0.64");
    type("nMin", "20");
    type("nMax", "22");
    click("#run-btn");
    const call = analyzeCalls()[0];
    call.respond(200, {
      engine_version: "0.1.0",
      request: call.body,
      effect: { kind: "dz", value: 0.453125, derivation: "mean of differences over their SD", warnings: [] },
      result: {
        points: [
          { n: 20, t_stat: 2.0264, p_value: 0.0569, power: 0.4807 },
          { n: 21, t_stat: 2.0764, p_value: 0.0509, power: 0.5043 },
          { n: 22, t_stat: 2.1253, p_value: 0.0455, power: 0.5271 },
        ],
      },
      warnings: [],
    });
    await flush();
    expect(root.querySelector("#curve-svg")).not.toBeNull();
    expect(root.querySelector("#ref-alpha")).not.toBeNull();
    expect(root.querySelector("#ref-target")).not.toBeNull();
    expect(text("#curve-notes")).toContain("p-value crosses 0.05 between N=21 and N=22");

    const dot = root.querySelector('circle.p-dot[data-n="22"]') as SVGCircleElement;
    dot.dispatchEvent(new Event("mouseenter"));
    expect(text("#curve-readout")).toBe("N=22: t=2.1253, p=0.0455, power=0.5271");
  });
});
