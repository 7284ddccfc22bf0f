// End-to-end: the app in a DOM, talking over real HTTP to the real
// service. Covers the headline flow — paired-t a-priori with the
// (-0.29, 0.64) difference summary, then the p/power curve.

import type { ChildProcess } from "node:child_process";
import { spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { initApp } from "../src/main.js";

const SERVER_SCRIPT = [
  "from powerbench.service import make_server",
  "s = make_server('127.0.0.1', 0)",
  "print(s.server_address[1], flush=True)",
  "s.serve_forever()",
].join("\n");

let child: ChildProcess;
let baseUrl: string;
let root: HTMLElement;

async function until(cond: () => boolean, ms = 15000): Promise<void> {
  const start = Date.now();
  while (!cond()) {
    if (Date.now() - start > ms) throw new Error("timed out waiting for condition");
    await new Promise((r) => setTimeout(r, 25));
  }
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

beforeAll(async () => {
  child = spawn("python3", ["-c", SERVER_SCRIPT], { stdio: ["ignore", "pipe", "pipe"] });
  let out = "";
  child.stdout!.on("data", (chunk) => (out += String(chunk)));
  child.stderr!.on("data", (chunk) => console.error("[service]", String(chunk)));
  await until(() => out.includes("\n"));
  const port = Number(out.split("\n")[0]);
  baseUrl = `http://127.0.0.1:${port}`;

  // wait until the liveness probe answers
  for (;;) {
    try {
      const res = await fetch(baseUrl + "/api/health");
      if (res.ok) break;
    } catch {
      await new Promise((r) => setTimeout(r, 50));
    }
  }

  root = document.createElement("div");
  document.body.appendChild(root);
  initApp(root, { baseUrl });
});

afterAll(() => {
  child?.kill();
});

describe("paired-t a-priori flow", () => {
  it("shows the engine version once the health probe lands", async () => {
    await until(() => text("#engine-version").length > 0);
    expect(text("#engine-version")).toMatch(/^engine v\d/);
  });

  it("displays min N 41 and final N 46 for the (-0.29, 0.64) difference", async () => {
    click('[data-family="paired_t"]');
    click('[data-analysis="a_priori"]');
    type("meanDiff", "-0.29");
    type("sdDiff", "0.64");
    // defaults stay: alpha .05, two tails, power .8, drop rate .10
    click("#run-btn");
    await until(() => root.querySelector("#out-min-n") !== null);
    expect(text("#out-min-n")).toBe("41");
    expect(text("#out-final-n")).toBe("46");
    expect(text("#result-card")).toContain("pairs");
    expect(text("#result-card")).toContain("dz = 0.4531");
  });

  it("resubmitting the same inputs renders the same card", async () => {
    click("#run-btn");
    await until(() => root.querySelectorAll("#history-list li").length === 2);
    expect(text("#out-min-n")).toBe("41");
    expect(text("#out-final-n")).toBe("46");
  });
});

describe("curve view", () => {
  it("crosses 0.05 between N=21 and N=22 and reaches 0.8 power at N=41", async () => {
    click('[data-analysis="curve"]');
    // the default range 3..41 covers both reference levels
    click("#run-btn");
    await until(() => root.querySelector("#curve-svg") !== null);
    expect(root.querySelector("#ref-alpha")).not.toBeNull();
    expect(root.querySelector("#ref-target")).not.toBeNull();
    const notes = text("#curve-notes");
    expect(notes).toContain("p-value crosses 0.05 between N=21 and N=22");
    expect(notes).toContain("power reaches 0.8 at N=41");
  });

  it("shows (N, t, p, power) when hovering a point", async () => {
    const dot = root.querySelector('circle.p-dot[data-n="22"]') as SVGCircleElement;
    expect(dot).not.toBeNull();
    dot.dispatchEvent(new Event("mouseenter"));
    const readout = text("#curve-readout");
    expect(readout).toMatch(/^N=22: t=/);
    expect(readout).toContain("p=0.04"); // just under the 0.05 line
  });
});

describe("history", () => {
  it("replaying a stored request yields a deep-equal response", async () => {
    const entries = root.querySelectorAll("#history-list li");
    expect(entries.length).toBe(3); // two a-priori runs + the curve
    (entries[0].querySelector("button.replay") as HTMLElement).click();
    await until(() => root.querySelector(".replay-note") !== null);
    expect(text(".replay-note")).toContain("response identical");
    expect(root.querySelectorAll("#history-list li").length).toBe(4);
    expect(text("#out-min-n")).toBe("41");
  });
});
