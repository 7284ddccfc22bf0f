// UI wiring: family tabs, forms, result cards, history and the curve
// view. All statistics come from the service; this file only moves
// strings between inputs, requests and the DOM.

import { ApiClient, ApiError, isAbortError } from "./client.js";
import {
  crossingLabel,
  DEFAULT_BOX,
  firstWhere,
  reachLabel,
  seriesPath,
  xFor,
  yFor,
} from "./curve.js";
import type { FieldError, FormState, GroupFields } from "./forms.js";
import { buildRequest, defaultState, emptyGroup, validate } from "./forms.js";
import { fmt4, fmtDf, responseToCsv } from "./format.js";
import { deepEqual, History } from "./history.js";
import type {
  Analysis,
  AnalyzeResponse,
  CurveResult,
  Family,
  PowerResult,
  SizeResult,
} from "./types.js";
import { isCurveResult, isPowerResult, isSizeResult } from "./types.js";

const FAMILY_LABELS: Record<Family, string> = {
  independent_t: "Independent t",
  paired_t: "Paired t",
  oneway_anova: "One-way ANOVA",
  rm_within: "RM within",
};

const ANALYSIS_LABELS: Record<Analysis, string> = {
  post_hoc: "Post hoc power",
  a_priori: "A priori N",
  curve: "Curve",
};

const RUN_LABELS: Record<Analysis, string> = {
  post_hoc: "Compute power",
  a_priori: "Find sample size",
  curve: "Draw curve",
};

const GRANULARITY_LABELS: Record<string, string> = {
  per_group: "per group",
  pairs: "pairs",
  total: "total",
};

export const APP_HTML = `
  <header class="top">
    <h1>Power Workbench</h1>
    <span id="engine-version" class="muted"></span>
  </header>
  <nav id="family-tabs" class="tabs"></nav>
  <nav id="mode-tabs" class="tabs modes"></nav>
  <main class="columns">
    <section class="panel">
      <form id="form" novalidate></form>
      <ul id="form-errors" class="errors hidden"></ul>
      <div class="actions">
        <button type="button" id="run-btn" class="primary"></button>
        <span id="run-status" class="muted"></span>
      </div>
    </section>
    <section class="panel">
      <div id="result-banner" class="banner hidden"></div>
      <div id="result-card"></div>
      <div id="curve-panel"></div>
      <div class="actions">
        <button type="button" id="copy-csv" class="hidden">Copy as CSV</button>
        <span id="copy-status" class="muted"></span>
      </div>
    </section>
  </main>
  <section class="panel">
    <h2>History</h2>
    <p class="muted">Every request/response pair of this session, oldest first. Replay re-sends the stored request.</p>
    <ol id="history-list"></ol>
  </section>
`;

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface App {
  state: FormState;
  history: History;
  client: ApiClient;
  root: HTMLElement;
}

export function initApp(root: HTMLElement, opts: { baseUrl?: string } = {}): App {
  root.innerHTML = APP_HTML;

  const state = defaultState();
  const history = new History();
  const client = new ApiClient(opts.baseUrl ?? "");
  const doc = root.ownerDocument;
  let lastResponse: AnalyzeResponse | null = null;
  let submitSeq = 0;

  const $ = <T extends HTMLElement = HTMLElement>(id: string): T => {
    const node = root.querySelector("#" + id);
    if (!node) throw new Error("missing element #" + id);
    return node as T;
  };

  /* ------------------------------ tabs ------------------------------ */

  function renderFamilyTabs(): void {
    const nav = $("family-tabs");
    nav.innerHTML = (Object.keys(FAMILY_LABELS) as Family[])
      .map(
        (fam) =>
          `<button type="button" class="tab${fam === state.family ? " active" : ""}"
             data-family="${fam}">${FAMILY_LABELS[fam]}</button>`
      )
      .join("");
    nav.querySelectorAll("button").forEach((btn) => {
      btn.addEventListener("click", () => {
        state.family = btn.dataset.family as Family;
        if (state.family !== "paired_t" && state.analysis === "curve") {
          state.analysis = "post_hoc";
        }
        renderAll();
      });
    });
  }

  function renderModeTabs(): void {
    const nav = $("mode-tabs");
    nav.innerHTML = (Object.keys(ANALYSIS_LABELS) as Analysis[])
      .map((mode) => {
        const off = mode === "curve" && state.family !== "paired_t";
        return `<button type="button" class="tab${mode === state.analysis ? " active" : ""}"
            data-analysis="${mode}" ${off ? 'disabled title="Curves are drawn for the paired t family"' : ""}>
            ${ANALYSIS_LABELS[mode]}</button>`;
      })
      .join("");
    nav.querySelectorAll("button").forEach((btn) => {
      btn.addEventListener("click", () => {
        if (btn.disabled) return;
        state.analysis = btn.dataset.analysis as Analysis;
        renderAll();
      });
    });
  }

  /* ------------------------------ form ------------------------------ */

  function field(fieldKey: string, label: string, value: string, attrs = ""): string {
    return `<label class="field">
        <span>${label}</span>
        <input data-field="${fieldKey}" value="${esc(value)}" ${attrs}
               autocomplete="off" spellcheck="false">
      </label>`;
  }

  function groupFields(prefix: string, label: string, g: GroupFields): string {
    return `<fieldset class="group-row" data-group="${prefix}">
        <legend>${label}</legend>
        ${field(prefix + ".mean", "mean", g.mean)}
        <label class="field">
          <span><select data-field="${prefix}.spreadKind">
            <option value="sd"${g.spreadKind === "sd" ? " selected" : ""}>SD</option>
            <option value="se"${g.spreadKind === "se" ? " selected" : ""}>SE</option>
          </select></span>
          <input data-field="${prefix}.spread" value="${esc(g.spread)}" autocomplete="off" spellcheck="false">
        </label>
        ${field(prefix + ".n", "n", g.n)}
      </fieldset>`;
  }

  function sharedFields(): string {
    let html = `<div class="row">
        ${field("alpha", "alpha", state.alpha)}
        <label class="field"><span>tails</span>
          <select data-field="tails">
            <option value="two"${state.tails === "two" ? " selected" : ""}>two</option>
            <option value="one"${state.tails === "one" ? " selected" : ""}>one</option>
          </select>
        </label>`;
    if (state.analysis === "a_priori") {
      html += field("targetPower", "target power", state.targetPower);
      html += field("dropRate", "drop rate", state.dropRate);
    }
    return html + "</div>";
  }

  function familyFields(): string {
    switch (state.family) {
      case "independent_t":
        return (
          groupFields("group1", "Group 1", state.group1) +
          groupFields("group2", "Group 2", state.group2)
        );
      case "paired_t": {
        let html = `<div class="row">
            ${field("meanDiff", "mean difference", state.meanDiff)}
            ${field("sdDiff", "SD of differences", state.sdDiff)}`;
        if (state.analysis === "post_hoc") {
          html += field("nPairs", "pairs", state.nPairs);
        } else if (state.analysis === "curve") {
          html += field("nMin", "N from", state.nMin) + field("nMax", "N to", state.nMax);
        }
        return html + "</div>";
      }
      case "oneway_anova": {
        const rows = state.groups
          .map((g, i) => {
            const remove =
              state.groups.length > 2
                ? `<button type="button" class="remove-group" data-idx="${i}" title="remove group">×</button>`
                : "";
            return groupFields("groups." + i, "Group " + (i + 1) + remove, g);
          })
          .join("");
        return `${rows}
          <div class="row">
            <button type="button" id="add-group">Add group</button>
            ${field("sdWithin", "within-group SD (optional)", state.sdWithin)}
          </div>`;
      }
      case "rm_within": {
        let html = `<div class="row">
            ${field("ssEffect", "effect SS", state.ssEffect)}
            ${field("ssError", "error SS", state.ssError)}
          </div><div class="row">
            ${field("k", "groups k", state.k)}
            ${field("m", "measurements m", state.m)}
            ${field("epsilon", "epsilon", state.epsilon)}`;
        if (state.analysis === "post_hoc") {
          html += field("nTotal", "total N", state.nTotal);
        }
        return html + "</div>";
      }
    }
  }

  function readField(key: string, value: string): void {
    const parts = key.split(".");
    if (parts.length === 1) {
      (state as unknown as Record<string, string>)[key] = value;
      return;
    }
    let g: GroupFields;
    if (parts[0] === "groups") {
      g = state.groups[Number(parts[1])];
      parts.splice(0, 2);
    } else {
      g = state[parts[0] as "group1" | "group2"];
      parts.splice(0, 1);
    }
    if (parts[0] === "spreadKind") g.spreadKind = value as "sd" | "se";
    else (g as unknown as Record<string, string>)[parts[0]] = value;
  }

  function renderForm(): void {
    const form = $("form");
    form.innerHTML = sharedFields() + familyFields();

    form.querySelectorAll<HTMLInputElement | HTMLSelectElement>("[data-field]").forEach((input) => {
      // typing only updates state; requests go out on the button press
      input.addEventListener("input", () => {
        readField(input.dataset.field as string, input.value);
        input.classList.remove("invalid");
      });
    });

    const add = form.querySelector("#add-group");
    if (add) {
      add.addEventListener("click", () => {
        state.groups.push(emptyGroup());
        renderForm();
      });
    }
    form.querySelectorAll<HTMLButtonElement>(".remove-group").forEach((btn) => {
      btn.addEventListener("click", () => {
        state.groups.splice(Number(btn.dataset.idx), 1);
        renderForm();
      });
    });

    $("run-btn").textContent = RUN_LABELS[state.analysis];
  }

  function showFieldErrors(errors: FieldError[]): void {
    const list = $("form-errors");
    if (errors.length === 0) {
      list.classList.add("hidden");
      list.innerHTML = "";
      return;
    }
    list.classList.remove("hidden");
    list.innerHTML = errors.map((e) => `<li>${esc(e.message)}</li>`).join("");
    for (const e of errors) {
      const input = root.querySelector(`[data-field="${e.field}"]`);
      if (input) input.classList.add("invalid");
    }
  }

  /* ----------------------------- results ----------------------------- */

  function banner(text: string | null): void {
    const node = $("result-banner");
    if (text === null) {
      node.classList.add("hidden");
      node.textContent = "";
    } else {
      node.classList.remove("hidden");
      node.textContent = text;
    }
  }

  function effectLine(resp: AnalyzeResponse): string {
    return `<div class="kv"><span>effect</span>
        <strong>${resp.effect.kind} = ${fmt4(resp.effect.value)}</strong></div>
      <div class="muted small">${esc(resp.effect.derivation)}</div>`;
  }

  function warningsBlock(resp: AnalyzeResponse): string {
    if (resp.warnings.length === 0) return "";
    return `<ul class="warnings">${resp.warnings
      .map((w) => `<li>${esc(w)}</li>`)
      .join("")}</ul>`;
  }

  function renderPowerCard(resp: AnalyzeResponse, r: PowerResult): string {
    return `<h2>Power</h2>
      ${effectLine(resp)}
      <div class="kv big"><span>power</span><strong id="out-power">${fmt4(r.power)}</strong></div>
      <div class="kv"><span>noncentrality</span><strong>${fmt4(r.noncentrality)}</strong></div>
      <div class="kv"><span>df</span><strong>${fmtDf(r.df1)}${
        r.df2 === null ? "" : ", " + fmtDf(r.df2)
      }</strong></div>
      <div class="kv"><span>critical value</span><strong>${fmt4(r.critical_value)}</strong></div>
      ${warningsBlock(resp)}`;
  }

  function renderSizeCard(resp: AnalyzeResponse, r: SizeResult): string {
    const unit = GRANULARITY_LABELS[r.granularity] ?? r.granularity;
    return `<h2>Sample size</h2>
      ${effectLine(resp)}
      <div class="kv big"><span>min N</span><strong id="out-min-n">${r.min_n}</strong>
        <span class="muted">${unit}</span></div>
      <div class="kv"><span>achieved power</span><strong>${fmt4(r.achieved_power)}</strong></div>
      <div class="kv"><span>drop rate</span><strong>${r.drop_rate}</strong></div>
      <div class="kv big"><span>final N</span><strong id="out-final-n">${r.final_n}</strong>
        <span class="muted">${unit}, after drops</span></div>
      ${warningsBlock(resp)}`;
  }

  /* ------------------------------ curve ------------------------------ */

  function renderCurve(resp: AnalyzeResponse, r: CurveResult): void {
    const panel = $("curve-panel");
    const pts = r.points;
    if (pts.length === 0) {
      panel.innerHTML = '<p class="muted">no points in range</p>';
      return;
    }
    const box = DEFAULT_BOX;
    const nMin = pts[0].n;
    const nMax = pts[pts.length - 1].n;

    const pPath = seriesPath(pts, (p) => p.p_value, nMin, nMax, box);
    const powerPath = seriesPath(pts, (p) => p.power, nMin, nMax, box);

    const yAlpha = yFor(0.05, box).toFixed(1);
    const yTarget = yFor(0.8, box).toFixed(1);
    const x0 = box.padLeft;
    const x1 = box.width - box.padRight;

    const ticks: string[] = [];
    for (const v of [0, 0.25, 0.5, 0.75, 1]) {
      const y = yFor(v, box).toFixed(1);
      ticks.push(`<line x1="${x0 - 4}" y1="${y}" x2="${x0}" y2="${y}" class="axis"/>
        <text x="${x0 - 7}" y="${y}" class="tick" text-anchor="end" dominant-baseline="middle">${v}</text>`);
    }
    const xtickCount = Math.min(8, nMax - nMin + 1);
    for (let i = 0; i < xtickCount; i++) {
      const n = xtickCount === 1 ? nMin : Math.round(nMin + (i * (nMax - nMin)) / (xtickCount - 1));
      const x = xFor(n, nMin, nMax, box).toFixed(1);
      const yb = (box.height - box.padBottom).toFixed(1);
      ticks.push(`<line x1="${x}" y1="${yb}" x2="${x}" y2="${Number(yb) + 4}" class="axis"/>
        <text x="${x}" y="${Number(yb) + 16}" class="tick" text-anchor="middle">${n}</text>`);
    }

    const dots = pts
      .map((p) => {
        const x = xFor(p.n, nMin, nMax, box).toFixed(1);
        return `<circle class="dot p-dot" cx="${x}" cy="${yFor(p.p_value, box).toFixed(1)}" r="4"
            data-n="${p.n}" data-t="${p.t_stat}" data-p="${p.p_value}" data-power="${p.power}">
            <title>N=${p.n}: t=${fmt4(p.t_stat)}, p=${fmt4(p.p_value)}, power=${fmt4(p.power)}</title>
          </circle>
          <circle class="dot power-dot" cx="${x}" cy="${yFor(p.power, box).toFixed(1)}" r="4"
            data-n="${p.n}" data-t="${p.t_stat}" data-p="${p.p_value}" data-power="${p.power}">
            <title>N=${p.n}: t=${fmt4(p.t_stat)}, p=${fmt4(p.p_value)}, power=${fmt4(p.power)}</title>
          </circle>`;
      })
      .join("");

    const pCross = firstWhere(pts, (p) => p.p_value < 0.05);
    const powerCross = firstWhere(pts, (p) => p.power >= 0.8);

    panel.innerHTML = `
      <h2>p-value and power vs sample size</h2>
      <svg viewBox="0 0 ${box.width} ${box.height}" role="img" id="curve-svg">
        <line x1="${x0}" y1="${box.padTop}" x2="${x0}" y2="${box.height - box.padBottom}" class="axis"/>
        <line x1="${x0}" y1="${box.height - box.padBottom}" x2="${x1}" y2="${box.height - box.padBottom}" class="axis"/>
        ${ticks.join("")}
        <line x1="${x0}" y1="${yAlpha}" x2="${x1}" y2="${yAlpha}" class="ref" id="ref-alpha"/>
        <text x="${x1}" y="${Number(yAlpha) - 4}" class="ref-label" text-anchor="end">0.05</text>
        <line x1="${x0}" y1="${yTarget}" x2="${x1}" y2="${yTarget}" class="ref" id="ref-target"/>
        <text x="${x1}" y="${Number(yTarget) - 4}" class="ref-label" text-anchor="end">0.8</text>
        <path d="${pPath}" class="series p-series"/>
        <path d="${powerPath}" class="series power-series"/>
        ${dots}
      </svg>
      <div class="legend">
        <span class="key p-key">p-value</span>
        <span class="key power-key">power</span>
      </div>
      <div id="curve-readout" class="muted">hover a point for (N, t, p, power)</div>
      <div id="curve-notes">
        <div>${crossingLabel("p-value", "0.05", pCross)}</div>
        <div>${reachLabel("power", "0.8", powerCross)}</div>
      </div>`;

    const readout = $("curve-readout");
    panel.querySelectorAll<SVGCircleElement>("circle.dot").forEach((dot) => {
      dot.addEventListener("mouseenter", () => {
        const num = (name: string) => Number(dot.getAttribute("data-" + name));
        readout.textContent =
          `N=${dot.getAttribute("data-n")}: t=${fmt4(num("t"))}, ` +
          `p=${fmt4(num("p"))}, power=${fmt4(num("power"))}`;
      });
    });
  }

  /* ---------------------------- submission ---------------------------- */

  function renderResponse(resp: AnalyzeResponse, note = ""): void {
    lastResponse = resp;
    banner(null);
    const card = $("result-card");
    const result = resp.result;
    if (isCurveResult(result)) {
      card.innerHTML = note;
      renderCurve(resp, result);
    } else if (isSizeResult(result)) {
      card.innerHTML = note + renderSizeCard(resp, result);
      $("curve-panel").innerHTML = "";
    } else if (isPowerResult(result)) {
      card.innerHTML = note + renderPowerCard(resp, result);
      $("curve-panel").innerHTML = "";
    }
    $("copy-csv").classList.remove("hidden");
    $("copy-status").textContent = "";
  }

  function describe(resp: AnalyzeResponse): string {
    const req = resp.request;
    const eff = `${resp.effect.kind}=${fmt4(resp.effect.value)}`;
    const result = resp.result;
    if (isCurveResult(result)) {
      return `${FAMILY_LABELS[req.family]} curve, ${result.points.length} points (${eff})`;
    }
    if (isSizeResult(result)) {
      return `${FAMILY_LABELS[req.family]} a priori (${eff}): min N ${result.min_n}, final N ${result.final_n}`;
    }
    const r = result as PowerResult;
    return `${FAMILY_LABELS[req.family]} post hoc (${eff}): power ${fmt4(r.power)}`;
  }

  function renderHistory(): void {
    const list = $("history-list");
    if (history.length === 0) {
      list.innerHTML = '<li class="muted">nothing yet</li>';
      return;
    }
    list.innerHTML = history
      .list()
      .map(
        (e) => `<li>
          <span>${esc(describe(e.response))}</span>
          <button type="button" class="replay" data-id="${e.id}">Replay</button>
        </li>`
      )
      .join("");
    list.querySelectorAll<HTMLButtonElement>("button.replay").forEach((btn) => {
      btn.addEventListener("click", () => void replay(Number(btn.dataset.id)));
    });
  }

  function failureText(err: unknown): string {
    if (err instanceof ApiError) return err.message;
    return "service unreachable — is it still running?";
  }

  async function submit(): Promise<void> {
    const errors = validate(state);
    showFieldErrors(errors);
    if (errors.length > 0) return;

    const req = buildRequest(state);
    const seq = ++submitSeq;
    $("run-status").textContent = "running…";
    try {
      const resp = await client.analyze(req);
      if (seq !== submitSeq) return; // a newer submission took over
      $("run-status").textContent = "";
      renderResponse(resp);
      history.add(req, resp);
      renderHistory();
    } catch (err) {
      if (isAbortError(err)) return;
      if (seq !== submitSeq) return;
      $("run-status").textContent = "";
      if (err instanceof ApiError && err.missing.length > 0) {
        showFieldErrors(
          err.missing.map((name) => ({ field: name, message: "service: missing " + name }))
        );
      }
      banner(failureText(err));
    }
  }

  async function replay(id: number): Promise<void> {
    const entry = history.get(id);
    if (!entry) return;
    const seq = ++submitSeq;
    $("run-status").textContent = "replaying…";
    try {
      const resp = await client.analyze(entry.request);
      if (seq !== submitSeq) return;
      $("run-status").textContent = "";
      const same = deepEqual(resp, entry.response);
      const note = same
        ? `<div class="replay-note ok">replay of #${id}: response identical</div>`
        : `<div class="replay-note differs">replay of #${id}: response differs from the stored one</div>`;
      renderResponse(resp, note);
      history.add(entry.request, resp);
      renderHistory();
    } catch (err) {
      if (isAbortError(err) || seq !== submitSeq) return;
      $("run-status").textContent = "";
      banner(failureText(err));
    }
  }

  /* ------------------------------ export ------------------------------ */

  async function copyCsv(): Promise<void> {
    if (!lastResponse) return;
    const csv = responseToCsv(lastResponse);
    const status = $("copy-status");
    const clipboard = doc.defaultView?.navigator?.clipboard;
    if (clipboard && clipboard.writeText) {
      try {
        await clipboard.writeText(csv);
        status.textContent = "copied";
        return;
      } catch {
        // fall through to the textarea path
      }
    }
    if (typeof doc.execCommand !== "function") {
      status.textContent = "copy not supported here";
      return;
    }
    const ta = doc.createElement("textarea");
    ta.value = csv;
    doc.body.appendChild(ta);
    ta.select();
    try {
      doc.execCommand("copy");
      status.textContent = "copied";
    } catch {
      status.textContent = "copy failed — select the card text instead";
    } finally {
      ta.remove();
    }
  }

  /* ------------------------------- init ------------------------------- */

  function renderAll(): void {
    renderFamilyTabs();
    renderModeTabs();
    renderForm();
    showFieldErrors([]);
  }

  renderAll();
  renderHistory();
  $("run-btn").addEventListener("click", () => void submit());
  $("copy-csv").addEventListener("click", () => void copyCsv());

  client
    .health()
    .then((h) => {
      $("engine-version").textContent = "engine v" + h.engine_version;
    })
    .catch(() => {
      $("engine-version").textContent = "service unreachable";
    });

  return { state, history, client, root };
}
