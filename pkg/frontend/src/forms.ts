// Form state, validation and request building. All inputs are kept as
// strings (exactly what the user typed) and only converted to numbers
// when a request is built, so nothing gets silently reformatted.
//
// Validation mirrors the ranges the service itself enforces; it exists
// to give inline messages before a request is sent, not to replace the
// server-side checks.

import type {
  Analysis,
  AnalyzeRequest,
  Family,
  GroupInput,
  Tails,
} from "./types.js";

export interface GroupFields {
  mean: string;
  spreadKind: "sd" | "se";
  spread: string;
  n: string;
}

export interface FormState {
  family: Family;
  analysis: Analysis;
  alpha: string;
  tails: Tails;
  targetPower: string;
  dropRate: string;
  // paired_t
  meanDiff: string;
  sdDiff: string;
  nPairs: string;
  nMin: string;
  nMax: string;
  // independent_t
  group1: GroupFields;
  group2: GroupFields;
  // oneway_anova
  groups: GroupFields[];
  sdWithin: string;
  // rm_within
  ssEffect: string;
  ssError: string;
  k: string;
  m: string;
  epsilon: string;
  nTotal: string;
}

export function emptyGroup(): GroupFields {
  return { mean: "", spreadKind: "sd", spread: "", n: "" };
}

/** Fresh state with the workbench defaults pre-filled. */
export function defaultState(): FormState {
  return {
    family: "independent_t",
    analysis: "post_hoc",
    alpha: "0.05",
    tails: "two",
    targetPower: "0.8",
    dropRate: "0.10",
    meanDiff: "",
    sdDiff: "",
    nPairs: "",
    nMin: "3",
    nMax: "41",
    group1: emptyGroup(),
    group2: emptyGroup(),
    groups: [emptyGroup(), emptyGroup()],
    sdWithin: "",
    ssEffect: "",
    ssError: "",
    k: "3",
    m: "2",
    epsilon: "1.0",
    nTotal: "",
  };
}

export interface FieldError {
  field: string;
  message: string;
}

function num(s: string): number {
  return Number(s.trim());
}

function checkNumber(errors: FieldError[], field: string, s: string, label: string): number | null {
  if (s.trim() === "") {
    errors.push({ field, message: label + " is required" });
    return null;
  }
  const v = num(s);
  if (!Number.isFinite(v)) {
    errors.push({ field, message: label + " must be a number" });
    return null;
  }
  return v;
}

function checkPositive(errors: FieldError[], field: string, s: string, label: string): void {
  const v = checkNumber(errors, field, s, label);
  if (v !== null && v <= 0) errors.push({ field, message: label + " must be > 0" });
}

function checkInt(errors: FieldError[], field: string, s: string, label: string, min: number): void {
  const v = checkNumber(errors, field, s, label);
  if (v === null) return;
  if (!Number.isInteger(v)) {
    errors.push({ field, message: label + " must be a whole number" });
  } else if (v < min) {
    errors.push({ field, message: label + " must be at least " + min });
  }
}

function checkGroup(errors: FieldError[], prefix: string, g: GroupFields, label: string): void {
  checkNumber(errors, prefix + ".mean", g.mean, label + " mean");
  checkPositive(errors, prefix + ".spread", g.spread, label + " " + g.spreadKind.toUpperCase());
  checkInt(errors, prefix + ".n", g.n, label + " n", 2);
}

/**
 * Validate the fields that matter for the current family + analysis.
 * Returns an empty list when a request may be sent.
 */
export function validate(state: FormState): FieldError[] {
  const errors: FieldError[] = [];

  const alpha = checkNumber(errors, "alpha", state.alpha, "alpha");
  if (alpha !== null && (alpha <= 0 || alpha >= 1)) {
    errors.push({ field: "alpha", message: "alpha must lie strictly between 0 and 1" });
  }

  if (state.analysis === "a_priori") {
    const power = checkNumber(errors, "targetPower", state.targetPower, "target power");
    if (power !== null) {
      if (power <= 0 || power >= 1) {
        errors.push({ field: "targetPower", message: "target power must lie strictly between 0 and 1" });
      } else if (alpha !== null && power <= alpha) {
        errors.push({ field: "targetPower", message: "target power must exceed alpha" });
      }
    }
    const drop = checkNumber(errors, "dropRate", state.dropRate, "drop rate");
    if (drop !== null && (drop < 0 || drop >= 1)) {
      errors.push({ field: "dropRate", message: "drop rate must lie in [0, 1)" });
    }
  }

  switch (state.family) {
    case "independent_t":
      checkGroup(errors, "group1", state.group1, "group 1");
      checkGroup(errors, "group2", state.group2, "group 2");
      break;

    case "paired_t":
      checkNumber(errors, "meanDiff", state.meanDiff, "mean difference");
      checkPositive(errors, "sdDiff", state.sdDiff, "SD of differences");
      if (state.analysis === "post_hoc") {
        checkInt(errors, "nPairs", state.nPairs, "pairs", 2);
      } else if (state.analysis === "curve") {
        checkInt(errors, "nMin", state.nMin, "N from", 2);
        checkInt(errors, "nMax", state.nMax, "N to", 2);
        const lo = num(state.nMin);
        const hi = num(state.nMax);
        if (Number.isInteger(lo) && Number.isInteger(hi) && lo > hi) {
          errors.push({ field: "nMax", message: "N range must not be empty" });
        }
      }
      break;

    case "oneway_anova":
      if (state.groups.length < 2) {
        errors.push({ field: "groups", message: "at least 2 groups are needed" });
      }
      state.groups.forEach((g, i) => checkGroup(errors, "groups." + i, g, "group " + (i + 1)));
      if (state.sdWithin.trim() !== "") {
        checkPositive(errors, "sdWithin", state.sdWithin, "within-group SD");
      }
      break;

    case "rm_within": {
      const ss = checkNumber(errors, "ssEffect", state.ssEffect, "effect SS");
      if (ss !== null && ss < 0) {
        errors.push({ field: "ssEffect", message: "effect SS must be >= 0" });
      }
      checkPositive(errors, "ssError", state.ssError, "error SS");
      checkInt(errors, "k", state.k, "groups k", 2);
      checkInt(errors, "m", state.m, "measurements m", 2);
      const eps = checkNumber(errors, "epsilon", state.epsilon, "epsilon");
      const m = num(state.m);
      if (eps !== null && Number.isInteger(m) && m >= 2) {
        const lower = 1 / (m - 1);
        if (eps < lower || eps > 1) {
          errors.push({
            field: "epsilon",
            message: "epsilon must lie in [" + formatLower(lower) + ", 1] for m=" + m,
          });
        }
      }
      if (state.analysis === "post_hoc") {
        checkInt(errors, "nTotal", state.nTotal, "total N", 2);
      }
      break;
    }
  }

  return errors;
}

function formatLower(lower: number): string {
  return lower === 1 ? "1" : String(Math.round(lower * 10000) / 10000);
}

function groupPayload(g: GroupFields): GroupInput {
  const payload: GroupInput = { mean: num(g.mean), n: num(g.n) };
  if (g.spreadKind === "se") payload.se = num(g.spread);
  else payload.sd = num(g.spread);
  return payload;
}

/**
 * Assemble the request the service expects. Assumes validate() returned
 * no errors; fields irrelevant to the current mode are simply omitted.
 */
export function buildRequest(state: FormState): AnalyzeRequest {
  const req: AnalyzeRequest = {
    analysis: state.analysis,
    family: state.family,
    alpha: num(state.alpha),
    tails: state.tails,
  };

  if (state.analysis === "a_priori") {
    req.target_power = num(state.targetPower);
    req.drop_rate = num(state.dropRate);
  }

  switch (state.family) {
    case "independent_t":
      req.group1 = groupPayload(state.group1);
      req.group2 = groupPayload(state.group2);
      break;

    case "paired_t":
      req.mean_diff = num(state.meanDiff);
      req.sd_diff = num(state.sdDiff);
      if (state.analysis === "post_hoc") {
        req.n = num(state.nPairs);
      } else if (state.analysis === "curve") {
        req.n_min = num(state.nMin);
        req.n_max = num(state.nMax);
      }
      break;

    case "oneway_anova":
      req.groups = state.groups.map(groupPayload);
      if (state.sdWithin.trim() !== "") req.sd_within = num(state.sdWithin);
      break;

    case "rm_within":
      req.ss_effect = num(state.ssEffect);
      req.ss_error = num(state.ssError);
      req.k = num(state.k);
      req.m = num(state.m);
      req.epsilon = num(state.epsilon);
      if (state.analysis === "post_hoc") req.n_total = num(state.nTotal);
      break;
  }

  return req;
}
