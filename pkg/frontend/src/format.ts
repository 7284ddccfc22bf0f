// Display formatting. Everything here is presentation only: values come
// out of service responses and are rounded for the screen, never
// recomputed. The CSV export keeps full precision.

import type { AnalyzeResponse, CurveResult, PowerResult, SizeResult } from "./types.js";
import { isCurveResult, isPowerResult, isSizeResult } from "./types.js";

/** Probabilities and effect sizes the way the tables print them. */
export function fmt4(x: number): string {
  return x.toFixed(4);
}

/** Degrees of freedom: trim "26.0" to "26", keep fractional dfs. */
export function fmtDf(x: number | null): string {
  if (x === null) return "—";
  return Number.isInteger(x) ? String(x) : String(Math.round(x * 10000) / 10000);
}

function csvCell(value: unknown): string {
  const s = String(value);
  return /[",\n]/.test(s) ? '"' + s.replace(/"/g, '""') + '"' : s;
}

function csvLine(cells: unknown[]): string {
  return cells.map(csvCell).join(",");
}

/**
 * Flatten one response to CSV for the clipboard. Curve responses use
 * the same column layout the service's own curve listing uses; the
 * scalar analyses get one row of named columns.
 */
export function responseToCsv(resp: AnalyzeResponse): string {
  const lines: string[] = [];
  const result = resp.result;

  if (isCurveResult(result)) {
    lines.push("n,t_stat,p_value,power");
    for (const p of (result as CurveResult).points) {
      lines.push(csvLine([p.n, p.t_stat, p.p_value, p.power]));
    }
  } else if (isSizeResult(result)) {
    const r = result as SizeResult;
    lines.push("family,analysis,effect_kind,effect_value,min_n,granularity,achieved_power,drop_rate,final_n");
    lines.push(csvLine([
      resp.request.family, resp.request.analysis,
      resp.effect.kind, resp.effect.value,
      r.min_n, r.granularity, r.achieved_power, r.drop_rate, r.final_n,
    ]));
  } else if (isPowerResult(result)) {
    const r = result as PowerResult;
    lines.push("family,analysis,effect_kind,effect_value,power,noncentrality,df1,df2,critical_value");
    lines.push(csvLine([
      resp.request.family, resp.request.analysis,
      resp.effect.kind, resp.effect.value,
      r.power, r.noncentrality, r.df1, r.df2 ?? "", r.critical_value,
    ]));
  }

  return lines.join("\n") + "\n";
}
