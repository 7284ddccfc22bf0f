// Wire types for the power service. These mirror the JSON that
// /api/analyze accepts and returns. The UI never computes statistics
// itself, so every numeric field here is either user input on its way
// to the service or a verbatim echo coming back.

export type Family = "independent_t" | "paired_t" | "oneway_anova" | "rm_within";
export type Analysis = "post_hoc" | "a_priori" | "curve";
export type Tails = "one" | "two";

/** One group's summary statistics. Exactly one of sd / se is sent. */
export interface GroupInput {
  mean: number;
  sd?: number;
  se?: number;
  n: number;
}

export interface AnalyzeRequest {
  analysis: Analysis;
  family: Family;
  alpha: number;
  tails?: Tails;
  // a-priori knobs
  target_power?: number;
  drop_rate?: number;
  // independent_t
  group1?: GroupInput;
  group2?: GroupInput;
  // paired_t (post-hoc needs n; curve needs n_min / n_max)
  mean_diff?: number;
  sd_diff?: number;
  n?: number;
  n_min?: number;
  n_max?: number;
  // oneway_anova
  groups?: GroupInput[];
  sd_within?: number;
  // rm_within
  ss_effect?: number;
  ss_error?: number;
  k?: number;
  m?: number;
  epsilon?: number;
  n_total?: number;
}

export interface EffectBlock {
  kind: string;
  value: number;
  derivation: string;
  warnings: string[];
}

export interface PowerResult {
  power: number;
  noncentrality: number;
  df1: number;
  df2: number | null;
  critical_value: number;
}

export interface SizeResult {
  min_n: number;
  granularity: string;
  achieved_power: number;
  drop_rate: number;
  final_n: number;
}

export interface CurvePoint {
  n: number;
  t_stat: number;
  p_value: number;
  power: number;
}

export interface CurveResult {
  points: CurvePoint[];
}

export interface AnalyzeResponse {
  engine_version: string;
  request: AnalyzeRequest;
  effect: EffectBlock;
  result: PowerResult | SizeResult | CurveResult;
  warnings: string[];
}

/** Error body for 400/404/422 responses. */
export interface ServiceError {
  error: string;
  missing?: string[];
  engine_version?: string;
}

export function isPowerResult(r: AnalyzeResponse["result"]): r is PowerResult {
  return "power" in r && "critical_value" in r;
}

export function isSizeResult(r: AnalyzeResponse["result"]): r is SizeResult {
  return "min_n" in r;
}

export function isCurveResult(r: AnalyzeResponse["result"]): r is CurveResult {
  return "points" in r;
}
