// Curve view geometry: map service points onto SVG coordinates and
// locate where a series crosses a reference level. Pure layout math —
// the p-values and powers themselves are plotted exactly as received.

import type { CurvePoint } from "./types.js";

export interface PlotBox {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
}

export const DEFAULT_BOX: PlotBox = {
  width: 720,
  height: 300,
  padLeft: 46,
  padRight: 16,
  padTop: 12,
  padBottom: 30,
};

/** x pixel for a sample size, with n spanning [nMin, nMax]. */
export function xFor(n: number, nMin: number, nMax: number, box: PlotBox): number {
  const usable = box.width - box.padLeft - box.padRight;
  if (nMax === nMin) return box.padLeft + usable / 2;
  return box.padLeft + ((n - nMin) / (nMax - nMin)) * usable;
}

/** y pixel for a probability in [0, 1] (y axis grows downward). */
export function yFor(v: number, box: PlotBox): number {
  const usable = box.height - box.padTop - box.padBottom;
  return box.padTop + (1 - v) * usable;
}

/** SVG path ("M x y L x y ...") through the points of one series. */
export function seriesPath(
  points: CurvePoint[],
  pick: (p: CurvePoint) => number,
  nMin: number,
  nMax: number,
  box: PlotBox
): string {
  return points
    .map((p, i) => {
      const x = xFor(p.n, nMin, nMax, box).toFixed(1);
      const y = yFor(pick(p), box).toFixed(1);
      return (i === 0 ? "M" : "L") + x + " " + y;
    })
    .join(" ");
}

export interface Crossing {
  /** Last point still on the original side, null if the first point already qualifies. */
  prev: CurvePoint | null;
  /** First point satisfying the predicate. */
  hit: CurvePoint;
}

/**
 * First point where `test` holds, together with the point just before
 * it — e.g. the p-series dropping under 0.05 between two sample sizes.
 */
export function firstWhere(
  points: CurvePoint[],
  test: (p: CurvePoint) => boolean
): Crossing | null {
  for (let i = 0; i < points.length; i++) {
    if (test(points[i])) {
      return { prev: i > 0 ? points[i - 1] : null, hit: points[i] };
    }
  }
  return null;
}

/** Human-readable note for a crossing, e.g. "crosses 0.05 between N=21 and N=22". */
export function crossingLabel(what: string, level: string, c: Crossing | null): string {
  if (c === null) return what + " does not cross " + level + " in this range";
  if (c.prev === null) return what + " is already past " + level + " at N=" + c.hit.n;
  return what + " crosses " + level + " between N=" + c.prev.n + " and N=" + c.hit.n;
}

/** Threshold wording for a rising series, e.g. "power reaches 0.8 at N=41". */
export function reachLabel(what: string, level: string, c: Crossing | null): string {
  if (c === null) return what + " does not reach " + level + " in this range";
  return what + " reaches " + level + " at N=" + c.hit.n;
}
