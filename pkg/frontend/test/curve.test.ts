import { describe, expect, it } from "vitest";
import {
  crossingLabel,
  DEFAULT_BOX,
  firstWhere,
  reachLabel,
  seriesPath,
  xFor,
  yFor,
} from "../src/curve.js";
import type { CurvePoint } from "../src/types.js";

const pt = (n: number, p_value: number, power: number): CurvePoint => ({
  n,
  t_stat: 0,
  p_value,
  power,
});

describe("plot geometry", () => {
  it("pins the n range to the plot edges", () => {
    const box = DEFAULT_BOX;
    expect(xFor(3, 3, 41, box)).toBe(box.padLeft);
    expect(xFor(41, 3, 41, box)).toBe(box.width - box.padRight);
  });

  it("centres a single-point range", () => {
    const box = DEFAULT_BOX;
    const x = xFor(27, 27, 27, box);
    expect(x).toBeGreaterThan(box.padLeft);
    expect(x).toBeLessThan(box.width - box.padRight);
  });

  it("maps probability 1 to the top and 0 to the bottom", () => {
    const box = DEFAULT_BOX;
    expect(yFor(1, box)).toBe(box.padTop);
    expect(yFor(0, box)).toBe(box.height - box.padBottom);
    expect(yFor(0.8, box)).toBeLessThan(yFor(0.05, box));
  });

  it("builds one M and n-1 L segments", () => {
    const pts = [pt(3, 0.9, 0.1), pt(4, 0.8, 0.2), pt(5, 0.7, 0.3)];
    const path = seriesPath(pts, (p) => p.p_value, 3, 5, DEFAULT_BOX);
    expect(path.startsWith("M")).toBe(true);
    expect(path.match(/L/g)).toHaveLength(2);
  });
});

describe("crossing detection", () => {
  const pts = [
    pt(20, 0.06, 0.48),
    pt(21, 0.051, 0.5),
    pt(22, 0.0455, 0.53),
    pt(40, 0.001, 0.79),
    pt(41, 0.0005, 0.8018),
  ];

  it("finds where the p series drops under the level", () => {
    const c = firstWhere(pts, (p) => p.p_value < 0.05);
    expect(c?.prev?.n).toBe(21);
    expect(c?.hit.n).toBe(22);
    expect(crossingLabel("p-value", "0.05", c)).toBe(
      "p-value crosses 0.05 between N=21 and N=22"
    );
  });

  it("finds where the power series reaches the target", () => {
    const c = firstWhere(pts, (p) => p.power >= 0.8);
    expect(c?.hit.n).toBe(41);
    expect(reachLabel("power", "0.8", c)).toBe("power reaches 0.8 at N=41");
  });

  it("reports a series that never crosses", () => {
    const c = firstWhere(pts, (p) => p.power >= 0.99);
    expect(c).toBeNull();
    expect(reachLabel("power", "0.99", c)).toContain("does not reach");
    expect(crossingLabel("p-value", "0.0001", null)).toContain("does not cross");
  });

  it("flags a range that starts past the level", () => {
    const c = firstWhere(pts, (p) => p.p_value < 0.1);
    expect(c?.prev).toBeNull();
    expect(crossingLabel("p-value", "0.1", c)).toBe("p-value is already past 0.1 at N=20");
  });
});
