import { describe, expect, it } from "vitest";

import { buildScreeSvg } from "../src/scree.js";
import { SIGMAS } from "./mockApi.js";

function countMatches(haystack: string, pattern: RegExp): number {
  return (haystack.match(pattern) ?? []).length;
}

describe("scree chart", () => {
  it("renders one point per singular value", () => {
    const svg = buildScreeSvg({ values: SIGMAS, elbow: 1, workingK: null });
    expect(countMatches(svg, /class="scree-point/g)).toBe(10);
  });

  it("marks the server-reported elbow", () => {
    const svg = buildScreeSvg({ values: SIGMAS, elbow: 1, workingK: null });
    expect(countMatches(svg, /elbow-marker/g)).toBe(1);
    expect(svg).toContain('class="scree-point elbow-marker" data-index="1"');
    expect(svg).toContain("elbow-label");
  });

  it("renders without a marker when the server reports none", () => {
    const svg = buildScreeSvg({ values: [3.2, 1.1], elbow: null, workingK: null });
    expect(countMatches(svg, /class="scree-point/g)).toBe(2);
    expect(svg).not.toContain("elbow-marker");
  });

  it("keeps descending values descending on screen", () => {
    const svg = buildScreeSvg({ values: SIGMAS, elbow: null, workingK: null });
    const ys = [...svg.matchAll(/cy="([0-9.]+)"/g)].map((m) => Number(m[1]));
    expect(ys.length).toBe(10);
    for (let i = 1; i < ys.length; i++) {
      expect(ys[i]).toBeGreaterThanOrEqual(ys[i - 1]); // SVG y grows downward
    }
  });

  it("marks the working-k selection", () => {
    const svg = buildScreeSvg({ values: SIGMAS, elbow: 0, workingK: 4 });
    expect(svg).toContain('data-index="3"');
    expect(countMatches(svg, /selected/g)).toBe(1);
  });

  it("shows an empty state for no values", () => {
    expect(buildScreeSvg({ values: [], elbow: null, workingK: null }))
      .toContain("no singular values");
  });
});
