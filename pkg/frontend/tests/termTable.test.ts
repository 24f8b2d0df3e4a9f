import { describe, expect, it } from "vitest";

import { countBadge, filterTerms, renderTermTable, sliderToThreshold }
  from "../src/termTable.js";

const TERMS = [
  { term: "leak", loading: 0.42 },
  { term: "seal", loading: 0.35 },
  { term: "pressure_test", loading: 0.3 },
  { term: "element", loading: 0.22 },
  { term: "piston", loading: 0.11 },
];

describe("threshold filtering", () => {
  it("keeps exactly the terms at or above the threshold", () => {
    expect(filterTerms(TERMS, 0).length).toBe(5);
    expect(filterTerms(TERMS, 0.3).map((t) => t.term))
      .toEqual(["leak", "seal", "pressure_test"]);
    expect(filterTerms(TERMS, 0.421)).toEqual([]);
  });

  it("is monotone: raising the slider never adds rows", () => {
    let previous = Infinity;
    for (let position = 0; position <= 100; position += 5) {
      const threshold = sliderToThreshold(position, 0.42);
      const count = filterTerms(TERMS, threshold).length;
      expect(count).toBeLessThanOrEqual(previous);
      previous = count;
    }
  });

  it("maps slider bounds onto [0, max]", () => {
    expect(sliderToThreshold(0, 0.42)).toBe(0);
    expect(sliderToThreshold(100, 0.42)).toBeCloseTo(0.42, 12);
    expect(sliderToThreshold(50, 0.42)).toBeCloseTo(0.21, 12);
  });
});

describe("table rendering", () => {
  it("renders one row per visible term", () => {
    const html = renderTermTable(TERMS, 0.3, {});
    expect((html.match(/<tr data-term=/g) ?? []).length).toBe(3);
  });

  it("shows a hint instead of an empty table", () => {
    const html = renderTermTable(TERMS, 1.0, {});
    expect(html).toContain("Lower the slider");
  });

  it("renders stored facets as active chips", () => {
    const html = renderTermTable(TERMS, 0, { leak: "failure_mode" });
    expect(html).toContain('data-facet="failure_mode"');
    expect(html).toContain("facet-chip active");
  });

  it("reports the visible count", () => {
    expect(countBadge(TERMS, 0.3)).toBe("3 / 5 terms");
  });
});
