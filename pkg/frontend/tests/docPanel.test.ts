import { describe, expect, it } from "vitest";

import { highlightTerms, renderDocText } from "../src/docPanel.js";

describe("term highlighting", () => {
  it("wraps matched terms in <mark>", () => {
    const html = highlightTerms("The seal leaks badly.", ["seal"]);
    expect(html).toContain("<mark>seal</mark>");
  });

  it("matches underscore n-grams against their surface form", () => {
    const html = highlightTerms("Failed during the pressure test.", ["pressure_test"]);
    expect(html).toContain("<mark>pressure test</mark>");
  });

  it("is case-insensitive and word-bounded", () => {
    const html = highlightTerms("Seal sealed unsealed", ["seal"]);
    expect(html).toContain("<mark>Seal</mark>");
    expect(html).not.toContain("<mark>sealed</mark>");
  });

  it("escapes html in the description", () => {
    const html = highlightTerms("<script>alert(1)</script> seal", ["seal"]);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("document panel", () => {
  it("renders metadata and highlighted text", () => {
    const html = renderDocText({
      record_id: "annular-00001",
      component: "annular",
      description: "Upper annular element leaks.",
      downtime_hours: 4.5,
    }, ["leak", "element"]);
    expect(html).toContain("annular-00001");
    expect(html).toContain("4.5 h downtime");
    expect(html).toContain("<mark>element</mark>");
  });
});
