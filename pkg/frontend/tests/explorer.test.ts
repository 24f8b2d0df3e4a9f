/** Workbench integration against the mocked API: fixture load, scree with
 * elbow, monotone threshold slider, label persistence across reload, export
 * payload, conflict handling, and the endpoint allow-list. */
import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { Explorer } from "../src/main.js";
import { createMockApi, DOCUMENTED, ELBOW_INDEX, emptyStore, MockStore }
  from "./mockApi.js";

declare global {
  interface Window {
    __FCM_NO_AUTOSTART__?: boolean;
  }
}
window.__FCM_NO_AUTOSTART__ = true;

async function mountExplorer(store: MockStore,
                             options: { failNextLabelWith409?: boolean } = {}) {
  const mock = createMockApi(store, options);
  vi.stubGlobal("fetch", mock.fetch);
  const root = document.createElement("div");
  document.body.appendChild(root);
  const explorer = new Explorer(new ApiClient(""), root);
  await explorer.init();
  return { explorer, root, mock };
}

beforeEach(() => {
  document.body.innerHTML = "";
  vi.unstubAllGlobals();
});

describe("explorer workbench", () => {
  it("loads the fixture run: 10 scree points with the elbow marked", async () => {
    const { root } = await mountExplorer(emptyStore());
    const points = root.querySelectorAll("circle.scree-point");
    expect(points.length).toBe(10);
    const marker = root.querySelectorAll("circle.elbow-marker");
    expect(marker.length).toBe(1);
    expect((marker[0] as SVGCircleElement).getAttribute("data-index"))
      .toBe(String(ELBOW_INDEX));
    expect(root.querySelectorAll("#concept-tabs button.tab").length).toBe(10);
  });

  it("filters the term table monotonically as the slider rises", async () => {
    const { explorer, root } = await mountExplorer(emptyStore());
    const slider = root.querySelector("#threshold-slider") as HTMLInputElement;
    let previous = Infinity;
    for (const position of ["0", "25", "50", "75", "100"]) {
      slider.value = position;
      slider.dispatchEvent(new Event("input"));
      const rows = root.querySelectorAll("#term-table tr[data-term]").length;
      expect(rows).toBeLessThanOrEqual(previous);
      previous = rows;
    }
    expect(previous).toBeLessThanOrEqual(1); // at max threshold only the top term
    expect(explorer.state.activeConcept).toBe("AC1");
  });

  it("labels leak as failure_mode and persists across reload", async () => {
    const store = emptyStore();
    const first = await mountExplorer(store);
    await first.explorer.labelTerm("leak", "failure_mode");
    expect(store.labels["AC1"]["leak"]).toBe("failure_mode");
    expect(store.revision).toBe(1);

    // simulate a page reload: fresh DOM + fresh explorer over the same store
    document.body.innerHTML = "";
    const second = await mountExplorer(store);
    expect(second.explorer.state.labels["AC1"]["leak"]).toBe("failure_mode");
    const chip = second.root.querySelector(
      'tr[data-term="leak"] .facet-chip') as HTMLElement;
    expect(chip.getAttribute("data-facet")).toBe("failure_mode");
    expect(chip.className).toContain("active");
  });

  it("exports scenarios containing the facet map", async () => {
    const store = emptyStore();
    const { explorer, mock } = await mountExplorer(store);
    await explorer.labelTerm("leak", "failure_mode");
    const api = new ApiClient("");
    const scenarios = await api.export();
    const ac1 = scenarios.find((s) => s.concept_name === "AC1");
    expect(ac1?.facet_labels["leak"]).toBe("failure_mode");
    expect(ac1?.facet_labels["seal"]).toBe("other");
    expect(mock.requested).toContain("/api/export");
  });

  it("rolls back the optimistic chip and shows a banner on 409", async () => {
    const store = emptyStore();
    const { explorer, root } = await mountExplorer(
      store, { failNextLabelWith409: true });
    await explorer.labelTerm("leak", "failure_mode");
    expect(store.labels["AC1"]?.["leak"]).toBeUndefined(); // rolled back
    const banner = root.querySelector("#conflict-banner") as HTMLElement;
    expect(banner.className).not.toContain("hidden");
    expect(banner.textContent).toContain("revision");
    // reload button recovers
    (root.querySelector("#reload-labels") as HTMLButtonElement).click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(banner.className).toContain("hidden");
  });

  it("reads a document with high-loading terms highlighted", async () => {
    const { explorer, root } = await mountExplorer(emptyStore());
    await explorer.openDocument("annular-00001");
    const text = root.querySelector("#doc-text") as HTMLElement;
    expect(text.innerHTML).toContain("<mark>");
    expect(text.textContent).toContain("annular-00001");
  });

  it("clicking a scree point sets the working k and trims the tabs", async () => {
    const { root, explorer } = await mountExplorer(emptyStore());
    const third = root.querySelector('circle[data-index="2"]') as SVGCircleElement;
    third.dispatchEvent(new Event("click"));
    expect(explorer.state.workingK).toBe(3);
    expect(root.querySelectorAll("#concept-tabs button.tab").length).toBe(3);
  });

  it("calls only documented endpoints", async () => {
    const store = emptyStore();
    const { explorer, mock } = await mountExplorer(store);
    await explorer.labelTerm("leak", "failure_mode");
    await explorer.openDocument("annular-00001");
    await explorer.onExport();
    for (const url of mock.requested) {
      expect(DOCUMENTED.some((p) => p.test(url.split("?")[0]) || p.test(url)),
             `undocumented endpoint: ${url}`).toBe(true);
    }
  });
});
