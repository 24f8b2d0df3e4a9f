/** Explorer workbench wiring. The page is a single run: scree chart on top,
 * concept tabs, term table with threshold slider and facet chips, document
 * panel, export button. */

import { ApiClient, RevisionConflict, TermLoading } from "./api.js";
import { renderDocList, renderDocText } from "./docPanel.js";
import { fetchExport, downloadJson } from "./exporter.js";
import { FACETS, facetLegend } from "./facets.js";
import { attachScreeHandlers, buildScreeSvg } from "./scree.js";
import { AppState, applyLabelsState, conceptFacets, initialState,
         setLabelOptimistic, threshold } from "./state.js";
import { countBadge, filterTerms, renderTermTable, sliderToThreshold } from "./termTable.js";

export class Explorer {
  state: AppState = initialState();
  runId = "";
  private docsCache: Record<string, { record_id: string; loading: number }[]> = {};
  private activeDoc: string | null = null;

  constructor(private api: ApiClient, private root: HTMLElement) {}

  async init(): Promise<void> {
    this.root.innerHTML = `
      <header>
        <h1>Failure-scenario explorer</h1>
        <span id="run-info"></span>
        <button id="export-btn">Export scenarios</button>
      </header>
      <div id="conflict-banner" class="hidden"></div>
      <section id="scree-section">
        <h2>Singular values</h2>
        <div id="scree-chart"><p class="empty-hint">loading…</p></div>
      </section>
      <nav id="concept-tabs"></nav>
      <main id="workbench">
        <section id="terms-section">
          <div class="table-controls">
            <label>loading threshold
              <input type="range" id="threshold-slider" min="0" max="100" value="0">
            </label>
            <span id="count-badge"></span>
          </div>
          <div class="legend">${facetLegend()}</div>
          <div id="term-table"></div>
        </section>
        <section id="docs-section">
          <h2>High-loading documents</h2>
          <div id="doc-list"></div>
          <div id="doc-text"></div>
        </section>
      </main>`;

    try {
      const [run, scree, concepts, labels] = await Promise.all([
        this.api.run(), this.api.singularValues(), this.api.concepts(),
        this.api.labels(),
      ]);
      this.runId = run.run_id ?? "";
      this.element("run-info").textContent =
        `run ${this.runId} · ${concepts.length} concepts`;
      this.state.concepts = concepts;
      applyLabelsState(this.state, labels);
      this.renderScree(scree.values, scree.elbow);
      this.renderTabs();
      this.element("export-btn").addEventListener("click", () => this.onExport());
      if (concepts.length > 0) {
        await this.selectConcept(concepts[0].name);
      }
    } catch (err) {
      this.element("scree-chart").innerHTML =
        `<p class="empty-hint">failed to load run: ${String(err)}</p>`;
    }
  }

  element(id: string): HTMLElement {
    const el = this.root.querySelector<HTMLElement>(`#${id}`);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  }

  private renderScree(values: number[], elbow: number | null): void {
    const container = this.element("scree-chart");
    container.innerHTML = buildScreeSvg({
      values, elbow, workingK: this.state.workingK,
    });
    attachScreeHandlers(container, (k) => {
      this.state.workingK = k;
      this.renderScree(values, elbow);
      this.renderTabs();
    });
  }

  private renderTabs(): void {
    const limit = this.state.workingK ?? this.state.concepts.length;
    const tabs = this.state.concepts.slice(0, limit).map((c) => {
      const cls = c.name === this.state.activeConcept ? "tab active" : "tab";
      return `<button class="${cls}" data-concept="${c.name}">` +
        `${c.name} <span class="sigma">σ ${c.sigma.toFixed(3)}</span></button>`;
    }).join("");
    const nav = this.element("concept-tabs");
    nav.innerHTML = tabs;
    nav.querySelectorAll<HTMLButtonElement>("button.tab").forEach((el) => {
      el.addEventListener("click", () => {
        void this.selectConcept(el.dataset.concept as string);
      });
    });
  }

  async selectConcept(name: string): Promise<void> {
    this.state.activeConcept = name;
    if (!this.state.terms[name]) {
      this.state.terms[name] = await this.api.terms(name, 25);
    }
    if (!this.docsCache[name]) {
      this.docsCache[name] = await this.api.documents(name, 10);
    }
    this.activeDoc = null;
    this.renderTabs();
    this.bindSlider();
    this.renderTerms();
    this.renderDocs();
    this.element("doc-text").innerHTML =
      `<p class="empty-hint">pick a document to read it</p>`;
  }

  private currentTerms(): TermLoading[] {
    return this.state.terms[this.state.activeConcept ?? ""] ?? [];
  }

  private maxLoading(): number {
    const terms = this.currentTerms();
    return terms.length ? Math.max(...terms.map((t) => t.loading)) : 0;
  }

  private bindSlider(): void {
    const slider = this.element("threshold-slider") as HTMLInputElement;
    const concept = this.state.activeConcept as string;
    slider.value = "0";
    this.state.thresholds[concept] = 0;
    slider.oninput = () => {
      this.state.thresholds[concept] =
        sliderToThreshold(Number(slider.value), this.maxLoading());
      this.renderTerms();
    };
  }

  renderTerms(): void {
    const concept = this.state.activeConcept;
    if (!concept) return;
    const terms = this.currentTerms();
    const cut = threshold(this.state, concept);
    const facets = conceptFacets(this.state, concept);
    this.element("term-table").innerHTML = renderTermTable(terms, cut, facets);
    this.element("count-badge").textContent = countBadge(terms, cut);
    this.element("term-table")
      .querySelectorAll<HTMLButtonElement>("button.facet-chip").forEach((chip) => {
        chip.addEventListener("click", () => {
          const row = chip.closest("tr");
          const term = row?.dataset.term;
          if (term) this.openFacetPicker(row as HTMLTableRowElement, term);
        });
      });
  }

  private openFacetPicker(row: HTMLTableRowElement, term: string): void {
    const cell = row.querySelector(".facet") as HTMLElement;
    cell.innerHTML = FACETS.map(
      (f) => `<button class="facet-option" data-facet="${f}">${f.replace("_", " ")}</button>`,
    ).join("");
    cell.querySelectorAll<HTMLButtonElement>("button.facet-option").forEach((btn) => {
      btn.addEventListener("click", () => {
        void this.labelTerm(term, btn.dataset.facet as string);
      });
    });
  }

  async labelTerm(term: string, facet: string): Promise<void> {
    const concept = this.state.activeConcept;
    if (!concept) return;
    const undo = setLabelOptimistic(this.state, concept, term, facet);
    this.renderTerms();
    try {
      this.state.revision = await this.api.label(
        concept, term, facet, this.state.revision);
      this.hideConflict();
    } catch (err) {
      undo();
      this.renderTerms();
      if (err instanceof RevisionConflict) {
        this.showConflict(err.serverRevision);
      } else {
        throw err;
      }
    }
  }

  private showConflict(serverRevision: number): void {
    const banner = this.element("conflict-banner");
    banner.classList.remove("hidden");
    banner.innerHTML =
      `Someone else saved labels (revision ${serverRevision}). ` +
      `<button id="reload-labels">Reload labels</button>`;
    this.element("reload-labels").addEventListener("click", () => {
      void this.reloadLabels();
    });
  }

  private hideConflict(): void {
    this.element("conflict-banner").classList.add("hidden");
  }

  async reloadLabels(): Promise<void> {
    applyLabelsState(this.state, await this.api.labels());
    this.hideConflict();
    this.renderTerms();
  }

  private renderDocs(): void {
    const concept = this.state.activeConcept as string;
    const docs = this.docsCache[concept] ?? [];
    this.element("doc-list").innerHTML = renderDocList(docs, this.activeDoc);
    this.element("doc-list")
      .querySelectorAll<HTMLElement>("li.doc-row").forEach((rowEl) => {
        rowEl.addEventListener("click", () => {
          void this.openDocument(rowEl.dataset.record as string);
        });
      });
  }

  async openDocument(recordId: string): Promise<void> {
    const record = await this.api.document(recordId);
    this.activeDoc = recordId;
    this.renderDocs();
    const cut = threshold(this.state, this.state.activeConcept ?? "");
    const visible = filterTerms(this.currentTerms(), cut).map((t) => t.term);
    this.element("doc-text").innerHTML = renderDocText(record, visible);
  }

  async onExport(): Promise<void> {
    const scenarios = await fetchExport(this.api);
    downloadJson(scenarios, this.runId);
  }
}

export function mount(root: HTMLElement, base = ""): Explorer {
  return new Explorer(new ApiClient(base), root);
}

declare global {
  interface Window {
    __FCM_NO_AUTOSTART__?: boolean;
  }
}

if (typeof document !== "undefined" && !window.__FCM_NO_AUTOSTART__) {
  const root = document.getElementById("app");
  if (root) {
    void mount(root).init();
  }
}
