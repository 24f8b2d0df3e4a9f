/** Stateful fetch mock implementing the documented API for a fixture run:
 * ten annular concepts with descending singular values and a label store
 * with revision bookkeeping. */

export interface MockStore {
  revision: number;
  labels: Record<string, Record<string, string>>;
  notes: Record<string, string>;
}

export const SIGMAS = [6.304, 3.333, 2.84, 2.509, 2.31, 2.12, 1.95, 1.8, 1.66, 1.51];
export const ELBOW_INDEX = 1;

const AC1_TERMS = [
  { term: "leak", loading: 0.42 },
  { term: "seal", loading: 0.35 },
  { term: "pressure_test", loading: 0.3 },
  { term: "element", loading: 0.22 },
  { term: "piston", loading: 0.11 },
];

const GENERIC_TERMS = [
  { term: "valve", loading: 0.4 },
  { term: "vent", loading: 0.28 },
  { term: "replace", loading: 0.19 },
];

const AC1_DOCS = [
  { record_id: "annular-00001", loading: 0.31 },
  { record_id: "annular-00002", loading: 0.27 },
];

const RECORDS: Record<string, object> = {
  "annular-00001": {
    record_id: "annular-00001",
    component: "annular",
    description: "The upper annular element leaks during a pressure test; seal replaced.",
    downtime_hours: 4.5,
  },
  "annular-00002": {
    record_id: "annular-00002",
    component: "annular",
    description: "Piston scoring observed; leak path through the weep hole.",
  },
};

export function emptyStore(): MockStore {
  return { revision: 0, labels: {}, notes: {} };
}

export interface MockApi {
  fetch: typeof fetch;
  requested: string[];
  store: MockStore;
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function createMockApi(store: MockStore = emptyStore(),
                              options: { failNextLabelWith409?: boolean } = {},
                              ): MockApi {
  const requested: string[] = [];
  const state = { failNextLabelWith409: options.failNextLabelWith409 ?? false };

  const conceptNames = SIGMAS.map((_, i) => `AC${i + 1}`);

  const mockFetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    requested.push(url);
    const path = url.split("?")[0];

    if (path === "/api/run") {
      return json({ run_id: "fixture01", tool_version: "0.1.0",
                    stages_completed: ["ingest", "preprocess", "vectorize",
                                       "decompose", "report"],
                    config_snapshot: {} });
    }
    if (path === "/api/singular-values") {
      return json({ values: SIGMAS, elbow: ELBOW_INDEX, detail: null });
    }
    if (path === "/api/concepts") {
      return json(conceptNames.map((name, i) => ({
        name, sigma: SIGMAS[i], term_count: 5, document_count: 2 })));
    }
    const termsMatch = path.match(/^\/api\/concepts\/([^/]+)\/terms$/);
    if (termsMatch) {
      const name = decodeURIComponent(termsMatch[1]);
      if (!conceptNames.includes(name)) return json({ detail: "unknown" }, 404);
      return json(name === "AC1" ? AC1_TERMS : GENERIC_TERMS);
    }
    const docsMatch = path.match(/^\/api\/concepts\/([^/]+)\/documents$/);
    if (docsMatch) {
      const name = decodeURIComponent(docsMatch[1]);
      if (!conceptNames.includes(name)) return json({ detail: "unknown" }, 404);
      return json(AC1_DOCS);
    }
    const docMatch = path.match(/^\/api\/documents\/([^/]+)$/);
    if (docMatch) {
      const record = RECORDS[decodeURIComponent(docMatch[1])];
      return record ? json(record) : json({ detail: "unknown record" }, 404);
    }
    if (path === "/api/labels" && (!init || !init.method || init.method === "GET")) {
      return json(store);
    }
    if (path === "/api/labels" && init?.method === "POST") {
      if (state.failNextLabelWith409) {
        state.failNextLabelWith409 = false;
        return json({ detail: "revision mismatch", revision: store.revision }, 409);
      }
      const headers = new Headers(init.headers);
      const ifMatch = headers.get("If-Match");
      if (ifMatch !== null && Number(ifMatch) !== store.revision) {
        return json({ detail: "revision mismatch", revision: store.revision }, 409);
      }
      const body = JSON.parse(String(init.body)) as {
        concept: string; term: string; facet: string };
      (store.labels[body.concept] ??= {})[body.term] = body.facet;
      store.revision += 1;
      return json({ revision: store.revision });
    }
    const narrMatch = path.match(/^\/api\/scenarios\/([^/]+)\/narrative$/);
    if (narrMatch && init?.method === "POST") {
      const body = JSON.parse(String(init.body)) as { narrative: string };
      store.notes[decodeURIComponent(narrMatch[1])] = body.narrative;
      store.revision += 1;
      return json({ revision: store.revision });
    }
    if (path === "/api/export") {
      return json(conceptNames.map((name, i) => {
        const terms = name === "AC1" ? AC1_TERMS : GENERIC_TERMS;
        const labels = store.labels[name] ?? {};
        const facets: Record<string, string> = {};
        for (const t of terms) facets[t.term] = labels[t.term] ?? "other";
        return {
          concept_name: name,
          component: "annular",
          singular_value: SIGMAS[i],
          top_terms: terms.map((t) => [t.term, t.loading]),
          top_documents: AC1_DOCS.map((d) => [d.record_id, d.loading]),
          facet_labels: facets,
          narrative: store.notes[name] ?? null,
        };
      }));
    }
    return json({ detail: `unmocked path ${path}` }, 500);
  }) as typeof fetch;

  return { fetch: mockFetch, requested, store };
}

/** Documented endpoint shapes; the UI may call nothing outside this list. */
export const DOCUMENTED = [
  /^\/api\/run$/,
  /^\/api\/singular-values$/,
  /^\/api\/concepts$/,
  /^\/api\/concepts\/[^/]+\/terms(\?.*)?$/,
  /^\/api\/concepts\/[^/]+\/documents(\?.*)?$/,
  /^\/api\/documents\/[^/]+$/,
  /^\/api\/labels$/,
  /^\/api\/scenarios\/[^/]+\/narrative$/,
  /^\/api\/export$/,
];
