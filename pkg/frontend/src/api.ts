/** Typed client for the run-explorer API. Every request the UI makes goes
 * through this module, which keeps the endpoint surface auditable. */

export interface RunManifest {
  run_id: string;
  tool_version: string;
  stages_completed: string[];
  config_snapshot: Record<string, unknown>;
}

export interface SingularValues {
  values: number[];
  elbow: number | null;
  detail: string | null;
}

export interface ConceptSummary {
  name: string;
  sigma: number;
  term_count: number;
  document_count: number;
}

export interface TermLoading {
  term: string;
  loading: number;
}

export interface DocLoading {
  record_id: string;
  loading: number;
}

export interface FailureRecord {
  record_id: string;
  component: string;
  description: string;
  event_date?: string;
  downtime_hours?: number;
}

export interface LabelsState {
  revision: number;
  labels: Record<string, Record<string, string>>;
  notes: Record<string, string>;
}

export interface Scenario {
  concept_name: string;
  component: string;
  singular_value: number;
  top_terms: [string, number][];
  top_documents: [string, number][];
  facet_labels: Record<string, string>;
  narrative: string | null;
}

/** Thrown on a 409: somebody else wrote since we last fetched. */
export class RevisionConflict extends Error {
  constructor(public serverRevision: number) {
    super(`label store moved on to revision ${serverRevision}`);
  }
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      throw new Error(`GET ${path} failed: ${response.status}`);
    }
    return (await response.json()) as T;
  }

  run(): Promise<RunManifest> {
    return this.getJson("/api/run");
  }

  singularValues(): Promise<SingularValues> {
    return this.getJson("/api/singular-values");
  }

  concepts(): Promise<ConceptSummary[]> {
    return this.getJson("/api/concepts");
  }

  terms(concept: string, limit = 25): Promise<TermLoading[]> {
    return this.getJson(`/api/concepts/${encodeURIComponent(concept)}/terms?limit=${limit}`);
  }

  documents(concept: string, limit = 10): Promise<DocLoading[]> {
    return this.getJson(
      `/api/concepts/${encodeURIComponent(concept)}/documents?limit=${limit}`);
  }

  document(recordId: string): Promise<FailureRecord> {
    return this.getJson(`/api/documents/${encodeURIComponent(recordId)}`);
  }

  labels(): Promise<LabelsState> {
    return this.getJson("/api/labels");
  }

  async label(concept: string, term: string, facet: string,
              revision: number): Promise<number> {
    const response = await fetch(this.base + "/api/labels", {
      method: "POST",
      headers: { "Content-Type": "application/json", "If-Match": String(revision) },
      body: JSON.stringify({ concept, term, facet }),
    });
    if (response.status === 409) {
      const body = (await response.json()) as { revision: number };
      throw new RevisionConflict(body.revision);
    }
    if (!response.ok) {
      throw new Error(`POST /api/labels failed: ${response.status}`);
    }
    return ((await response.json()) as { revision: number }).revision;
  }

  async narrative(concept: string, text: string, revision: number): Promise<number> {
    const response = await fetch(
      this.base + `/api/scenarios/${encodeURIComponent(concept)}/narrative`, {
        method: "POST",
        headers: { "Content-Type": "application/json", "If-Match": String(revision) },
        body: JSON.stringify({ narrative: text }),
      });
    if (response.status === 409) {
      const body = (await response.json()) as { revision: number };
      throw new RevisionConflict(body.revision);
    }
    if (!response.ok) {
      throw new Error(`POST narrative failed: ${response.status}`);
    }
    return ((await response.json()) as { revision: number }).revision;
  }

  export(): Promise<Scenario[]> {
    return this.getJson("/api/export");
  }
}
