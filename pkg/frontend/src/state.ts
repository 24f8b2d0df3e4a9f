/** Client state: one analyst, one run, one sitting. Server revision is the
 * arbiter for label writes; local edits are optimistic and rolled back on
 * conflict. */

import { ConceptSummary, LabelsState, TermLoading } from "./api.js";

export interface AppState {
  concepts: ConceptSummary[];
  activeConcept: string | null;
  workingK: number | null;
  terms: Record<string, TermLoading[]>;
  thresholds: Record<string, number>;
  revision: number;
  labels: Record<string, Record<string, string>>;
  notes: Record<string, string>;
}

export function initialState(): AppState {
  return {
    concepts: [],
    activeConcept: null,
    workingK: null,
    terms: {},
    thresholds: {},
    revision: 0,
    labels: {},
    notes: {},
  };
}

export function applyLabelsState(state: AppState, fetched: LabelsState): void {
  state.revision = fetched.revision;
  state.labels = fetched.labels;
  state.notes = fetched.notes;
}

export function conceptFacets(state: AppState, concept: string): Record<string, string> {
  return state.labels[concept] ?? {};
}

/** Optimistic write; returns an undo closure for the 409 path. */
export function setLabelOptimistic(state: AppState, concept: string, term: string,
                                   facet: string): () => void {
  const byConcept = state.labels[concept] ?? (state.labels[concept] = {});
  const previous = byConcept[term];
  byConcept[term] = facet;
  return () => {
    if (previous === undefined) {
      delete byConcept[term];
    } else {
      byConcept[term] = previous;
    }
  };
}

export function threshold(state: AppState, concept: string): number {
  return state.thresholds[concept] ?? 0;
}
