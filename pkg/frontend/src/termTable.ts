/** Term table with the loading-threshold slider semantics: the table shows
 * exactly the fetched terms whose loading is >= the threshold, so raising
 * the slider can only remove rows. */

import { TermLoading } from "./api.js";
import { facetChip } from "./facets.js";

export function filterTerms(terms: TermLoading[], minLoading: number): TermLoading[] {
  return terms.filter((t) => t.loading >= minLoading);
}

/** Slider positions map linearly onto [0, max loading]. */
export function sliderToThreshold(position: number, max: number,
                                  steps = 100): number {
  return (Math.min(Math.max(position, 0), steps) / steps) * max;
}

export function renderTermTable(terms: TermLoading[], threshold: number,
                                facets: Record<string, string>): string {
  const visible = filterTerms(terms, threshold);
  if (visible.length === 0) {
    return `<p class="empty-hint">No terms at or above the current threshold ` +
      `(${threshold.toFixed(3)}). Lower the slider.</p>`;
  }
  const rows = visible
    .map((t) => {
      const facet = facets[t.term] ?? "other";
      return (
        `<tr data-term="${t.term}">` +
        `<td class="term">${t.term}</td>` +
        `<td class="loading">${t.loading.toFixed(4)}</td>` +
        `<td class="facet">${facetChip(facet, facet !== "other")}</td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<table class="term-table"><thead><tr>` +
    `<th>term</th><th>loading</th><th>facet</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function countBadge(terms: TermLoading[], threshold: number): string {
  const visible = filterTerms(terms, threshold).length;
  return `${visible} / ${terms.length} terms`;
}
