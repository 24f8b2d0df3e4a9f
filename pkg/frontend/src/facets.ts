/** The six facet values the concepts pipeline defines, with chip colors. */

export const FACETS = [
  "failure_mode",
  "detection_method",
  "component_part",
  "corrective_action",
  "suspected_cause",
  "other",
] as const;

export type Facet = (typeof FACETS)[number];

export const FACET_COLORS: Record<Facet, string> = {
  failure_mode: "#c0392b",
  detection_method: "#2471a3",
  component_part: "#7d6608",
  corrective_action: "#1e8449",
  suspected_cause: "#7d3c98",
  other: "#707b7c",
};

export function facetChip(facet: string, active: boolean): string {
  const color = FACET_COLORS[facet as Facet] ?? FACET_COLORS.other;
  const cls = active ? "facet-chip active" : "facet-chip";
  return `<button class="${cls}" data-facet="${facet}" style="--chip-color:${color}">` +
    `${facet.replace("_", " ")}</button>`;
}

export function facetLegend(): string {
  return FACETS.map(
    (facet) =>
      `<span class="legend-item"><span class="legend-dot" ` +
      `style="background:${FACET_COLORS[facet]}"></span>${facet.replace("_", " ")}</span>`,
  ).join("");
}
