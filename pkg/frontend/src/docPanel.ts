/** Document reading panel: ranked high-loading records, and the full
 * description with the concept's high-loading terms highlighted. Underscore
 * n-gram terms ("pressure_test") match their space-separated surface form. */

import { DocLoading, FailureRecord } from "./api.js";

function escapeHtml(raw: string): string {
  return raw.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function escapeRegExp(raw: string): string {
  return raw.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

export function highlightTerms(description: string, terms: string[]): string {
  let html = escapeHtml(description);
  const patterns = terms
    .filter((t) => t.length > 1)
    .map((t) => escapeRegExp(t).replace(/_/g, "[ _-]"))
    .sort((a, b) => b.length - a.length);
  if (patterns.length === 0) return html;
  const re = new RegExp(`\\b(${patterns.join("|")})\\b`, "gi");
  return html.replace(re, "<mark>$1</mark>");
}

export function renderDocList(docs: DocLoading[], activeId: string | null): string {
  if (docs.length === 0) return `<p class="empty-hint">No documents.</p>`;
  const rows = docs
    .map((d) => {
      const cls = d.record_id === activeId ? "doc-row active" : "doc-row";
      return (
        `<li class="${cls}" data-record="${d.record_id}">` +
        `<span class="doc-id">${d.record_id}</span>` +
        `<span class="doc-loading">${d.loading.toFixed(4)}</span></li>`
      );
    })
    .join("");
  return `<ul class="doc-list">${rows}</ul>`;
}

export function renderDocText(record: FailureRecord, highlight: string[]): string {
  const meta = [
    `<span class="doc-meta-id">${record.record_id}</span>`,
    `<span class="doc-meta-component">${record.component}</span>`,
    record.event_date ? `<span class="doc-meta-date">${record.event_date}</span>` : "",
    record.downtime_hours !== undefined && record.downtime_hours !== null
      ? `<span class="doc-meta-downtime">${record.downtime_hours} h downtime</span>`
      : "",
  ].filter(Boolean).join(" · ");
  return (
    `<div class="doc-text"><div class="doc-meta">${meta}</div>` +
    `<p>${highlightTerms(record.description, highlight)}</p></div>`
  );
}
