/** Scree chart: descending singular values as an SVG line/point chart with
 * the server-reported elbow highlighted. Clicking a point selects a working
 * k (index + 1); the chart itself stays a pure string builder so tests can
 * assert on markup. */

const WIDTH = 420;
const HEIGHT = 180;
const PAD = 28;

export interface ScreeOptions {
  values: number[];
  elbow: number | null;
  workingK: number | null;
}

function x(i: number, n: number): number {
  if (n === 1) return WIDTH / 2;
  return PAD + (i * (WIDTH - 2 * PAD)) / (n - 1);
}

function y(v: number, vmin: number, vmax: number): number {
  const span = vmax - vmin;
  const t = span === 0 ? 0.5 : (v - vmin) / span;
  return HEIGHT - PAD - t * (HEIGHT - 2 * PAD);
}

export function buildScreeSvg(opts: ScreeOptions): string {
  const { values, elbow, workingK } = opts;
  if (values.length === 0) {
    return `<svg class="scree" viewBox="0 0 ${WIDTH} ${HEIGHT}">` +
      `<text x="${WIDTH / 2}" y="${HEIGHT / 2}" class="empty">no singular values</text></svg>`;
  }
  const n = values.length;
  const vmax = Math.max(...values);
  const vmin = Math.min(...values);
  const points = values.map((v, i) => `${x(i, n)},${y(v, vmin, vmax)}`).join(" ");

  const circles = values
    .map((v, i) => {
      const cls = i === elbow ? "scree-point elbow-marker" : "scree-point";
      const selected = workingK !== null && i === workingK - 1 ? " selected" : "";
      return (
        `<circle class="${cls}${selected}" data-index="${i}" cx="${x(i, n)}" ` +
        `cy="${y(v, vmin, vmax)}" r="${i === elbow ? 7 : 4.5}">` +
        `<title>sigma ${i + 1} = ${v.toPrecision(6)}</title></circle>`
      );
    })
    .join("");

  const elbowLabel = elbow === null
    ? ""
    : `<text class="elbow-label" x="${x(elbow, n) + 8}" y="${y(values[elbow], vmin, vmax) - 8}">elbow</text>`;

  return (
    `<svg class="scree" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img">` +
    `<polyline class="scree-line" fill="none" points="${points}"></polyline>` +
    circles + elbowLabel +
    `</svg>`
  );
}

/** Wire click-to-select on the rendered chart. Returns nothing; the handler
 * receives the 1-based k for the clicked point. */
export function attachScreeHandlers(container: HTMLElement,
                                    onSelect: (k: number) => void): void {
  container.querySelectorAll<SVGCircleElement>("circle.scree-point").forEach((el) => {
    el.addEventListener("click", () => {
      const index = Number(el.dataset.index);
      if (!Number.isNaN(index)) onSelect(index + 1);
    });
  });
}
