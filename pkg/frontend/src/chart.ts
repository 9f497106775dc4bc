import type { DistributionBin, OutputDocument } from "./types.js";

/** Chamber-control fill colors: blue = Democratic House, red = Republican. */
export const DEM_BLUE = "#2166ac";
export const REP_RED = "#b2182b";

export interface ChartBar extends DistributionBin {
  control: "D" | "R";
}

export class DocumentError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "DocumentError";
  }
}

/** Throw DocumentError unless doc looks like a renderable forecast. */
export function assertRenderable(doc: OutputDocument): void {
  if (!doc || typeof doc !== "object") throw new DocumentError("document is not an object");
  if (!Array.isArray(doc.distribution) || doc.distribution.length === 0) {
    throw new DocumentError("document has no distribution");
  }
  for (const bin of doc.distribution) {
    if (
      !bin ||
      !Number.isInteger(bin.change) ||
      typeof bin.probability !== "number" ||
      !Number.isFinite(bin.probability) ||
      bin.probability < 0
    ) {
      throw new DocumentError("distribution contains a malformed bin");
    }
  }
  if (!Number.isFinite(doc.rep_seat_change_point)) {
    throw new DocumentError("missing point estimate");
  }
  if (!doc.inputs || !Number.isInteger(doc.inputs.rep_seats_held)) {
    throw new DocumentError("missing rep_seats_held in inputs echo");
  }
}

/**
 * Seat change at or below which the chamber flips: with 218 needed for a
 * majority, Republicans keep control only while seats held after the
 * change reach 218, i.e. a bar is Democratic iff change <= 217 - held.
 */
export function controlBoundary(repSeatsHeld: number): number {
  return 217 - repSeatsHeld;
}

/** Color each bin by who controls the chamber at that seat change. */
export function chartModel(doc: OutputDocument): ChartBar[] {
  assertRenderable(doc);
  const boundary = controlBoundary(doc.inputs.rep_seats_held);
  return doc.distribution.map((bin) => ({
    ...bin,
    control: bin.change <= boundary ? "D" : "R",
  }));
}

const WIDTH = 720;
const HEIGHT = 260;
const MARGIN = { top: 16, right: 16, bottom: 34, left: 52 };

function tickStep(span: number): number {
  const raw = span / 8;
  if (raw <= 1) return 1;
  if (raw <= 2) return 2;
  if (raw <= 5) return 5;
  return Math.ceil(raw / 10) * 10;
}

function esc(value: string): string {
  return value.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/**
 * Render the seat-change distribution as standalone SVG markup.
 *
 * Bars sit on an integer seat-change axis, heights scaled so the tallest
 * bin fills the plot; a dashed rule marks the 218-majority boundary.
 */
export function svgMarkup(bars: ChartBar[], repSeatsHeld: number): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const changes = bars.map((b) => b.change);
  const lo = Math.min(...changes) - 1;
  const hi = Math.max(...changes) + 1;
  const span = hi - lo;
  const maxProb = Math.max(...bars.map((b) => b.probability), 1e-12);
  const x = (change: number) => MARGIN.left + ((change - lo) / span) * plotW;
  const barW = Math.max(1, (plotW / span) * 0.85);

  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" aria-label="Republican seat change distribution">`,
  );

  for (const bar of bars) {
    const h = (bar.probability / maxProb) * plotH;
    const fill = bar.control === "D" ? DEM_BLUE : REP_RED;
    const title = `${bar.change >= 0 ? "+" : ""}${bar.change} seats: p=${bar.probability.toFixed(4)}`;
    parts.push(
      `<rect class="bar" x="${(x(bar.change) - barW / 2).toFixed(2)}" ` +
        `y="${(MARGIN.top + plotH - h).toFixed(2)}" width="${barW.toFixed(2)}" ` +
        `height="${h.toFixed(2)}" fill="${fill}"><title>${esc(title)}</title></rect>`,
    );
  }

  // 218-majority rule sits between the last Democratic and first Republican bin
  const boundary = controlBoundary(repSeatsHeld) + 0.5;
  if (boundary > lo && boundary < hi) {
    const bx = x(boundary).toFixed(2);
    parts.push(
      `<line class="majority" x1="${bx}" y1="${MARGIN.top}" x2="${bx}" ` +
        `y2="${MARGIN.top + plotH}" stroke="#444" stroke-dasharray="4 3"/>`,
      `<text class="majority-label" x="${bx}" y="${MARGIN.top - 4}" text-anchor="middle">218</text>`,
    );
  }

  const axisY = MARGIN.top + plotH;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${MARGIN.left + plotW}" y2="${axisY}" stroke="#888"/>`,
  );
  const step = tickStep(span);
  for (let t = Math.ceil(lo / step) * step; t <= hi; t += step) {
    const tx = x(t).toFixed(2);
    parts.push(
      `<line x1="${tx}" y1="${axisY}" x2="${tx}" y2="${axisY + 5}" stroke="#888"/>`,
      `<text class="tick" x="${tx}" y="${axisY + 18}" text-anchor="middle">${t >= 0 ? "+" + t : t}</text>`,
    );
  }
  parts.push(
    `<text class="axis-label" x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 4}" text-anchor="middle">Republican seat change</text>`,
    `<text class="axis-label" transform="rotate(-90)" x="${-(MARGIN.top + plotH / 2)}" y="14" text-anchor="middle">probability (peak ${maxProb.toFixed(3)})</text>`,
  );
  parts.push("</svg>");
  return parts.join("");
}
