/**
 * Chart rendering to a standalone SVG string: axes, confidence bands, lines,
 * legend. Output is a pure function of the inputs so a re-render of the same
 * data is byte-identical.
 */

import { Scale, linearScale, logScale, tickLabel } from "./scale.js";
import { Series } from "./series.js";

export interface ChartOptions {
  width: number;
  height: number;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  xScale: "linear" | "log";
  xRange?: [number, number];
  yRange?: [number, number];
}

// Okabe-Ito palette: distinguishable under common color-vision deficiencies
const PALETTE = [
  "#0072b2",
  "#d55e00",
  "#009e73",
  "#cc79a7",
  "#e69f00",
  "#56b4e9",
  "#f0e442",
  "#000000",
];

const MARGIN = { top: 46, right: 20, bottom: 52, left: 64 };

const fmt = (v: number) => String(Math.round(v * 100) / 100);

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function dataDomain(series: Series[], pick: (p: { x: number; lo: number; hi: number }) => number): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      const v = pick(p);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  return [lo, hi];
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  if (series.length === 0) throw new Error("nothing to draw: no series");
  const { width, height } = opts;
  const plotX: [number, number] = [MARGIN.left, width - MARGIN.right];
  const plotY: [number, number] = [height - MARGIN.bottom, MARGIN.top];

  const xDomain = opts.xRange ?? dataDomain(series, (p) => p.x);
  // probability curves: default to the unit interval
  const yDomain = opts.yRange ?? [0, 1];
  const x: Scale =
    opts.xScale === "log" ? logScale(xDomain, plotX) : linearScale(xDomain, plotX);
  const y: Scale = linearScale(yDomain, plotY, 5);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);

  // gridlines and ticks
  for (const t of y.ticks) {
    const py = fmt(y(t));
    parts.push(
      `<line x1="${plotX[0]}" y1="${py}" x2="${plotX[1]}" y2="${py}" stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${plotX[0] - 8}" y="${py}" dy="0.32em" text-anchor="end" font-size="12" fill="#333333">${esc(tickLabel(t))}</text>`,
    );
  }
  for (const t of x.ticks) {
    if (t < x.domain[0] - 1e-12 || t > x.domain[1] + 1e-12) continue;
    const px = fmt(x(t));
    parts.push(
      `<line x1="${px}" y1="${plotY[0]}" x2="${px}" y2="${plotY[0] + 5}" stroke="#333333" stroke-width="1"/>`,
      `<text x="${px}" y="${plotY[0] + 20}" text-anchor="middle" font-size="12" fill="#333333">${esc(tickLabel(t))}</text>`,
    );
  }

  // confidence bands under the lines
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const upper = s.points.map((p) => `${fmt(x(p.x))},${fmt(y(p.hi))}`);
    const lower = [...s.points].reverse().map((p) => `${fmt(x(p.x))},${fmt(y(p.lo))}`);
    parts.push(
      `<path class="band" d="M${[...upper, ...lower].join(" L")} Z" fill="${color}" fill-opacity="0.15" stroke="none"/>`,
    );
  });
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = s.points.map((p) => `${fmt(x(p.x))},${fmt(y(p.y))}`).join(" ");
    parts.push(
      `<polyline class="line" points="${pts}" fill="none" stroke="${color}" stroke-width="2"/>`,
    );
  });

  // frame
  parts.push(
    `<line x1="${plotX[0]}" y1="${plotY[0]}" x2="${plotX[1]}" y2="${plotY[0]}" stroke="#333333" stroke-width="1"/>`,
    `<line x1="${plotX[0]}" y1="${plotY[0]}" x2="${plotX[0]}" y2="${plotY[1]}" stroke="#333333" stroke-width="1"/>`,
  );

  if (opts.title) {
    parts.push(
      `<text x="${width / 2}" y="24" text-anchor="middle" font-size="15" fill="#111111">${esc(opts.title)}</text>`,
    );
  }
  if (opts.xLabel) {
    parts.push(
      `<text x="${(plotX[0] + plotX[1]) / 2}" y="${height - 12}" text-anchor="middle" font-size="13" fill="#111111">${esc(opts.xLabel)}</text>`,
    );
  }
  if (opts.yLabel) {
    const cy = (plotY[0] + plotY[1]) / 2;
    parts.push(
      `<text x="18" y="${cy}" text-anchor="middle" font-size="13" fill="#111111" transform="rotate(-90 18 ${cy})">${esc(opts.yLabel)}</text>`,
    );
  }

  // legend, top-right inside the plot area
  const legendX = plotX[1] - 230;
  let legendY = plotY[1] + 10;
  parts.push(`<g class="legend" font-size="12">`);
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    parts.push(
      `<line x1="${legendX}" y1="${legendY}" x2="${legendX + 22}" y2="${legendY}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${legendX + 28}" y="${legendY}" dy="0.32em" fill="#111111">${esc(s.label)}</text>`,
    );
    legendY += 18;
  });
  parts.push(`</g>`);
  parts.push(`</svg>`);
  return parts.join("\n") + "\n";
}
