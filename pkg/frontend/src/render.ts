/**
 * Spec file in, SVG file out. Everything is assembled in memory before any
 * write, so a failing render leaves no partial output behind.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname, isAbsolute, join, resolve } from "node:path";

import { parseCurveCsv } from "./contract.js";
import { FigureSpec, parseFigureSpec } from "./figure.js";
import { buildSeries } from "./series.js";
import { renderChart } from "./svg.js";

const DEFAULT_LABELS: Record<FigureSpec["kind"], { x: string; y: string }> = {
  rc_vs_kappa: { x: "rate threshold", y: "rate coverage probability" },
  rc_vs_density: { x: "vehicle density (1/m)", y: "rate coverage probability" },
  pt_vs_theta: { x: "SINR threshold", y: "SINR outage probability" },
};

export function renderSpec(spec: FigureSpec, specDir: string): string {
  const csvPath = isAbsolute(spec.csv) ? spec.csv : resolve(specDir, spec.csv);
  const rows = parseCurveCsv(readFileSync(csvPath, "utf8"), spec.csv);
  const series = buildSeries(spec, rows);
  return renderChart(series, {
    width: spec.width,
    height: spec.height,
    title: spec.title,
    xLabel: spec.xLabel ?? DEFAULT_LABELS[spec.kind].x,
    yLabel: spec.yLabel ?? DEFAULT_LABELS[spec.kind].y,
    // outage curves run over a decade-spanning threshold grid
    xScale: spec.xScale ?? (spec.kind === "pt_vs_theta" ? "log" : "linear"),
    xRange: spec.xRange,
    yRange: spec.yRange,
  });
}

/** Render one spec file into outDir; returns the written path. */
export function renderFigureFile(specPath: string, outDir: string): string {
  const spec = parseFigureSpec(readFileSync(specPath, "utf8"), specPath);
  const svg = renderSpec(spec, dirname(resolve(specPath)));
  const outPath = join(outDir, spec.output);
  mkdirSync(dirname(outPath), { recursive: true });
  writeFileSync(outPath, svg, "utf8");
  return outPath;
}
