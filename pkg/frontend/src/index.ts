export { CURVE_COLUMNS, ContractError, parseCurveCsv } from "./contract.js";
export type { CurveRow, GridKind, Member } from "./contract.js";
export { SpecError, figureSpecSchema, parseFigureSpec } from "./figure.js";
export type { FigureSpec } from "./figure.js";
export { SeriesError, buildSeries } from "./series.js";
export type { Series, SeriesPoint } from "./series.js";
export { renderChart } from "./svg.js";
export { renderFigureFile, renderSpec } from "./render.js";
