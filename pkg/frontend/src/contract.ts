/**
 * The simulator's curve CSV contract. Both rc_curve.csv and pt_curve.csv
 * share one schema; this module parses them into typed rows and rejects
 * files that do not carry the expected columns.
 */

import Papa from "papaparse";

export const CURVE_COLUMNS = [
  "sweep_id",
  "lambda",
  "psi_deg",
  "member",
  "grid_kind",
  "grid_value",
  "estimate",
  "ci_low",
  "ci_high",
  "n_effective",
] as const;

export type Member = "M" | "m";
export type GridKind = "theta" | "kappa";

export interface CurveRow {
  sweepId: string;
  lambda: number;
  psiDeg: number;
  member: Member;
  gridKind: GridKind;
  gridValue: number;
  estimate: number;
  ciLow: number;
  ciHigh: number;
  nEffective: number;
}

export class ContractError extends Error {}

function toNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw === "" || !Number.isFinite(value)) {
    throw new ContractError(
      `line ${line}: column ${column} is not a finite number: ${JSON.stringify(raw)}`,
    );
  }
  return value;
}

export function parseCurveCsv(text: string, name = "curve csv"): CurveRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new ContractError(`${name}: ${first.message} (row ${first.row})`);
  }
  const header = parsed.meta.fields ?? [];
  const missing = CURVE_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new ContractError(`${name}: missing columns: ${missing.join(", ")}`);
  }
  if (parsed.data.length === 0) {
    throw new ContractError(`${name}: no data rows`);
  }

  return parsed.data.map((raw, i) => {
    const line = i + 2; // header is line 1
    const member = raw["member"];
    if (member !== "M" && member !== "m") {
      throw new ContractError(`line ${line}: member must be M or m, got ${member}`);
    }
    const gridKind = raw["grid_kind"];
    if (gridKind !== "theta" && gridKind !== "kappa") {
      throw new ContractError(
        `line ${line}: grid_kind must be theta or kappa, got ${gridKind}`,
      );
    }
    return {
      sweepId: raw["sweep_id"] ?? "",
      lambda: toNumber(raw["lambda"] ?? "", "lambda", line),
      psiDeg: toNumber(raw["psi_deg"] ?? "", "psi_deg", line),
      member,
      gridKind,
      gridValue: toNumber(raw["grid_value"] ?? "", "grid_value", line),
      estimate: toNumber(raw["estimate"] ?? "", "estimate", line),
      ciLow: toNumber(raw["ci_low"] ?? "", "ci_low", line),
      ciHigh: toNumber(raw["ci_high"] ?? "", "ci_high", line),
      nEffective: toNumber(raw["n_effective"] ?? "", "n_effective", line),
    };
  });
}

/** Floating-point match for grid knots and swept values. */
export function near(a: number, b: number): boolean {
  return Math.abs(a - b) <= 1e-9 * Math.max(1, Math.abs(a), Math.abs(b));
}
