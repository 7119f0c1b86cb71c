/**
 * Turn contract rows into plottable series for the three figure kinds.
 *
 * rc_vs_kappa   rate coverage vs rate; one series per (member, beamwidth)
 *               at a single density.
 * rc_vs_density rate coverage vs density; one series per (beamwidth, rate
 *               knot) for one member.
 * pt_vs_theta   SINR outage vs threshold; one series per (density,
 *               beamwidth) for one member.
 */

import { CurveRow, Member, near } from "./contract.js";
import { FigureSpec } from "./figure.js";

export interface SeriesPoint {
  x: number;
  y: number;
  lo: number;
  hi: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
}

export class SeriesError extends Error {}

function uniqueSorted(values: number[]): number[] {
  const out: number[] = [];
  for (const v of [...values].sort((a, b) => a - b)) {
    if (out.length === 0 || !near(out[out.length - 1]!, v)) out.push(v);
  }
  return out;
}

const fmtPsi = (psi: number) => `ψ = ${psi}°`;
const fmtLambda = (lam: number) => `λ = ${lam}`;
const fmtKappa = (k: number) => `κ = ${k / 1e9} Gb/s`;
const memberName = (m: Member) => (m === "M" ? "best member" : "worst member");

function sortedPoints(rows: CurveRow[], xOf: (r: CurveRow) => number): SeriesPoint[] {
  return rows
    .map((r) => ({ x: xOf(r), y: r.estimate, lo: r.ciLow, hi: r.ciHigh }))
    .sort((a, b) => a.x - b.x);
}

export function buildSeries(spec: FigureSpec, rows: CurveRow[]): Series[] {
  const wantKind = spec.kind === "pt_vs_theta" ? "theta" : "kappa";
  const pool = rows.filter((r) => r.gridKind === wantKind);
  if (pool.length === 0) {
    throw new SeriesError(`no ${wantKind} rows in the input csv`);
  }
  const psis = spec.psis ?? uniqueSorted(pool.map((r) => r.psiDeg));
  const xf = spec.xFactor;

  const result: Series[] = [];
  const push = (label: string, selected: CurveRow[], xOf: (r: CurveRow) => number) => {
    if (selected.length === 0) {
      throw new SeriesError(`empty series: ${label.replace(/°/g, "deg")}`);
    }
    result.push({ label, points: sortedPoints(selected, xOf) });
  };

  if (spec.kind === "rc_vs_kappa") {
    const lambdas = spec.lambdas ?? uniqueSorted(pool.map((r) => r.lambda));
    if (lambdas.length !== 1) {
      throw new SeriesError(
        `rc_vs_kappa needs exactly one density; found [${lambdas.join(", ")}], ` +
          `pick one with "lambdas"`,
      );
    }
    const lam = lambdas[0]!;
    const members = spec.members ?? (["M", "m"] as Member[]);
    for (const member of members) {
      for (const psi of psis) {
        push(
          `${memberName(member)}, ${fmtPsi(psi)}`,
          pool.filter(
            (r) => r.member === member && near(r.psiDeg, psi) && near(r.lambda, lam),
          ),
          (r) => r.gridValue * xf,
        );
      }
    }
  } else if (spec.kind === "rc_vs_density") {
    const members = spec.members ?? (["M"] as Member[]);
    const kappas = spec.kappas;
    if (!kappas) {
      throw new SeriesError(`rc_vs_density needs "kappas": the rate knots to track`);
    }
    for (const member of members) {
      for (const psi of psis) {
        for (const kappa of kappas) {
          const label =
            members.length > 1
              ? `${memberName(member)}, ${fmtPsi(psi)}, ${fmtKappa(kappa)}`
              : `${fmtPsi(psi)}, ${fmtKappa(kappa)}`;
          push(
            label,
            pool.filter(
              (r) =>
                r.member === member &&
                near(r.psiDeg, psi) &&
                near(r.gridValue, kappa),
            ),
            (r) => r.lambda * xf,
          );
        }
      }
    }
  } else {
    const members = spec.members ?? (["M"] as Member[]);
    const lambdas = spec.lambdas ?? uniqueSorted(pool.map((r) => r.lambda));
    for (const member of members) {
      for (const lam of lambdas) {
        for (const psi of psis) {
          const label =
            members.length > 1
              ? `${memberName(member)}, ${fmtLambda(lam)}, ${fmtPsi(psi)}`
              : `${fmtLambda(lam)}, ${fmtPsi(psi)}`;
          push(
            label,
            pool.filter(
              (r) =>
                r.member === member && near(r.lambda, lam) && near(r.psiDeg, psi),
            ),
            (r) => r.gridValue * xf,
          );
        }
      }
    }
  }
  return result;
}
