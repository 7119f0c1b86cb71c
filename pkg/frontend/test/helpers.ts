/** Synthetic CSVs conforming to the simulator's curve contract. */

export const HEADER =
  "sweep_id,lambda,psi_deg,member,grid_kind,grid_value,estimate,ci_low,ci_high,n_effective";

const clamp01 = (v: number) => Math.min(1, Math.max(0, v));

/** Smooth fake estimate: decreasing in the grid value, ordered in psi/member. */
function fakeEstimate(
  lambda: number,
  psi: number,
  member: "M" | "m",
  kind: "theta" | "kappa",
  gridValue: number,
): number {
  const scale = kind === "kappa" ? 6e9 : 10;
  const base = 1 / (1 + gridValue / scale);
  const beam = psi === 45 ? 1.0 : 0.85;
  const who = member === "M" ? 1.0 : 0.8;
  const load = 1 - lambda;
  const y = clamp01(base * beam * who * load);
  return kind === "theta" ? 1 - y : y; // outage rises with the threshold
}

export interface CsvShape {
  lambdas?: number[];
  psis?: number[];
  members?: ("M" | "m")[];
  kind?: "theta" | "kappa";
  grid?: number[];
}

export function makeCurveCsv(shape: CsvShape = {}): string {
  const lambdas = shape.lambdas ?? [0.01, 0.02, 0.03, 0.04, 0.05, 0.06];
  const psis = shape.psis ?? [45, 90];
  const members = shape.members ?? ["M", "m"];
  const kind = shape.kind ?? "kappa";
  const grid =
    shape.grid ??
    (kind === "kappa" ? [0.5e9, 3e9, 4.5e9, 6e9, 9e9, 12e9] : [0.1, 1, 10, 100, 1000]);

  const lines = [HEADER];
  let index = 0;
  for (const lambda of lambdas) {
    for (const psi of psis) {
      const sweepId = `${String(index).padStart(2, "0")}-psi${psi}-lam${lambda}`;
      index += 1;
      for (const member of members) {
        for (const g of grid) {
          const y = fakeEstimate(lambda, psi, member, kind, g);
          const lo = clamp01(y - 0.02);
          const hi = clamp01(y + 0.02);
          lines.push(
            [
              sweepId,
              lambda,
              psi,
              member,
              kind,
              g,
              y.toFixed(6),
              lo.toFixed(6),
              hi.toFixed(6),
              4000,
            ].join(","),
          );
        }
      }
    }
  }
  return lines.join("\n") + "\n";
}
