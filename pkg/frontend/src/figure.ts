/**
 * Figure specification: what to draw from which CSV. A spec file is a JSON
 * document mirroring this shape; unknown keys are rejected.
 */

import { z } from "zod";

const memberSchema = z.union([z.literal("M"), z.literal("m")]);

const range = z.tuple([z.number(), z.number()]);

export const figureSpecSchema = z
  .object({
    kind: z.enum(["rc_vs_kappa", "rc_vs_density", "pt_vs_theta"]),
    csv: z.string().min(1),
    output: z.string().min(1),
    // series selection; absent lists default per kind (see series.ts)
    members: z.array(memberSchema).nonempty().optional(),
    psis: z.array(z.number()).nonempty().optional(),
    lambdas: z.array(z.number()).nonempty().optional(),
    kappas: z.array(z.number()).nonempty().optional(),
    // presentation
    title: z.string().optional(),
    xLabel: z.string().optional(),
    yLabel: z.string().optional(),
    xFactor: z.number().positive().default(1),
    xScale: z.enum(["linear", "log"]).optional(),
    xRange: range.optional(),
    yRange: range.optional(),
    width: z.number().int().min(320).default(860),
    height: z.number().int().min(240).default(520),
  })
  .strict();

export type FigureSpec = z.infer<typeof figureSpecSchema>;

export class SpecError extends Error {}

export function parseFigureSpec(text: string, name = "figure spec"): FigureSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SpecError(`${name}: not valid JSON: ${(err as Error).message}`);
  }
  const result = figureSpecSchema.safeParse(raw);
  if (!result.success) {
    const issues = result.error.issues
      .map((i) => `${i.path.join(".") || "(root)"}: ${i.message}`)
      .join("; ");
    throw new SpecError(`${name}: ${issues}`);
  }
  return result.data;
}
