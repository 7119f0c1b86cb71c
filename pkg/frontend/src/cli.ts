#!/usr/bin/env node
/** plot --spec <file> [--spec <file> ...] --out <dir> */

import { parseArgs } from "node:util";

import { renderFigureFile } from "./render.js";

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        spec: { type: "string", multiple: true },
        out: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: false,
    });
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  if (parsed.values.help) {
    process.stdout.write("usage: plot --spec <figure.json> [--spec ...] --out <dir>\n");
    return 0;
  }
  const specs = parsed.values.spec ?? [];
  const out = parsed.values.out;
  if (specs.length === 0 || !out) {
    process.stderr.write("usage: plot --spec <figure.json> [--spec ...] --out <dir>\n");
    return 2;
  }
  for (const specPath of specs) {
    try {
      const written = renderFigureFile(specPath, out);
      process.stdout.write(`${specPath} -> ${written}\n`);
    } catch (err) {
      process.stderr.write(`${specPath}: ${(err as Error).message}\n`);
      return 1;
    }
  }
  return 0;
}

// invoked directly, not imported
if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
