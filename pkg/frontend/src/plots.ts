#!/usr/bin/env node
/**
 * Figure renderer for the benchmark CSVs.
 *
 * Usage:
 *   node dist/plots.js --kind llsp_vs_h      --in llsp.csv   --out llsp.svg
 *   node dist/plots.js --kind refine_curves  --in refine.csv --out refine.svg
 *   node dist/plots.js --kind lscore_table   --in lscore.csv --out lscore.svg
 */

import { readFileSync, writeFileSync } from "node:fs";
import { SchemaError } from "./csv.js";
import { FigureKind, render } from "./figures.js";

const KINDS: FigureKind[] = ["llsp_vs_h", "refine_curves", "lscore_table"];

function parseArgs(argv: string[]): { kind: FigureKind; inPath: string; outPath: string } {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const val = argv[i + 1];
    if (!key?.startsWith("--") || val === undefined) {
      throw new Error(`bad argument pair at '${key ?? ""}'`);
    }
    args.set(key.slice(2), val);
  }
  const kind = args.get("kind");
  const inPath = args.get("in");
  const outPath = args.get("out");
  if (!kind || !inPath || !outPath) {
    throw new Error("required: --kind <kind> --in <csv> --out <svg>");
  }
  if (!KINDS.includes(kind as FigureKind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  return { kind: kind as FigureKind, inPath, outPath };
}

export function main(argv: string[]): number {
  let opts;
  try {
    opts = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const text = readFileSync(opts.inPath, "utf-8");
    writeFileSync(opts.outPath, render(opts.kind, text));
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 1;
  }
  console.log(`SVG -> ${opts.outPath}`);
  return 0;
}

import { fileURLToPath } from "node:url";
if (process.argv[1] === fileURLToPath(import.meta.url)) {
  process.exit(main(process.argv.slice(2)));
}
