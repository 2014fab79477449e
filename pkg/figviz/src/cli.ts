#!/usr/bin/env node
/**
 * figviz <kind> <run-dir>... -o <path.svg>
 *
 * kind: trace | raster | entrainment-panel
 * Reads trace.csv / events.json / summary.json from each run directory and
 * writes one deterministic SVG. Exits 1 with a diagnostic on missing or
 * malformed inputs.
 */

import { writeFileSync } from "fs";

import { FigureKind, FigureRequest, renderFigure } from "./charts.js";
import { FigvizError, loadRunDir } from "./rundir.js";

const KINDS: FigureKind[] = ["trace", "raster", "entrainment-panel"];

const USAGE = `usage: figviz <kind> <run-dir>... -o <path.svg>
  kind: ${KINDS.join(" | ")}`;

export function parseArgs(argv: string[]): FigureRequest {
  const args = [...argv];
  let outPath: string | null = null;
  const positional: string[] = [];
  while (args.length) {
    const arg = args.shift()!;
    if (arg === "-o" || arg === "--out") {
      const value = args.shift();
      if (!value) throw new FigvizError(`${arg} needs a path`);
      outPath = value;
    } else if (arg === "-h" || arg === "--help") {
      throw new FigvizError(USAGE);
    } else {
      positional.push(arg);
    }
  }
  if (positional.length < 2) {
    throw new FigvizError(USAGE);
  }
  const kind = positional[0] as FigureKind;
  if (!KINDS.includes(kind)) {
    throw new FigvizError(`unknown figure kind ${JSON.stringify(positional[0])}; expected ${KINDS.join(", ")}`);
  }
  if (!outPath) {
    throw new FigvizError("an output path is required (-o <path.svg>)");
  }
  return { kind, runDirs: positional.slice(1), outPath };
}

export function render(request: FigureRequest): void {
  const runs = request.runDirs.map(loadRunDir);
  const svg = renderFigure(request.kind, runs);
  writeFileSync(request.outPath, svg);
}

export function main(argv: string[]): number {
  try {
    const request = parseArgs(argv);
    render(request);
    console.log(`wrote ${request.outPath}`);
    return 0;
  } catch (err) {
    if (err instanceof FigvizError) {
      console.error(`figviz: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const isDirectRun = process.argv[1] && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
