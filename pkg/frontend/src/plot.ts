#!/usr/bin/env node
/**
 * viscowave figure renderer
 *
 * Reads a run manifest plus the snapshot files it lists and writes one
 * multi-panel SVG: a row per snapshot time, columns |u|, v, w.
 *
 * Usage:
 *   plot <manifest.json> [--window a b] [--out figure.svg]
 *
 * The |u| panels are recomputed from the re/im columns; if the stored
 * abs_u column deviates by more than 1e-12 a warning is printed (the
 * figure is still produced).  Exit codes: 0 success, 1 usage error,
 * 2 unreadable or inconsistent inputs.
 */

import { readFile, writeFile } from "fs/promises";
import path from "path";

import { renderFigure, type FigureRow } from "./figure.js";
import {
  absConsistencyGap,
  assertSharedGrid,
  parseManifest,
  parseSnapshot,
  type SnapshotData,
} from "./snapshot.js";

const ABS_CONSISTENCY_TOL = 1e-12;

export interface PlotOptions {
  manifestPath: string;
  window?: [number, number];
  out?: string;
}

export interface PlotResult {
  outPath: string;
  rows: number;
  warnings: string[];
}

// ---------------------------------------------------------------------------
// argument parsing
// ---------------------------------------------------------------------------

export function parseArgs(argv: string[]): PlotOptions {
  const positional: string[] = [];
  let window: [number, number] | undefined;
  let out: string | undefined;

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--window") {
      const a = Number(argv[i + 1]);
      const b = Number(argv[i + 2]);
      if (Number.isNaN(a) || Number.isNaN(b) || !(a < b)) {
        throw new UsageError("--window needs two numbers a b with a < b");
      }
      window = [a, b];
      i += 2;
    } else if (arg === "--out") {
      out = argv[i + 1];
      if (!out) throw new UsageError("--out needs a file path");
      i += 1;
    } else if (arg.startsWith("--")) {
      throw new UsageError(`unknown option ${arg}`);
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 1) {
    throw new UsageError("usage: plot <manifest.json> [--window a b] [--out file]");
  }
  return { manifestPath: positional[0], window, out };
}

export class UsageError extends Error {}

// ---------------------------------------------------------------------------
// pipeline
// ---------------------------------------------------------------------------

export async function runPlot(options: PlotOptions): Promise<PlotResult> {
  const manifestText = await readFile(options.manifestPath, "utf-8");
  const manifest = parseManifest(manifestText);
  const baseDir = path.dirname(options.manifestPath);

  const warnings: string[] = [];
  const rows: FigureRow[] = [];
  const snaps: SnapshotData[] = [];

  for (const entry of manifest.snapshots) {
    const snapPath = path.join(baseDir, entry.file);
    const snap = parseSnapshot(await readFile(snapPath, "utf-8"));
    const gap = absConsistencyGap(snap);
    if (gap > ABS_CONSISTENCY_TOL) {
      warnings.push(
        `${entry.file}: abs_u column deviates from hypot(re_u, im_u) by ${gap.toExponential(2)}`,
      );
    }
    snaps.push(snap);
    rows.push({ label: `t = ${entry.actual_t.toPrecision(6)}`, data: snap });
  }

  assertSharedGrid(snaps);

  const svg = renderFigure({ rows, window: options.window });
  const outPath = options.out ?? path.join(baseDir, "figure.svg");
  await writeFile(outPath, svg);

  return { outPath, rows: rows.length, warnings };
}

async function main(): Promise<number> {
  let options: PlotOptions;
  try {
    options = parseArgs(process.argv.slice(2));
  } catch (err) {
    console.error(`error[usage]: ${(err as Error).message}`);
    return 1;
  }

  try {
    const result = await runPlot(options);
    for (const warning of result.warnings) {
      console.warn(`warning: ${warning}`);
    }
    console.log(
      `wrote ${result.outPath} (${result.rows} snapshot rows, ` +
        `${result.warnings.length} warnings)`,
    );
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`error[usage]: ${err.message}`);
      return 1;
    }
    console.error(`error[input]: ${(err as Error).message}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;

if (invokedDirectly) {
  main().then((code) => {
    process.exitCode = code;
  });
}
