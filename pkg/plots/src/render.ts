/**
 * Render a harness CSV as an SVG chart.
 * Usage: tltim-render --csv <path> --kind <sweep|per-seed|intersection-heatmap> --out <path> [--title <text>]
 */

import { readFileSync, writeFileSync } from "node:fs";

import { intersectionHeatmap, perSeedChart, sweepChart } from "./charts.js";
import { SchemaError, parseCsv } from "./csv.js";

export interface PlotSpec {
  csv: string;
  kind: "sweep" | "per-seed" | "intersection-heatmap";
  out: string;
  title?: string;
}

const KINDS = {
  "sweep": sweepChart,
  "per-seed": perSeedChart,
  "intersection-heatmap": intersectionHeatmap,
} as const;

export function render(spec: PlotSpec): string {
  const build = KINDS[spec.kind];
  if (!build) {
    throw new SchemaError(`unknown chart kind ${JSON.stringify(spec.kind)}`);
  }
  const table = parseCsv(readFileSync(spec.csv, "utf-8"));
  const svg = build(table, spec.title ?? spec.kind);
  writeFileSync(spec.out, svg + "\n");
  return spec.out;
}

export function parseArgs(argv: string[]): PlotSpec {
  const values: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    if (!flag.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`usage: --csv <path> --kind <kind> --out <path> [--title <text>]`);
    }
    values[flag.slice(2)] = argv[i + 1];
  }
  for (const required of ["csv", "kind", "out"]) {
    if (!(required in values)) {
      throw new Error(`missing --${required}`);
    }
  }
  if (!(values.kind in KINDS)) {
    throw new Error(`--kind must be one of: ${Object.keys(KINDS).join(", ")}`);
  }
  return {
    csv: values.csv,
    kind: values.kind as PlotSpec["kind"],
    out: values.out,
    title: values.title,
  };
}

export function main(argv: string[]): number {
  try {
    const out = render(parseArgs(argv));
    console.log(out);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return err instanceof SchemaError ? 2 : 1;
  }
}

import { fileURLToPath } from "node:url";

if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
