import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { intersectionHeatmap, perSeedChart, sweepChart } from "../src/charts.js";
import { SchemaError, parseCsv } from "../src/csv.js";
import { main, render } from "../src/render.js";

const SWEEP = [
  "method,k,influence",
  "c_tier,5,64",
  "c_tier,10,78",
  "lt_greedy,5,49",
  "lt_greedy,10,59",
].join("\n");

const PER_SEED = [
  "index,user,marginal,cumulative",
  "1,4,15,15",
  "2,99,6,21",
  "3,7,2,23",
].join("\n");

const INTERSECT = [
  "method,c_tier,lt_greedy",
  "c_tier,8,1",
  "lt_greedy,1,8",
].join("\n");

function tempFile(content: string, name = "input.csv"): string {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

describe("sweepChart", () => {
  it("draws one polyline per method", () => {
    const svg = sweepChart(parseCsv(SWEEP), "sweep");
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain("c_tier");
    expect(svg).toContain("lt_greedy");
  });

  it("rejects missing and unknown columns by name", () => {
    const bad = parseCsv("method,k,spread\nc_tier,5,64");
    expect(() => sweepChart(bad, "t")).toThrowError(/missing columns: influence/);
    expect(() => sweepChart(bad, "t")).toThrowError(/unknown columns: spread/);
  });

  it("rejects non-numeric cells", () => {
    const bad = parseCsv("method,k,influence\nc_tier,five,64");
    expect(() => sweepChart(bad, "t")).toThrowError(SchemaError);
  });
});

describe("perSeedChart", () => {
  it("draws one bar per row", () => {
    const svg = perSeedChart(parseCsv(PER_SEED), "per seed");
    expect(svg.match(/<rect x=/g)).toHaveLength(3);
  });

  it("rejects the sweep schema", () => {
    expect(() => perSeedChart(parseCsv(SWEEP), "t")).toThrowError(SchemaError);
  });
});

describe("intersectionHeatmap", () => {
  it("draws a full matrix with annotations", () => {
    const svg = intersectionHeatmap(parseCsv(INTERSECT), "overlap");
    expect(svg.match(/<rect x=/g)).toHaveLength(4);
    expect(svg).toContain(">8<");
  });

  it("rejects a non-square table", () => {
    const bad = parseCsv("method,c_tier,lt_greedy\nc_tier,8,1");
    expect(() => intersectionHeatmap(bad, "t")).toThrowError(/expected 2 rows/);
  });

  it("rejects mismatched row labels", () => {
    const bad = parseCsv("method,c_tier,lt_greedy\nc_tier,8,1\npagerank,1,8");
    expect(() => intersectionHeatmap(bad, "t")).toThrowError(/expected "lt_greedy"/);
  });
});

describe("render", () => {
  it("writes an SVG file for every kind", () => {
    for (const [kind, content] of [
      ["sweep", SWEEP],
      ["per-seed", PER_SEED],
      ["intersection-heatmap", INTERSECT],
    ] as const) {
      const csv = tempFile(content);
      const out = csv.replace(".csv", ".svg");
      render({ csv, kind, out });
      const svg = readFileSync(out, "utf-8");
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg).toContain("</svg>");
    }
  });

  it("is deterministic for identical input", () => {
    const csv = tempFile(SWEEP);
    const a = csv.replace(".csv", "-a.svg");
    const b = csv.replace(".csv", "-b.svg");
    render({ csv, kind: "sweep", out: a });
    render({ csv, kind: "sweep", out: b });
    expect(readFileSync(a, "utf-8")).toBe(readFileSync(b, "utf-8"));
  });

  it("does not modify the input CSV", () => {
    const csv = tempFile(SWEEP);
    render({ csv, kind: "sweep", out: csv.replace(".csv", ".svg") });
    expect(readFileSync(csv, "utf-8")).toBe(SWEEP);
  });
});

describe("cli", () => {
  it("exits 0 on success", () => {
    const csv = tempFile(SWEEP);
    const out = csv.replace(".csv", ".svg");
    expect(main(["--csv", csv, "--kind", "sweep", "--out", out])).toBe(0);
  });

  it("exits 2 on schema mismatch", () => {
    const csv = tempFile(PER_SEED);
    const out = csv.replace(".csv", ".svg");
    expect(main(["--csv", csv, "--kind", "sweep", "--out", out])).toBe(2);
  });

  it("exits 1 on bad flags", () => {
    expect(main(["--csv", "x.csv"])).toBe(1);
    expect(main(["--csv", "x.csv", "--kind", "pie", "--out", "y.svg"])).toBe(1);
  });
});
