/**
 * Minimal CSV reading for the harness output schemas.
 *
 * Each chart kind expects an exact header; unknown or missing columns are
 * rejected so a schema drift in the producing side fails loudly here.
 */

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV file");
  }
  const split = (line: string) => line.split(",").map((cell) => cell.trim());
  const header = split(lines[0]);
  const rows = lines.slice(1).map((line, i) => {
    const cells = split(line);
    if (cells.length !== header.length) {
      throw new SchemaError(`row ${i + 2} has ${cells.length} cells, expected ${header.length}`);
    }
    return cells;
  });
  return { header, rows };
}

/** Exact-header check: reports both missing and unexpected columns. */
export function requireHeader(table: Table, expected: string[]): void {
  const got = table.header;
  const missing = expected.filter((c) => !got.includes(c));
  const unknown = got.filter((c) => !expected.includes(c));
  if (missing.length || unknown.length) {
    const parts = [];
    if (missing.length) parts.push(`missing columns: ${missing.join(", ")}`);
    if (unknown.length) parts.push(`unknown columns: ${unknown.join(", ")}`);
    throw new SchemaError(parts.join("; "));
  }
  if (expected.some((c, i) => got[i] !== c)) {
    throw new SchemaError(`columns out of order: expected ${expected.join(",")}, got ${got.join(",")}`);
  }
}

export function numeric(cell: string, column: string, row: number): number {
  const value = Number(cell);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`non-numeric value ${JSON.stringify(cell)} in column ${column}, row ${row}`);
  }
  return value;
}
