/**
 * SVG chart builders for the three harness CSV schemas.
 *
 * Everything is rendered with fixed geometry and a fixed palette so that the
 * same input always produces byte-identical SVG.
 */

import { SchemaError, Table, numeric, requireHeader } from "./csv.js";

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 48, right: 150, bottom: 56, left: 64 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function svgOpen(title: string): string[] {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(title)}</text>`,
  ];
}

function axes(xLabel: string, yLabel: string): string[] {
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + PLOT_H;
  return [
    `<line x1="${x0}" y1="${y0}" x2="${x0 + PLOT_W}" y2="${y0}" stroke="black"/>`,
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`,
    `<text x="${x0 + PLOT_W / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="12">${esc(xLabel)}</text>`,
    `<text x="16" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 ${MARGIN.top + PLOT_H / 2})">${esc(yLabel)}</text>`,
  ];
}

/** Influence-versus-budget line chart, one line per method. */
export function sweepChart(table: Table, title: string): string {
  requireHeader(table, ["method", "k", "influence"]);
  if (table.rows.length === 0) throw new SchemaError("sweep CSV has no data rows");
  const series = new Map<string, { k: number; y: number }[]>();
  table.rows.forEach((row, i) => {
    const k = numeric(row[1], "k", i + 2);
    const y = numeric(row[2], "influence", i + 2);
    if (!series.has(row[0])) series.set(row[0], []);
    series.get(row[0])!.push({ k, y });
  });
  const ks = [...new Set([...series.values()].flat().map((p) => p.k))].sort((a, b) => a - b);
  const ys = [...series.values()].flat().map((p) => p.y);
  const yMax = Math.max(...ys, 1);
  const xPos = (k: number) =>
    MARGIN.left + ((k - ks[0]) / Math.max(ks[ks.length - 1] - ks[0], 1)) * PLOT_W;
  const yPos = (y: number) => MARGIN.top + PLOT_H - (y / yMax) * PLOT_H;

  const parts = svgOpen(title).concat(axes("seed set size", "influenced users"));
  ks.forEach((k) => {
    parts.push(`<text x="${xPos(k)}" y="${MARGIN.top + PLOT_H + 16}" text-anchor="middle" font-size="10">${fmt(k)}</text>`);
  });
  [0, 0.5, 1].forEach((f) => {
    const v = yMax * f;
    parts.push(`<text x="${MARGIN.left - 6}" y="${yPos(v) + 4}" text-anchor="end" font-size="10">${fmt(v)}</text>`);
  });
  let idx = 0;
  for (const [method, pts] of series) {
    const color = PALETTE[idx % PALETTE.length];
    const sorted = [...pts].sort((a, b) => a.k - b.k);
    const path = sorted.map((p) => `${xPos(p.k).toFixed(1)},${yPos(p.y).toFixed(1)}`).join(" ");
    parts.push(`<polyline points="${path}" fill="none" stroke="${color}" stroke-width="2"/>`);
    sorted.forEach((p) => {
      parts.push(`<circle cx="${xPos(p.k).toFixed(1)}" cy="${yPos(p.y).toFixed(1)}" r="3" fill="${color}"/>`);
    });
    const ly = MARGIN.top + 16 * idx;
    parts.push(`<line x1="${WIDTH - MARGIN.right + 8}" y1="${ly}" x2="${WIDTH - MARGIN.right + 28}" y2="${ly}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${WIDTH - MARGIN.right + 32}" y="${ly + 4}" font-size="11">${esc(method)}</text>`);
    idx += 1;
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** Per-seed marginal influence bar chart. */
export function perSeedChart(table: Table, title: string): string {
  requireHeader(table, ["index", "user", "marginal", "cumulative"]);
  if (table.rows.length === 0) throw new SchemaError("per-seed CSV has no data rows");
  const bars = table.rows.map((row, i) => ({
    index: numeric(row[0], "index", i + 2),
    marginal: numeric(row[2], "marginal", i + 2),
  }));
  const yMax = Math.max(...bars.map((b) => b.marginal), 1);
  const slot = PLOT_W / bars.length;
  const barW = Math.min(slot * 0.8, 40);
  const parts = svgOpen(title).concat(axes("seed index", "marginal influence"));
  bars.forEach((b, i) => {
    const h = (b.marginal / yMax) * PLOT_H;
    const x = MARGIN.left + slot * i + (slot - barW) / 2;
    const y = MARGIN.top + PLOT_H - h;
    parts.push(`<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${barW.toFixed(1)}" height="${h.toFixed(1)}" fill="${PALETTE[0]}"/>`);
    if (bars.length <= 25 || b.index % 5 === 0) {
      parts.push(`<text x="${(x + barW / 2).toFixed(1)}" y="${MARGIN.top + PLOT_H + 16}" text-anchor="middle" font-size="10">${fmt(b.index)}</text>`);
    }
  });
  [0, 0.5, 1].forEach((f) => {
    const v = yMax * f;
    const y = MARGIN.top + PLOT_H - f * PLOT_H;
    parts.push(`<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end" font-size="10">${fmt(v)}</text>`);
  });
  parts.push("</svg>");
  return parts.join("\n");
}

/** Seed-set overlap heatmap with per-cell counts. */
export function intersectionHeatmap(table: Table, title: string): string {
  if (table.header[0] !== "method" || table.header.length < 2) {
    throw new SchemaError("intersection CSV must start with a 'method' column followed by one column per method");
  }
  const methods = table.header.slice(1);
  if (table.rows.length !== methods.length) {
    throw new SchemaError(`expected ${methods.length} rows (one per method), got ${table.rows.length}`);
  }
  table.rows.forEach((row, i) => {
    if (row[0] !== methods[i]) {
      throw new SchemaError(`row ${i + 2} is ${JSON.stringify(row[0])}, expected ${JSON.stringify(methods[i])}`);
    }
  });
  const values = table.rows.map((row, i) =>
    row.slice(1).map((cell, j) => numeric(cell, methods[j], i + 2)));
  const vMax = Math.max(...values.flat(), 1);
  const cell = Math.min(PLOT_W, PLOT_H) / methods.length;
  const parts = svgOpen(title);
  methods.forEach((m, j) => {
    const x = MARGIN.left + cell * j + cell / 2;
    parts.push(`<text x="${x.toFixed(1)}" y="${MARGIN.top - 8}" text-anchor="middle" font-size="10">${esc(m)}</text>`);
    const y = MARGIN.top + cell * j + cell / 2;
    parts.push(`<text x="${MARGIN.left - 6}" y="${y.toFixed(1)}" text-anchor="end" font-size="10">${esc(m)}</text>`);
  });
  values.forEach((row, i) => {
    row.forEach((v, j) => {
      const shade = Math.round(255 - (v / vMax) * 160);
      const x = MARGIN.left + cell * j;
      const y = MARGIN.top + cell * i;
      parts.push(`<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${cell.toFixed(1)}" height="${cell.toFixed(1)}" fill="rgb(${shade},${shade},255)" stroke="white"/>`);
      parts.push(`<text x="${(x + cell / 2).toFixed(1)}" y="${(y + cell / 2 + 4).toFixed(1)}" text-anchor="middle" font-size="11">${fmt(v)}</text>`);
    });
  });
  parts.push("</svg>");
  return parts.join("\n");
}
