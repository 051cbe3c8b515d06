/**
 * Readers for the solver's CSV outputs: study tables (plain header row) and
 * run metrics (leading `#` comment lines, then the header row).
 */

import { readFileSync } from "node:fs";

export interface Table {
  columns: string[];
  /** column name -> values (NaN for blank cells) */
  numeric: Record<string, number[]>;
  /** raw string cells for non-numeric columns such as `interp`/`status` */
  text: Record<string, string[]>;
  rows: number;
}

export function parseTable(content: string): Table {
  const lines = content
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0 && !l.startsWith("#"));
  if (lines.length < 1) {
    throw new Error("table has no header row");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const numeric: Record<string, number[]> = {};
  const text: Record<string, string[]> = {};
  for (const c of columns) {
    numeric[c] = [];
    text[c] = [];
  }
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `row has ${cells.length} cells, expected ${columns.length}: '${line}'`,
      );
    }
    columns.forEach((c, i) => {
      const raw = cells[i].trim();
      text[c].push(raw);
      numeric[c].push(raw === "" ? NaN : Number(raw));
    });
  }
  return { columns, numeric, text, rows: lines.length - 1 };
}

export function readTable(path: string): Table {
  return parseTable(readFileSync(path, "utf-8"));
}
