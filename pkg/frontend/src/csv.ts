/**
 * Reader for the simulator's CSV artifacts.
 *
 * Format: optional leading comment lines starting with `#` carrying
 * `key=value` metadata, then a mandatory header row, then numeric rows
 * (`.` decimal, no quoting, row-major over sweep axes).
 */

export interface Table {
  columns: string[];
  rows: number[][];
  meta: Record<string, string>;
}

export class CsvError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  const meta: Record<string, string> = {};
  let idx = 0;
  while (idx < lines.length && lines[idx].startsWith("#")) {
    for (const cell of lines[idx].split(",")) {
      const body = cell.replace(/^#\s*/, "");
      const eq = body.indexOf("=");
      if (eq > 0) meta[body.slice(0, eq)] = body.slice(eq + 1);
    }
    idx += 1;
  }
  if (idx >= lines.length) {
    throw new CsvError("empty CSV: no header row");
  }
  const columns = lines[idx].split(",").map((c) => c.trim());
  idx += 1;
  const rows: number[][] = [];
  for (; idx < lines.length; idx++) {
    const cells = lines[idx].split(",");
    if (cells.length !== columns.length) {
      throw new CsvError(
        `row ${rows.length + 1} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(cells.map(Number));
  }
  if (rows.length === 0) {
    throw new CsvError("empty CSV: header but no data rows");
  }
  return { columns, rows, meta };
}

export function column(table: Table, name: string): number[] {
  const k = table.columns.indexOf(name);
  if (k < 0) {
    throw new CsvError(`missing column '${name}' (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((r) => r[k]);
}

export function requireColumns(table: Table, names: string[]): void {
  for (const n of names) {
    if (!table.columns.includes(n)) {
      throw new CsvError(`missing column '${n}' (have: ${table.columns.join(", ")})`);
    }
  }
}

/** Distinct ordered values of a sweep axis column (row-major grids). */
export function axisValues(values: number[]): number[] {
  const out: number[] = [];
  for (const v of values) {
    if (out.length === 0 || !out.includes(v)) out.push(v);
  }
  return out;
}
