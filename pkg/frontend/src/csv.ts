/**
 * Minimal CSV reading for the benchmark outputs: a header row, data rows,
 * and optional trailing `# key=value` comment lines (ignored here).
 */

export interface Table {
  header: string[];
  rows: string[][];
}

export class SchemaError extends Error {}

/** Parse CSV text (no quoting needed for the benchmark files). */
export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((l) => l.length > 0 && !l.startsWith("#"));
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows = lines.slice(1).map((l) => l.split(",").map((c) => c.trim()));
  for (const [i, row] of rows.entries()) {
    if (row.length !== header.length) {
      throw new SchemaError(
        `row ${i + 2} has ${row.length} fields, header has ${header.length}`
      );
    }
  }
  return { header, rows };
}

/** Column index lookup that names the missing column on failure. */
export function columnIndex(table: Table, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(
      `missing column '${name}' (have: ${table.header.join(", ")})`
    );
  }
  return idx;
}

/** Require all named columns up front, reporting the first missing one. */
export function requireColumns(table: Table, names: string[]): void {
  for (const n of names) {
    columnIndex(table, n);
  }
}

export function numeric(value: string): number {
  if (value === "" || value === "inf") {
    return NaN;
  }
  const x = Number(value);
  return Number.isFinite(x) ? x : NaN;
}
