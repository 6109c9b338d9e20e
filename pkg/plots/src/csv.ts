/** Headed numeric CSV parsing with loud column validation. */

export interface Table {
  header: string[];
  rows: number[][];
}

export class MissingColumnError extends Error {
  constructor(column: string, header: string[]) {
    super(`missing column '${column}' (file has: ${header.join(", ")})`);
    this.name = "MissingColumnError";
  }
}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length < 3) {
    throw new Error("CSV needs a header and at least two data rows");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new Error(`row ${i}: expected ${header.length} fields, got ${parts.length}`);
    }
    const row = parts.map((p) => Number(p));
    if (row.some((v) => Number.isNaN(v))) {
      throw new Error(`row ${i}: non-numeric field in '${lines[i]}'`);
    }
    rows.push(row);
  }
  return { header, rows };
}

/** Column values by name; throws MissingColumnError when absent. */
export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new MissingColumnError(name, table.header);
  }
  return table.rows.map((r) => r[idx]);
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.header.includes(name)) {
      throw new MissingColumnError(name, table.header);
    }
  }
}
