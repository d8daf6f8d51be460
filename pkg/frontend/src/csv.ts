/**
 * Reader for the simulator's CSV result files: '#'-prefixed metadata
 * lines, a header row, then numeric rows. The renderers never
 * recompute physics; they only consume these columns.
 */

export interface ResultTable {
  metadata: Record<string, string>;
  columns: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

export function parseResultCsv(text: string): ResultTable {
  const metadata: Record<string, string> = {};
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  let headerIdx = 0;
  while (headerIdx < lines.length && lines[headerIdx].startsWith("#")) {
    const body = lines[headerIdx].replace(/^#\s*/, "");
    const sep = body.indexOf(": ");
    if (sep > 0) {
      metadata[body.slice(0, sep)] = body.slice(sep + 2);
    }
    headerIdx += 1;
  }
  if (headerIdx >= lines.length) {
    throw new SchemaError("no header row found");
  }
  const columns = lines[headerIdx].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (const line of lines.slice(headerIdx + 1)) {
    const cells = line.split(",").map(Number);
    if (cells.length !== columns.length || cells.some(Number.isNaN)) {
      throw new SchemaError(`malformed data row: ${line}`);
    }
    rows.push(cells);
  }
  if (rows.length === 0) {
    throw new SchemaError("result file has no data rows");
  }
  return { metadata, columns, rows };
}

/** Column accessor; names the missing column in the error. */
export function column(table: ResultTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(
      `missing column '${name}' (file has: ${table.columns.join(", ")})`,
    );
  }
  return table.rows.map((row) => row[idx]);
}

export function requireColumns(table: ResultTable, names: string[]): void {
  for (const name of names) {
    column(table, name);
  }
}
