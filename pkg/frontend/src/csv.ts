import Papa from "papaparse";

/** Column order of the summary CSV produced by the study harness. */
export const SUMMARY_COLUMNS = [
  "density_id",
  "n",
  "M",
  "x",
  "true_f",
  "median",
  "q25",
  "q75",
  "hinge_lo",
  "hinge_hi",
] as const;

/** Sentinel order marking rows of the adaptively selected estimate. */
export const CHOSEN_SENTINEL = -1;

export class SchemaError extends Error {}

export interface SummaryRow {
  densityId: string;
  n: number;
  order: number;
  x: number;
  trueF: number;
  median: number;
  q25: number;
  q75: number;
  hingeLo: number;
  hingeHi: number;
  /** Present only on sentinel rows (order === CHOSEN_SENTINEL). */
  chosenM?: number;
}

function numeric(cells: string[], index: number, column: string, line: number): number {
  const value = Number(cells[index]);
  if (cells[index] === "" || !Number.isFinite(value)) {
    throw new SchemaError(
      `line ${line}: non-numeric value ${JSON.stringify(cells[index])} in column ${column}`
    );
  }
  return value;
}

function parseRow(cells: string[], line: number): SummaryRow {
  const expected = SUMMARY_COLUMNS.length;
  if (cells.length < expected) {
    throw new SchemaError(
      `line ${line}: expected ${expected} fields, found ${cells.length}`
    );
  }
  const order = numeric(cells, 2, "M", line);
  if (!Number.isInteger(order)) {
    throw new SchemaError(`line ${line}: column M must be an integer, found ${cells[2]}`);
  }
  const sentinel = order === CHOSEN_SENTINEL;
  if (sentinel && cells.length !== expected + 1) {
    throw new SchemaError(
      `line ${line}: M=${CHOSEN_SENTINEL} rows carry a trailing chosen_M field`
    );
  }
  if (!sentinel && cells.length !== expected) {
    throw new SchemaError(
      `line ${line}: expected ${expected} fields, found ${cells.length}`
    );
  }
  const row: SummaryRow = {
    densityId: cells[0],
    n: numeric(cells, 1, "n", line),
    order,
    x: numeric(cells, 3, "x", line),
    trueF: numeric(cells, 4, "true_f", line),
    median: numeric(cells, 5, "median", line),
    q25: numeric(cells, 6, "q25", line),
    q75: numeric(cells, 7, "q75", line),
    hingeLo: numeric(cells, 8, "hinge_lo", line),
    hingeHi: numeric(cells, 9, "hinge_hi", line),
  };
  if (sentinel) {
    row.chosenM = numeric(cells, expected, "chosen_M", line);
  }
  return row;
}

/** Parse the study summary CSV; every schema violation names its column or line. */
export function parseSummaryCsv(text: string): SummaryRow[] {
  if (text.trim() === "") {
    throw new SchemaError("empty CSV: missing header");
  }
  const parsed = Papa.parse<string[]>(text, { skipEmptyLines: true });
  // Delimiter auto-detection grumbles on degenerate input but still splits on
  // commas; only structural errors make the text unparseable.
  const fatal = parsed.errors.filter((e) => e.code !== "UndetectableDelimiter");
  if (fatal.length > 0) {
    throw new SchemaError(`unparseable CSV: ${fatal[0].message}`);
  }
  const lines = parsed.data;
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: missing header");
  }
  const header = lines[0];
  for (let i = 0; i < SUMMARY_COLUMNS.length; i++) {
    if (i >= header.length) {
      throw new SchemaError(`missing column ${SUMMARY_COLUMNS[i]}`);
    }
    if (header[i] !== SUMMARY_COLUMNS[i]) {
      throw new SchemaError(
        `expected column ${i + 1} to be ${SUMMARY_COLUMNS[i]}, found ${header[i]}`
      );
    }
  }
  if (header.length > SUMMARY_COLUMNS.length) {
    throw new SchemaError(`unexpected extra column ${header[SUMMARY_COLUMNS.length]}`);
  }
  const body = lines.slice(1);
  if (body.length === 0) {
    throw new SchemaError("no data rows");
  }
  return body.map((cells, i) => parseRow(cells, i + 2));
}
