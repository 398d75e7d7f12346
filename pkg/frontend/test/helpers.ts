import { SummaryRow } from "../src/csv.js";

export const HEADER = "density_id,n,M,x,true_f,median,q25,q75,hinge_lo,hinge_hi";

/** One plain data line; spread keys override the defaults. */
export function line(overrides: Partial<Record<string, string | number>> = {}): string {
  const cells: Record<string, string | number> = {
    density_id: "beta-3-3",
    n: 100,
    M: 25,
    x: 0.25,
    true_f: 1.0,
    median: 0.9,
    q25: 0.7,
    q75: 1.1,
    hinge_lo: 0.5,
    hinge_hi: 1.4,
    ...overrides,
  };
  return [
    cells.density_id,
    cells.n,
    cells.M,
    cells.x,
    cells.true_f,
    cells.median,
    cells.q25,
    cells.q75,
    cells.hinge_lo,
    cells.hinge_hi,
  ].join(",");
}

/** A full grid CSV: every density and order crossed over eval midpoints. */
export function gridCsv(
  densities: string[],
  orders: number[],
  points = 4
): string {
  const rows: string[] = [HEADER];
  for (const d of densities) {
    for (const m of orders) {
      for (let k = 0; k < points; k++) {
        const x = (k + 0.5) / points;
        let row = line({ density_id: d, M: m, x, median: 0.8 + 0.1 * k });
        if (m === -1) {
          row += ",50";
        }
        rows.push(row);
      }
    }
  }
  return rows.join("\n") + "\n";
}

/** Programmatic rows for layout tests, bypassing CSV text. */
export function makeRow(overrides: Partial<SummaryRow> = {}): SummaryRow {
  return {
    densityId: "beta-3-3",
    n: 100,
    order: 25,
    x: 0.25,
    trueF: 1.0,
    median: 0.9,
    q25: 0.7,
    q75: 1.1,
    hingeLo: 0.5,
    hingeHi: 1.4,
    ...overrides,
  };
}
