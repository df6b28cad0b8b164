/** Family comparison: one request per family, a table sorted by power.
 *
 * Partial failures keep their row with an error chip; the ordering
 * highlight marks whether the expected dominance (optimal above
 * arm-specific above fixed-subset) holds among the successful rows.
 */

import { ApiClient, ServiceError } from "./client.js";
import type { CaseStudyRequest, Family } from "./types.js";
import { ALL_FAMILIES } from "./types.js";

export interface CompareRow {
  family: Family;
  power: number | null;
  powerSe: number | null;
  size: number | null;
  error: string | null;
}

export function sortRows(rows: CompareRow[]): CompareRow[] {
  return [...rows].sort((a, b) => {
    if (a.power === null && b.power === null) return 0;
    if (a.power === null) return 1;
    if (b.power === null) return -1;
    return b.power - a.power;
  });
}

const DOMINANCE: Family[] = ["optimal-lp", "arm-specific-cutoffs", "wald-fixed-subset"];

/** True when every successful pair respects the expected ordering. */
export function dominanceHolds(rows: CompareRow[]): boolean {
  const power = new Map<Family, number>();
  for (const row of rows) {
    if (row.power !== null) {
      power.set(row.family, row.power);
    }
  }
  for (let i = 0; i + 1 < DOMINANCE.length; i++) {
    const hi = power.get(DOMINANCE[i]);
    const lo = power.get(DOMINANCE[i + 1]);
    if (hi !== undefined && lo !== undefined && hi < lo) {
      return false;
    }
  }
  return true;
}

export async function compareFamilies(
  client: ApiClient,
  base: CaseStudyRequest,
  families: Family[] = ALL_FAMILIES,
): Promise<CompareRow[]> {
  const settled = await Promise.allSettled(
    families.map((family) => client.casestudy({ ...base, family })),
  );
  const rows: CompareRow[] = settled.map((outcome, k) => {
    if (outcome.status === "fulfilled") {
      const r = outcome.value.envelope.result;
      return {
        family: families[k],
        power: r.power,
        powerSe: r.power_se,
        size: r.size,
        error: null,
      };
    }
    const err = outcome.reason;
    const message =
      err instanceof ServiceError ? `${err.detail.code}: ${err.detail.message}` : String(err);
    return { family: families[k], power: null, powerSe: null, size: null, error: message };
  });
  return sortRows(rows);
}
