/** Rejection-region heatmaps from server-provided grids.
 *
 * The server supplies rejection probabilities on a lattice of
 * standardized effects; this module only arranges and colors them.
 */

import type { RegionPayload } from "./types.js";

/** Lift a per-mask region onto the full (t1, t2) plane.
 *
 * Mask bit 0 is arm 1 (varies along t1, the row index); bit 1 is arm 2
 * (varies along t2, the column index). Singleton masks broadcast along
 * the missing axis.
 */
export function regionMatrix(region: RegionPayload, mask: number): number[][] {
  const n = region.t_axis.length;
  const raw = region.masks[String(mask)];
  if (raw === undefined) {
    throw new Error(`region payload has no mask ${mask}`);
  }
  const out: number[][] = [];
  if (mask === 3) {
    const grid = raw as number[][];
    for (let i = 0; i < n; i++) {
      out.push(grid[i].slice());
    }
    return out;
  }
  const line = raw as number[];
  for (let i = 0; i < n; i++) {
    const row: number[] = [];
    for (let j = 0; j < n; j++) {
      row.push(mask === 1 ? line[i] : line[j]);
    }
    out.push(row);
  }
  return out;
}

/** Map a rejection probability to a fill color. */
export function cellColor(value: number): string {
  const v = Math.min(Math.max(value, 0), 1);
  const alpha = (0.08 + 0.92 * v).toFixed(3);
  return `rgba(202, 75, 40, ${alpha})`;
}

export interface RectSpec {
  x: number;
  y: number;
  w: number;
  h: number;
  color: string;
}

/** Lay the matrix out on a width x height canvas, row = t1, col = t2;
 * t1 increases upward, t2 increases rightward. */
export function layoutCells(
  matrix: number[][],
  width: number,
  height: number,
): RectSpec[] {
  const n = matrix.length;
  const cw = width / n;
  const ch = height / n;
  const rects: RectSpec[] = [];
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      if (matrix[i][j] <= 0) {
        continue;
      }
      rects.push({
        x: j * cw,
        y: height - (i + 1) * ch,
        w: cw,
        h: ch,
        color: cellColor(matrix[i][j]),
      });
    }
  }
  return rects;
}

export function drawRegion(
  canvas: HTMLCanvasElement,
  region: RegionPayload,
  mask: number,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#f7f5f2";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  for (const r of layoutCells(regionMatrix(region, mask), canvas.width, canvas.height)) {
    ctx.fillStyle = r.color;
    ctx.fillRect(r.x, r.y, r.w, r.h);
  }
  // axes through zero standardized effect
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(0, canvas.height / 2);
  ctx.lineTo(canvas.width, canvas.height / 2);
  ctx.moveTo(canvas.width / 2, 0);
  ctx.lineTo(canvas.width / 2, canvas.height);
  ctx.stroke();
}
