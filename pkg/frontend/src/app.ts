/** DOM wiring for the two-arm designer. Everything numeric shown here
 * came out of a service response; the client only formats and draws. */

import { ApiClient } from "./client.js";
import { compareFamilies, dominanceHolds } from "./compare.js";
import { drawRegion } from "./heatmap.js";
import { PanelController } from "./state.js";
import type { CaseStudyResult, DesignerForm, Family } from "./types.js";
import { DEFAULT_FORM, toRequestBody } from "./types.js";
import { validateForm } from "./validate.js";

const client = new ApiClient("");
const panel = new PanelController(client);

const FIELDS: (keyof DesignerForm)[] = [
  "p1", "p2", "mean1", "mean2", "sd1", "sd2", "corr",
  "armSd1", "armSd2", "controlSd", "sampleSize", "alpha",
  "cells", "reps", "seed",
];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function readForm(): DesignerForm {
  const form: DesignerForm = { ...DEFAULT_FORM };
  for (const field of FIELDS) {
    const input = el<HTMLInputElement>(field);
    (form as unknown as Record<string, unknown>)[field] = Number(input.value);
  }
  form.family = el<HTMLSelectElement>("family").value as Family;
  return form;
}

function showFieldErrors(errors: { field: string; message: string }[]): void {
  for (const field of FIELDS) {
    el(`err-${field}`).textContent = "";
  }
  for (const err of errors) {
    const slot = document.getElementById(`err-${err.field}`);
    if (slot) slot.textContent = err.message;
  }
}

function fmt(x: number | null | undefined, digits = 3): string {
  return x === null || x === undefined ? "-" : x.toFixed(digits);
}

function cutoffText(result: CaseStudyResult): string {
  const spec = result.spec as Record<string, unknown>;
  if (result.family === "arm-specific-cutoffs") {
    const t = spec["t_cutoffs"] as Record<string, number | null>;
    const parts = Object.entries(t).map(([k, v]) => `${k}: ${v === null ? "off" : v.toFixed(2)}`);
    return parts.join(", ");
  }
  if (typeof spec["critical"] === "number") {
    return (spec["critical"] as number).toFixed(2);
  }
  return `LP (${spec["cells"] ?? "?"} cells/axis)`;
}

function renderResult(result: CaseStudyResult, alpha: number): void {
  el("power-badge").textContent = `${fmt(result.power)} +- ${fmt(result.power_se, 4)}`;
  el("cutoff-badge").textContent = cutoffText(result);
  const ok = result.size <= alpha + 3 * Math.max(result.size_se, 1e-12);
  const badge = el("size-badge");
  badge.textContent = `size ${fmt(result.size, 4)} ${ok ? "ok" : "exceeds level"}`;
  badge.className = ok ? "badge good" : "badge bad";
  if (result.region) {
    for (const mask of [1, 2, 3]) {
      drawRegion(el<HTMLCanvasElement>(`region-${mask}`), result.region, mask);
    }
  }
}

async function submit(): Promise<void> {
  const form = readForm();
  const errors = validateForm(form);
  showFieldErrors(errors);
  el("retry-banner").hidden = true;
  if (errors.length > 0) {
    return;  // invalid forms never reach the network
  }
  el("status").textContent = "computing...";
  const outcome = await panel.submit(toRequestBody(form));
  if (outcome.kind === "stale" || outcome.kind === "aborted") {
    return;  // superseded; a newer submission owns the panel
  }
  if (outcome.kind === "error") {
    el("status").textContent = "";
    if (outcome.status === 422 && outcome.fieldPath) {
      el("server-error").textContent = `${outcome.fieldPath}: ${outcome.message}`;
    } else {
      el("server-error").textContent = outcome.message;
    }
    return;
  }
  if (outcome.kind === "network") {
    el("status").textContent = "";
    el("retry-banner").hidden = false;
    return;
  }
  el("server-error").textContent = "";
  el("status").textContent = `done (digest ${outcome.digest})`;
  renderResult(outcome.value.envelope.result, form.alpha);
}

async function compare(): Promise<void> {
  const form = readForm();
  const errors = validateForm(form);
  showFieldErrors(errors);
  if (errors.length > 0) return;
  el("compare-status").textContent = "comparing families...";
  const rows = await compareFamilies(client, toRequestBody(form));
  const table = el<HTMLTableElement>("compare-table");
  table.innerHTML =
    "<tr><th>family</th><th>power</th><th>se</th><th>size</th><th></th></tr>";
  for (const row of rows) {
    const tr = table.insertRow();
    tr.insertCell().textContent = row.family;
    tr.insertCell().textContent = fmt(row.power);
    tr.insertCell().textContent = fmt(row.powerSe, 4);
    tr.insertCell().textContent = fmt(row.size, 4);
    tr.insertCell().textContent = row.error ?? "";
    if (row.error) tr.className = "row-error";
  }
  el("compare-status").textContent = dominanceHolds(rows)
    ? "ordering: optimal >= arm-specific >= fixed-subset"
    : "warning: observed powers break the expected ordering";
}

async function solveRaw(): Promise<void> {
  const text = el<HTMLTextAreaElement>("raw-json").value;
  let body: unknown;
  try {
    body = JSON.parse(text);
  } catch (err) {
    el("raw-out").textContent = `invalid JSON: ${err}`;
    return;
  }
  try {
    const sent = await client.solve(body);
    if (sent.envelope.request_digest !== sent.sentDigest) {
      el("raw-out").textContent = "digest mismatch; response dropped";
      return;
    }
    const result = sent.envelope.result as { power?: number; extremal?: { is_extremal?: boolean } };
    el("raw-out").textContent = JSON.stringify(
      { power: result.power, extremal: result.extremal },
      null,
      1,
    );
  } catch (err) {
    el("raw-out").textContent = String(err);
  }
}

export function wire(): void {
  el("submit").addEventListener("click", () => void submit());
  el("compare").addEventListener("click", () => void compare());
  el("solve-raw").addEventListener("click", () => void solveRaw());
  el("retry").addEventListener("click", () => void submit());
  for (const field of FIELDS) {
    el(field).addEventListener("input", () => {
      panel.cancel();  // edits invalidate any in-flight request
      const slider = el<HTMLInputElement>(field);
      const echo = document.getElementById(`${field}-value`);
      if (echo) echo.textContent = slider.value;
    });
  }
  el("family").addEventListener("change", () => panel.cancel());
  void client.health().then(
    (h) => (el("health").textContent = `service ${h.status} (v${h.version})`),
    () => (el("health").textContent = "service unreachable"),
  );
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  wire();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wire);
}
