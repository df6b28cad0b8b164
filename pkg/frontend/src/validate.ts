/** Client-side form validation mirroring the server schema.
 *
 * Invalid forms never produce a request; the errors map to field names
 * so inputs can be highlighted in place.
 */

import type { DesignerForm } from "./types.js";

export interface FieldError {
  field: keyof DesignerForm;
  message: string;
}

const MIN_REPS = 10000;

export function validateForm(form: DesignerForm): FieldError[] {
  const errors: FieldError[] = [];
  const prob = (field: keyof DesignerForm, v: number) => {
    if (!Number.isFinite(v) || v < 0 || v > 1) {
      errors.push({ field, message: "must lie in [0, 1]" });
    }
  };
  prob("p1", form.p1);
  prob("p2", form.p2);
  const positive = (field: keyof DesignerForm, v: number) => {
    if (!Number.isFinite(v) || v <= 0) {
      errors.push({ field, message: "must be positive" });
    }
  };
  positive("sd1", form.sd1);
  positive("sd2", form.sd2);
  positive("armSd1", form.armSd1);
  positive("armSd2", form.armSd2);
  if (!Number.isFinite(form.controlSd) || form.controlSd < 0) {
    errors.push({ field: "controlSd", message: "must be nonnegative" });
  }
  if (!Number.isFinite(form.corr) || Math.abs(form.corr) >= 1) {
    errors.push({ field: "corr", message: "must lie strictly inside (-1, 1)" });
  }
  if (!Number.isFinite(form.mean1)) {
    errors.push({ field: "mean1", message: "must be a number" });
  }
  if (!Number.isFinite(form.mean2)) {
    errors.push({ field: "mean2", message: "must be a number" });
  }
  if (!Number.isFinite(form.alpha) || form.alpha <= 0 || form.alpha >= 1) {
    errors.push({ field: "alpha", message: "must lie strictly between 0 and 1" });
  }
  if (!Number.isInteger(form.sampleSize) || form.sampleSize < 1) {
    errors.push({ field: "sampleSize", message: "must be a positive integer" });
  }
  if (!Number.isInteger(form.reps) || form.reps < MIN_REPS) {
    errors.push({ field: "reps", message: `must be an integer of at least ${MIN_REPS}` });
  }
  if (!Number.isInteger(form.cells) || form.cells < 4 || form.cells > 64) {
    errors.push({ field: "cells", message: "must be an integer in [4, 64]" });
  }
  if (!Number.isInteger(form.seed) || form.seed < 0) {
    errors.push({ field: "seed", message: "must be a nonnegative integer" });
  }
  return errors;
}
