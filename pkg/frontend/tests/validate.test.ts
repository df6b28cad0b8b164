import { describe, expect, it } from "vitest";

import { DEFAULT_FORM } from "../src/types.js";
import { validateForm } from "../src/validate.js";

describe("form validation", () => {
  it("accepts the default form", () => {
    expect(validateForm(DEFAULT_FORM)).toEqual([]);
  });

  it("rejects probabilities outside [0, 1]", () => {
    const errors = validateForm({ ...DEFAULT_FORM, p1: 1.2 });
    expect(errors).toHaveLength(1);
    expect(errors[0].field).toBe("p1");
  });

  it("rejects correlation outside the open interval", () => {
    for (const corr of [1.5, 1.0, -1.0, Number.NaN]) {
      const errors = validateForm({ ...DEFAULT_FORM, corr });
      expect(errors.map((e) => e.field)).toContain("corr");
    }
    expect(validateForm({ ...DEFAULT_FORM, corr: 0.95 })).toEqual([]);
  });

  it("rejects nonpositive standard deviations", () => {
    const errors = validateForm({ ...DEFAULT_FORM, sd1: 0 });
    expect(errors.map((e) => e.field)).toContain("sd1");
  });

  it("rejects alpha at the boundary", () => {
    expect(validateForm({ ...DEFAULT_FORM, alpha: 0 })).not.toEqual([]);
    expect(validateForm({ ...DEFAULT_FORM, alpha: 1 })).not.toEqual([]);
  });

  it("enforces the server's minimum rep count", () => {
    const errors = validateForm({ ...DEFAULT_FORM, reps: 5000 });
    expect(errors.map((e) => e.field)).toContain("reps");
  });

  it("collects several errors at once", () => {
    const errors = validateForm({ ...DEFAULT_FORM, p1: -0.1, sd2: -1, corr: 2 });
    expect(errors.map((e) => e.field).sort()).toEqual(["corr", "p1", "sd2"]);
  });
});
