/** Request and response shapes of the papkit JSON service (v1). */

export type Family =
  | "optimal-lp"
  | "lr-known-j"
  | "wald-fixed-subset"
  | "arm-specific-cutoffs";

export const ALL_FAMILIES: Family[] = [
  "optimal-lp",
  "arm-specific-cutoffs",
  "wald-fixed-subset",
];

export interface DesignPayload {
  prior_mean: number[];
  prior_cov: number[][];
  arm_sds: number[];
  control_sd: number;
  sample_size: number;
}

export interface CaseStudyRequest {
  design: DesignPayload;
  availability: { independent: number[] };
  alpha: number;
  family: Family;
  cells?: number;
  reps?: number;
  eval_reps?: number;
  seed?: number;
}

export interface RegionPayload {
  t_axis: number[];
  masks: Record<string, number[] | number[][]>;
}

export interface CaseStudyResult {
  family: Family;
  spec: Record<string, unknown>;
  power: number;
  power_se: number;
  size: number;
  size_se: number;
  details?: Record<string, unknown>;
  region?: RegionPayload;
}

export interface Envelope<T> {
  result: T;
  diagnostics: Record<string, number>;
  request_digest: string;
}

export interface ApiError {
  code: string;
  field_path: string;
  message: string;
}

/** Two-arm designer form state; mirrors the server-side schema limits. */
export interface DesignerForm {
  p1: number;
  p2: number;
  mean1: number;
  mean2: number;
  sd1: number;
  sd2: number;
  corr: number;
  armSd1: number;
  armSd2: number;
  controlSd: number;
  sampleSize: number;
  alpha: number;
  family: Family;
  cells: number;
  reps: number;
  seed: number;
}

export const DEFAULT_FORM: DesignerForm = {
  p1: 0.5,
  p2: 0.7,
  mean1: 0.4,
  mean2: 0.6,
  sd1: 0.6,
  sd2: 0.75,
  corr: 0.1,
  armSd1: 4.0,
  armSd2: 4.0,
  controlSd: 3.0,
  sampleSize: 100,
  alpha: 0.05,
  family: "wald-fixed-subset",
  cells: 16,
  reps: 100000,
  seed: 1,
};

export function toRequestBody(form: DesignerForm): CaseStudyRequest {
  const cov01 = form.corr * form.sd1 * form.sd2;
  return {
    design: {
      prior_mean: [form.mean1, form.mean2],
      prior_cov: [
        [form.sd1 * form.sd1, cov01],
        [cov01, form.sd2 * form.sd2],
      ],
      arm_sds: [form.armSd1, form.armSd2],
      control_sd: form.controlSd,
      sample_size: form.sampleSize,
    },
    availability: { independent: [form.p1, form.p2] },
    alpha: form.alpha,
    family: form.family,
    cells: form.cells,
    reps: form.reps,
    seed: form.seed,
  };
}
