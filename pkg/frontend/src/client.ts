/** Typed client for the papkit service.
 *
 * Bodies are serialized once; the digest of those exact bytes travels
 * with the reply so callers can match responses to requests.
 */

import { digestString } from "./digest.js";
import type { ApiError, CaseStudyRequest, CaseStudyResult, Envelope } from "./types.js";

export class ServiceError extends Error {
  readonly status: number;
  readonly detail: ApiError;

  constructor(status: number, detail: ApiError) {
    super(`${detail.code}: ${detail.message}`);
    this.status = status;
    this.detail = detail;
  }
}

export interface Sent<T> {
  envelope: Envelope<T>;
  sentDigest: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = fetch.bind(globalThis)) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  async health(): Promise<{ status: string; version: string }> {
    const res = await this.fetchFn(`${this.base}/api/v1/health`);
    return (await res.json()) as { status: string; version: string };
  }

  async casestudy(
    body: CaseStudyRequest,
    signal?: AbortSignal,
  ): Promise<Sent<CaseStudyResult>> {
    return this.post("/api/v1/casestudy", body, signal);
  }

  async solve(body: unknown, signal?: AbortSignal): Promise<Sent<Record<string, unknown>>> {
    return this.post("/api/v1/solve", body, signal);
  }

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<Sent<T>> {
    const payload = JSON.stringify(body);
    const sentDigest = await digestString(payload);
    const res = await this.fetchFn(`${this.base}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: payload,
      signal,
    });
    const data = await res.json();
    if (!res.ok) {
      throw new ServiceError(res.status, data as ApiError);
    }
    return { envelope: data as Envelope<T>, sentDigest };
  }
}
