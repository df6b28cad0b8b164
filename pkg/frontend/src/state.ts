/** In-flight request management for one panel.
 *
 * At most one request is live per panel: submitting aborts the
 * predecessor, and a reply is surfaced only when its digest matches the
 * most recent submission, so stale responses are never rendered.
 */

import { ApiClient, ServiceError, Sent } from "./client.js";
import type { CaseStudyRequest, CaseStudyResult } from "./types.js";

export type Outcome<T> =
  | { kind: "ok"; value: T; digest: string }
  | { kind: "stale" }
  | { kind: "aborted" }
  | { kind: "error"; status: number; code: string; fieldPath: string; message: string }
  | { kind: "network"; message: string };

export class PanelController {
  private readonly client: ApiClient;
  private inflight: AbortController | null = null;
  busy = false;

  constructor(client: ApiClient) {
    this.client = client;
  }

  /** Abort any live request (used on form edits). */
  cancel(): void {
    if (this.inflight) {
      this.inflight.abort();
      this.inflight = null;
    }
    this.busy = false;
  }

  async submit(body: CaseStudyRequest): Promise<Outcome<Sent<CaseStudyResult>>> {
    this.cancel();
    const controller = new AbortController();
    this.inflight = controller;
    this.busy = true;
    let sent: Sent<CaseStudyResult>;
    try {
      sent = await this.client.casestudy(body, controller.signal);
    } catch (err) {
      if (controller.signal.aborted) {
        return { kind: "aborted" };
      }
      this.busy = false;
      if (err instanceof ServiceError) {
        return {
          kind: "error",
          status: err.status,
          code: err.detail.code,
          fieldPath: err.detail.field_path,
          message: err.detail.message,
        };
      }
      return { kind: "network", message: String(err) };
    }
    if (this.inflight !== controller) {
      return { kind: "stale" };  // a newer submission superseded this one
    }
    this.inflight = null;
    this.busy = false;
    if (sent.envelope.request_digest !== sent.sentDigest) {
      return { kind: "stale" };  // echo does not match what we sent
    }
    return { kind: "ok", value: sent, digest: sent.sentDigest };
  }
}
