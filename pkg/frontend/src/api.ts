/** Service client. One in-flight request at a time from the viewer's point
 * of view: every call takes a ticket, and responses that come back after a
 * newer request started are discarded by the caller via `isStale`. */

import { ErrorPayload, GraphDoc, HardenPayload, ReportPayload } from "./types.js";

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly violations: string[] = [],
  ) {
    super(message);
  }
}

export class ServiceClient {
  private ticket = 0;

  constructor(readonly baseUrl: string = "") {}

  nextTicket(): number {
    this.ticket += 1;
    return this.ticket;
  }

  isStale(ticket: number): boolean {
    return ticket !== this.ticket;
  }

  async health(): Promise<boolean> {
    try {
      const response = await fetch(`${this.baseUrl}/api/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  async analyze(graph: GraphDoc): Promise<ReportPayload> {
    return this.post<ReportPayload>("/api/analyze", { graph });
  }

  async whatif(
    graph: GraphDoc,
    overrides: Record<string, string>,
    removedNodes: string[],
  ): Promise<ReportPayload> {
    return this.post<ReportPayload>("/api/whatif", {
      graph,
      overrides,
      removedNodes,
    });
  }

  async harden(
    graph: GraphDoc,
    threshold?: number,
    maxRounds?: number,
  ): Promise<HardenPayload> {
    const body: Record<string, unknown> = { graph };
    if (threshold !== undefined) {
      body.threshold = threshold;
    }
    if (maxRounds !== undefined) {
      body.maxRounds = maxRounds;
    }
    return this.post<HardenPayload>("/api/harden", body);
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (err) {
      throw new ServiceError(`service unreachable: ${String(err)}`, 0);
    }
    if (!response.ok) {
      let payload: ErrorPayload = {};
      try {
        payload = (await response.json()) as ErrorPayload;
      } catch {
        // non-JSON error body: fall through with the status line only
      }
      const message = payload.error ?? payload.violations?.join("; ") ?? response.statusText;
      throw new ServiceError(message, response.status, payload.violations ?? []);
    }
    return (await response.json()) as T;
  }
}
