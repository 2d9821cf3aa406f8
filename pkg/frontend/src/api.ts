/** Typed client for the session service.
 *
 * Every response keeps its raw body text alongside the parsed value so the
 * UI can prove that what it displays is exactly what the service sent.
 */

import type {
  CreateSessionDto,
  PlanResponseDto,
  ScenarioDoc,
  SessionDto,
  StateDto,
  StepResponseDto,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`service replied ${status}: ${detail}`);
  }
}

export interface Fetched<T> {
  value: T;
  raw: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class SessionClient {
  constructor(
    public readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<Fetched<T>> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const raw = await resp.text();
    if (!resp.ok) {
      let detail = raw;
      try {
        detail = JSON.parse(raw).detail ?? raw;
      } catch {
        // leave raw body as the detail
      }
      throw new ServiceError(resp.status, String(detail));
    }
    return { value: raw === "" ? (undefined as T) : (JSON.parse(raw) as T), raw };
  }

  createSession(doc: ScenarioDoc): Promise<Fetched<CreateSessionDto>> {
    return this.request("POST", "/sessions", doc);
  }

  getSession(id: string): Promise<Fetched<SessionDto>> {
    return this.request("GET", `/sessions/${id}`);
  }

  postHumanPosition(
    id: string,
    x: number,
    y: number,
  ): Promise<Fetched<{ state: StateDto }>> {
    return this.request("POST", `/sessions/${id}/human-position`, { x, y });
  }

  getPlan(id: string, limit = 20): Promise<Fetched<PlanResponseDto>> {
    return this.request("GET", `/sessions/${id}/plan?limit=${limit}`);
  }

  step(id: string): Promise<Fetched<StepResponseDto>> {
    return this.request("POST", `/sessions/${id}/step`);
  }

  deleteSession(id: string): Promise<Fetched<void>> {
    return this.request("DELETE", `/sessions/${id}`);
  }
}

/** Serializes mutating requests: at most one in flight, and rapid-fire drag
 * positions are coalesced so only the latest pending one is sent. */
export class MutationGate {
  private inFlight = false;
  private pendingDrag: { x: number; y: number } | null = null;

  constructor(
    private readonly post: (x: number, y: number) => Promise<void>,
  ) {}

  get busy(): boolean {
    return this.inFlight;
  }

  /** Queue a drag position; overwrites any not-yet-sent one. */
  drag(x: number, y: number): Promise<void> {
    this.pendingDrag = { x, y };
    return this.pump();
  }

  /** Run a non-drag mutation (e.g. step) through the same gate. */
  async exclusive<T>(action: () => Promise<T>): Promise<T> {
    while (this.inFlight) {
      await new Promise((resolve) => setTimeout(resolve, 5));
    }
    this.inFlight = true;
    try {
      return await action();
    } finally {
      this.inFlight = false;
      void this.pump();
    }
  }

  private async pump(): Promise<void> {
    if (this.inFlight) {
      return;
    }
    while (this.pendingDrag !== null) {
      const next = this.pendingDrag;
      this.pendingDrag = null;
      this.inFlight = true;
      try {
        await this.post(next.x, next.y);
      } finally {
        this.inFlight = false;
      }
    }
  }
}
