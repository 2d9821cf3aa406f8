/** Session orchestration, DOM-free so tests can drive it headlessly.
 *
 * Holds the loaded scenario document, talks to the service through the
 * mutation gate, and rebuilds the view model after every response. The raw
 * body of the most recent /plan response is retained for display fidelity
 * checks: the UI shows exactly what the service said.
 */

import { MutationGate, SessionClient, ServiceError } from "./api.js";
import { buildViewModel, type SceneViewModel } from "./viewmodel.js";
import type { PlanResponseDto, ScenarioDoc, SessionDto } from "./types.js";

export type Listener = (vm: SceneViewModel) => void;

export class SessionController {
  private scenario: ScenarioDoc | null = null;
  private sessionId: string | null = null;
  private session: SessionDto | null = null;
  private plan: PlanResponseDto | null = null;
  private listeners: Listener[] = [];
  private gate: MutationGate;

  lastPlanRaw: string | null = null;
  lastError: string | null = null;

  constructor(private readonly client: SessionClient) {
    this.gate = new MutationGate(async (x, y) => {
      await this.applyDrag(x, y);
    });
  }

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  get viewModel(): SceneViewModel | null {
    if (!this.scenario || !this.session) {
      return null;
    }
    return buildViewModel(this.scenario, this.session, this.plan);
  }

  get id(): string | null {
    return this.sessionId;
  }

  get scenarioDoc(): ScenarioDoc | null {
    return this.scenario;
  }

  private notify(): void {
    const vm = this.viewModel;
    if (vm) {
      for (const listener of this.listeners) {
        listener(vm);
      }
    }
  }

  private async fail<T>(work: Promise<T>): Promise<T> {
    try {
      const result = await work;
      this.lastError = null;
      return result;
    } catch (err) {
      this.lastError =
        err instanceof ServiceError ? err.message : `request failed: ${err}`;
      this.notify();
      throw err;
    }
  }

  /** Create a fresh session from a scenario document. */
  async loadScenario(doc: ScenarioDoc): Promise<void> {
    const created = await this.fail(this.client.createSession(doc));
    this.scenario = doc;
    this.sessionId = created.value.id;
    await this.refresh();
  }

  /** Rebuild everything from the server (also used after a page reload). */
  async attach(doc: ScenarioDoc, sessionId: string): Promise<void> {
    this.scenario = doc;
    this.sessionId = sessionId;
    await this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.sessionId) {
      return;
    }
    const session = await this.fail(this.client.getSession(this.sessionId));
    this.session = session.value;
    await this.refreshPlan();
    this.notify();
  }

  private async refreshPlan(): Promise<void> {
    if (!this.sessionId) {
      return;
    }
    const plan = await this.fail(this.client.getPlan(this.sessionId));
    this.plan = plan.value;
    this.lastPlanRaw = plan.raw;
  }

  /** Drag handler: coalesced through the mutation gate. */
  dragHuman(x: number, y: number): Promise<void> {
    return this.gate.drag(x, y);
  }

  private async applyDrag(x: number, y: number): Promise<void> {
    if (!this.sessionId || !this.session) {
      return;
    }
    const resp = await this.fail(
      this.client.postHumanPosition(this.sessionId, x, y),
    );
    this.session = { ...this.session, state: resp.value.state };
    await this.refreshPlan();
    this.notify();
  }

  /** Advance one round; disabled (no-op) once finished. */
  async stepRound(): Promise<void> {
    if (!this.sessionId || !this.session || this.session.status === "finished") {
      return;
    }
    await this.gate.exclusive(async () => {
      const resp = await this.fail(this.client.step(this.sessionId!));
      this.session = {
        state: resp.value.state,
        logs: [...this.session!.logs, resp.value.round_log],
        status: resp.value.status,
      };
      await this.refreshPlan();
      this.notify();
    });
  }

  dismissError(): void {
    this.lastError = null;
    this.notify();
  }
}
