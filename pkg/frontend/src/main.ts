/** Browser wiring: scenario selection, canvas, drag, step button, panels.
 *
 * The server is the source of truth: a reload reconstructs the scene from
 * GET /sessions/{id} using the session id and scenario document stashed in
 * localStorage.
 */

import { SessionClient } from "./api.js";
import { SessionController } from "./controller.js";
import { drawScene, fitCamera, hitsHuman, toWorld, type Camera } from "./render.js";
import type { PlanDto, ScenarioDoc } from "./types.js";
import type { SceneViewModel } from "./viewmodel.js";

const STORAGE_KEY = "hrcplan-session";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function describePlan(plan: PlanDto): string {
  const steps = plan.steps
    .map((s) => `${s.task}:${s.agent === "human" ? "H" : "R"}`)
    .join(" → ");
  return `${steps}   (cost ${plan.total_cost.toFixed(4)})`;
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("scene");
  const ctx = canvas.getContext("2d")!;
  const stepButton = el<HTMLButtonElement>("step");
  const resetButton = el<HTMLButtonElement>("reset");
  const fileInput = el<HTMLInputElement>("upload");
  const caseStudyButton = el<HTMLButtonElement>("load-case-study");
  const banner = el<HTMLDivElement>("banner");
  const bannerText = el<HTMLSpanElement>("banner-text");
  const bannerClose = el<HTMLButtonElement>("banner-close");
  const roundCounter = el<HTMLSpanElement>("round-counter");
  const totalCost = el<HTMLSpanElement>("total-cost");
  const candidateCount = el<HTMLSpanElement>("candidate-count");
  const statusBadge = el<HTMLSpanElement>("status");
  const roundsPanel = el<HTMLUListElement>("rounds");
  const candidatesPanel = el<HTMLOListElement>("candidates");
  const apiBase = el<HTMLInputElement>("api-base");

  apiBase.value = localStorage.getItem("hrcplan-api") ?? "http://127.0.0.1:8000";

  let controller = new SessionController(new SessionClient(apiBase.value));
  let camera: Camera | null = null;
  let lastVm: SceneViewModel | null = null;

  function showError(message: string | null): void {
    banner.hidden = message === null;
    bannerText.textContent = message ?? "";
  }

  function render(vm: SceneViewModel): void {
    lastVm = vm;
    camera = fitCamera(vm, canvas.width, canvas.height);
    drawScene(ctx, vm, camera);
    roundCounter.textContent = String(vm.roundCounter);
    totalCost.textContent = vm.totalCost.toFixed(4);
    candidateCount.textContent = String(vm.candidateCount);
    statusBadge.textContent = vm.status;
    statusBadge.className = vm.status;
    stepButton.disabled = vm.status === "finished";

    roundsPanel.replaceChildren(
      ...vm.rounds.map((r) => {
        const li = document.createElement("li");
        li.textContent =
          `round ${r.round}: ${r.agent} → task ${r.task} ` +
          `(cost ${r.cost.toFixed(4)})`;
        li.className = r.agent;
        return li;
      }),
    );

    candidatesPanel.replaceChildren(
      ...vm.topCandidates.map((c) => {
        const li = document.createElement("li");
        li.textContent = describePlan(c);
        if (vm.bestPlan && JSON.stringify(c) === JSON.stringify(vm.bestPlan)) {
          li.className = "chosen";
        }
        return li;
      }),
    );

    showError(controller.lastError);
  }

  function rewire(): void {
    controller.onChange(render);
  }

  async function loadDoc(doc: ScenarioDoc): Promise<void> {
    try {
      await controller.loadScenario(doc);
      localStorage.setItem(
        STORAGE_KEY,
        JSON.stringify({ id: controller.id, scenario: doc }),
      );
    } catch {
      showError(controller.lastError);
    }
  }

  caseStudyButton.addEventListener("click", async () => {
    const resp = await fetch("./public/case_study.json");
    await loadDoc((await resp.json()) as ScenarioDoc);
  });

  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) {
      return;
    }
    try {
      await loadDoc(JSON.parse(await file.text()) as ScenarioDoc);
    } catch (err) {
      showError(`could not load scenario: ${err}`);
    }
  });

  stepButton.addEventListener("click", async () => {
    try {
      await controller.stepRound();
    } catch {
      showError(controller.lastError);
    }
  });

  resetButton.addEventListener("click", async () => {
    const doc = controller.scenarioDoc;
    if (doc) {
      await loadDoc(doc);
    }
  });

  apiBase.addEventListener("change", () => {
    localStorage.setItem("hrcplan-api", apiBase.value);
    controller = new SessionController(new SessionClient(apiBase.value));
    rewire();
    localStorage.removeItem(STORAGE_KEY);
  });

  bannerClose.addEventListener("click", () => controller.dismissError());

  // dragging the human marker: live preview locally, posts coalesced
  let dragging = false;
  canvas.addEventListener("pointerdown", (ev) => {
    if (!camera || !lastVm) {
      return;
    }
    const rect = canvas.getBoundingClientRect();
    if (hitsHuman(lastVm, camera, ev.clientX - rect.left, ev.clientY - rect.top)) {
      dragging = true;
      canvas.setPointerCapture(ev.pointerId);
    }
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!dragging || !camera) {
      return;
    }
    const rect = canvas.getBoundingClientRect();
    const [x, y] = toWorld(camera, ev.clientX - rect.left, ev.clientY - rect.top);
    void controller.dragHuman(x, y).catch(() => showError(controller.lastError));
  });
  const stopDrag = () => {
    dragging = false;
  };
  canvas.addEventListener("pointerup", stopDrag);
  canvas.addEventListener("pointercancel", stopDrag);

  rewire();

  // reload mid-session: reconstruct from the server
  const stored = localStorage.getItem(STORAGE_KEY);
  if (stored) {
    try {
      const { id, scenario } = JSON.parse(stored) as {
        id: string;
        scenario: ScenarioDoc;
      };
      void controller.attach(scenario, id).catch(() => {
        localStorage.removeItem(STORAGE_KEY);
      });
    } catch {
      localStorage.removeItem(STORAGE_KEY);
    }
  }
}

main();
