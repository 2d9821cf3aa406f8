/** Pure construction of the scene view model from service responses.
 *
 * The view model is a projection: task geometry comes from the scenario
 * document the user loaded, everything decision-shaped (assignments, costs,
 * candidate orders, the chosen plan) comes verbatim from the service.
 */

import type {
  PlanDto,
  PlanResponseDto,
  RoundLogDto,
  ScenarioDoc,
  SessionDto,
} from "./types.js";

export interface TaskMarker {
  id: number;
  name: string;
  x: number;
  y: number;
  removed: boolean;
  unsafe: boolean;
}

export interface RoundPanelEntry {
  round: number;
  task: number;
  agent: string;
  cost: number;
}

export interface Arrow {
  fromX: number;
  fromY: number;
  toX: number;
  toY: number;
  agent: string;
}

export interface SceneViewModel {
  tasks: TaskMarker[];
  human: { x: number; y: number };
  robot: { x: number; y: number };
  candidatePaths: { x: number; y: number }[][];
  chosenArrow: Arrow | null;
  bestPlan: PlanDto | null;
  topCandidates: PlanDto[];
  candidateCount: number;
  roundCounter: number;
  totalCost: number;
  status: "active" | "finished";
  rounds: RoundPanelEntry[];
}

function taskPosition(scenario: ScenarioDoc, id: number): [number, number] {
  const task = scenario.tasks.find((t) => t.id === id);
  if (!task) {
    throw new Error(`scenario has no task ${id}`);
  }
  return task.position;
}

export function buildViewModel(
  scenario: ScenarioDoc,
  session: SessionDto,
  plan: PlanResponseDto | null,
): SceneViewModel {
  const removed = new Set(session.state.completed.map(([task]) => task));
  const tasks: TaskMarker[] = scenario.tasks.map((t) => ({
    id: t.id,
    name: t.name ?? `task-${t.id}`,
    x: t.position[0],
    y: t.position[1],
    removed: removed.has(t.id),
    unsafe: t.unsafe_for_human ?? false,
  }));

  const rounds: RoundPanelEntry[] = session.logs.map((log: RoundLogDto) => ({
    round: log.round_index,
    task: log.executed.task,
    agent: log.executed.agent,
    cost: log.executed.step_cost,
  }));

  // display aggregation of service-reported executed step costs
  let totalCost = 0;
  for (const log of session.logs) {
    totalCost += log.executed.step_cost;
  }

  const candidatePaths =
    plan?.orders.map((order) =>
      order.map((id) => {
        const [x, y] = taskPosition(scenario, id);
        return { x, y };
      }),
    ) ?? [];

  let chosenArrow: Arrow | null = null;
  const best = plan?.best_plan ?? null;
  if (best && best.steps.length > 0) {
    const first = best.steps[0]!;
    const from =
      first.agent === "human" ? session.state.human_pos : session.state.robot_pos;
    const [toX, toY] = taskPosition(scenario, first.task);
    chosenArrow = { fromX: from[0], fromY: from[1], toX, toY, agent: first.agent };
  }

  return {
    tasks,
    human: { x: session.state.human_pos[0], y: session.state.human_pos[1] },
    robot: { x: session.state.robot_pos[0], y: session.state.robot_pos[1] },
    candidatePaths,
    chosenArrow,
    bestPlan: best,
    topCandidates: plan?.top_candidates ?? [],
    candidateCount: plan?.candidate_count ?? 0,
    roundCounter: session.logs.length,
    totalCost,
    status: session.status,
    rounds,
  };
}
