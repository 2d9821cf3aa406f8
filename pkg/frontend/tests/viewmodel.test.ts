import { describe, expect, it } from "vitest";

import { buildViewModel } from "../src/viewmodel.js";
import type {
  PlanResponseDto,
  ScenarioDoc,
  SessionDto,
} from "../src/types.js";

const scenario: ScenarioDoc = {
  tasks: [
    { id: 1, name: "a", position: [0.1, 0.2], unsafe_for_human: false },
    { id: 2, name: "b", position: [0.4, 0.5], unsafe_for_human: true },
    { id: 3, position: [0.7, 0.1] },
  ],
  rules: [],
  human_start: [0, 0],
  robot_start: [1, 1],
};

function session(overrides: Partial<SessionDto> = {}): SessionDto {
  return {
    state: {
      completed: [],
      human_pos: [0, 0],
      robot_pos: [1, 1],
      remaining: [1, 2, 3],
    },
    logs: [],
    status: "active",
    ...overrides,
  };
}

const planResponse: PlanResponseDto = {
  status: "active",
  candidate_count: 12,
  orders: [
    [1, 2],
    [3, 1],
  ],
  best_plan: {
    steps: [
      { task: 3, agent: "robot", step_cost: 0.5 },
      { task: 1, agent: "human", step_cost: 0.25 },
    ],
    total_cost: 0.75,
  },
  top_candidates: [
    {
      steps: [{ task: 3, agent: "robot", step_cost: 0.5 }],
      total_cost: 0.5,
    },
  ],
};

describe("buildViewModel", () => {
  it("marks unsafe and removed tasks", () => {
    const vm = buildViewModel(
      scenario,
      session({
        state: {
          completed: [[1, "human"]],
          human_pos: [0.1, 0.2],
          robot_pos: [1, 1],
          remaining: [2, 3],
        },
      }),
      null,
    );
    expect(vm.tasks.map((t) => t.removed)).toEqual([true, false, false]);
    expect(vm.tasks.map((t) => t.unsafe)).toEqual([false, true, false]);
    expect(vm.tasks[2]!.name).toBe("task-3");
  });

  it("projects candidate orders onto task positions", () => {
    const vm = buildViewModel(scenario, session(), planResponse);
    expect(vm.candidatePaths).toEqual([
      [
        { x: 0.1, y: 0.2 },
        { x: 0.4, y: 0.5 },
      ],
      [
        { x: 0.7, y: 0.1 },
        { x: 0.1, y: 0.2 },
      ],
    ]);
  });

  it("draws the chosen arrow from the acting agent", () => {
    const vm = buildViewModel(scenario, session(), planResponse);
    // first step is robot-executed, so the arrow starts at the robot
    expect(vm.chosenArrow).toEqual({
      fromX: 1,
      fromY: 1,
      toX: 0.7,
      toY: 0.1,
      agent: "robot",
    });
  });

  it("passes plans through verbatim", () => {
    const vm = buildViewModel(scenario, session(), planResponse);
    expect(vm.bestPlan).toEqual(planResponse.best_plan);
    expect(vm.topCandidates).toEqual(planResponse.top_candidates);
    expect(vm.candidateCount).toBe(12);
  });

  it("accumulates executed costs and round entries from logs", () => {
    const vm = buildViewModel(
      scenario,
      session({
        logs: [
          {
            round_index: 1,
            candidate_count: 12,
            best_plan: planResponse.best_plan!,
            executed: { task: 3, agent: "robot", step_cost: 0.5 },
            human_pos_before: [0, 0],
            human_pos_after: [0.7, 0.1],
            robot_pos_before: [1, 1],
            robot_pos_after: [0.7, 0.1],
          },
          {
            round_index: 2,
            candidate_count: 6,
            best_plan: planResponse.best_plan!,
            executed: { task: 1, agent: "human", step_cost: 0.25 },
            human_pos_before: [0.7, 0.1],
            human_pos_after: [0.1, 0.2],
            robot_pos_before: [0.7, 0.1],
            robot_pos_after: [0.7, 0.1],
          },
        ],
      }),
      planResponse,
    );
    expect(vm.roundCounter).toBe(2);
    expect(vm.totalCost).toBeCloseTo(0.75, 12);
    expect(vm.rounds).toEqual([
      { round: 1, task: 3, agent: "robot", cost: 0.5 },
      { round: 2, task: 1, agent: "human", cost: 0.25 },
    ]);
  });

  it("handles the finished session's empty plan", () => {
    const vm = buildViewModel(
      scenario,
      session({ status: "finished" }),
      {
        status: "finished",
        candidate_count: 0,
        orders: [],
        best_plan: null,
        top_candidates: [],
      },
    );
    expect(vm.status).toBe("finished");
    expect(vm.chosenArrow).toBeNull();
    expect(vm.candidatePaths).toEqual([]);
  });
});
