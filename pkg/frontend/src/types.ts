/** Wire types for the session service. These mirror the JSON the service
 * emits; the UI never derives costs or feasibility on its own. */

export type AgentName = "human" | "robot";

export interface TaskDoc {
  id: number;
  name?: string;
  position: [number, number];
  effort_human?: number;
  effort_robot?: number;
  unsafe_for_human?: boolean;
}

export interface ScenarioDoc {
  tasks: TaskDoc[];
  rules?: { before: number[]; after: number[] }[];
  human_start: [number, number];
  robot_start: [number, number];
  tau?: number;
  horizon?: number;
  assistant_mode?: string;
}

export interface PlanStepDto {
  task: number;
  agent: AgentName;
  step_cost: number;
}

export interface PlanDto {
  steps: PlanStepDto[];
  total_cost: number;
}

export interface StateDto {
  completed: [number, AgentName][];
  human_pos: [number, number];
  robot_pos: [number, number];
  remaining: number[];
}

export interface RoundLogDto {
  round_index: number;
  candidate_count: number;
  best_plan: PlanDto;
  executed: PlanStepDto;
  human_pos_before: [number, number];
  human_pos_after: [number, number];
  robot_pos_before: [number, number];
  robot_pos_after: [number, number];
}

export interface SessionDto {
  state: StateDto;
  logs: RoundLogDto[];
  status: "active" | "finished";
}

export interface PlanResponseDto {
  status: "active" | "finished";
  candidate_count: number;
  orders: number[][];
  best_plan: PlanDto | null;
  top_candidates: PlanDto[];
}

export interface CreateSessionDto {
  id: string;
  state: StateDto;
}

export interface StepResponseDto {
  round_log: RoundLogDto;
  state: StateDto;
  status: "active" | "finished";
}
