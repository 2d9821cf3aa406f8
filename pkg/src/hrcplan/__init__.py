"""Receding-horizon task-sequence planner for human-robot collaborative
disassembly: scenario model, cost model, candidate enumeration, per-round
planning with an exact full-horizon baseline, simulation harness, CLI, and
an HTTP session service."""

from .candidates import (
    CandidateSequence,
    count_candidates,
    enumerate_assignments,
    enumerate_orders,
)
from .cost import ArcCost, arc_cost, arc_costs, human_cost, robot_cost
from .errors import (
    ConstraintViolationError,
    InvariantViolationError,
    ResourceLimitError,
    SafetyViolationError,
    ScenarioFormatError,
    ScenarioValidationError,
)
from .model import (
    Agent,
    AssistantMode,
    Plan,
    PlanStep,
    PrecedenceGraph,
    Scenario,
    Task,
    WorldState,
    is_feasible_order,
    load_scenario,
    load_scenario_file,
    ready_tasks,
    scenario_from_dict,
    scenario_to_dict,
)
from .planner import (
    DecisionMatrix,
    RoundLog,
    plan_round,
    run,
    score_candidate,
    solve_full_horizon,
    step,
    to_decision_matrix,
)
from .sim import (
    CASE_STUDY_SEQUENCE,
    BatchConfig,
    BatchReport,
    MotionKind,
    MotionModel,
    case_study_scenario,
    generate_scenario,
    motion_source_for,
    next_human_position,
    run_batch,
    run_case_study,
)

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "ArcCost",
    "AssistantMode",
    "BatchConfig",
    "BatchReport",
    "CASE_STUDY_SEQUENCE",
    "CandidateSequence",
    "ConstraintViolationError",
    "DecisionMatrix",
    "InvariantViolationError",
    "MotionKind",
    "MotionModel",
    "Plan",
    "PlanStep",
    "PrecedenceGraph",
    "ResourceLimitError",
    "RoundLog",
    "SafetyViolationError",
    "Scenario",
    "ScenarioFormatError",
    "ScenarioValidationError",
    "Task",
    "WorldState",
    "arc_cost",
    "arc_costs",
    "case_study_scenario",
    "count_candidates",
    "enumerate_assignments",
    "enumerate_orders",
    "generate_scenario",
    "human_cost",
    "is_feasible_order",
    "load_scenario",
    "load_scenario_file",
    "motion_source_for",
    "next_human_position",
    "plan_round",
    "ready_tasks",
    "robot_cost",
    "run",
    "run_batch",
    "run_case_study",
    "scenario_from_dict",
    "scenario_to_dict",
    "score_candidate",
    "solve_full_horizon",
    "step",
    "to_decision_matrix",
]
