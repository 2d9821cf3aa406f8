"""Receding-horizon decision making and the exact full-horizon baseline.

Each round the planner searches all feasible depth-N candidates (orders and
agent assignments) for the minimum predicted cost, executes only the first
step, and re-plans from the updated state. The same depth-first
branch-and-bound drives both the per-round search and the full-horizon exact
solver: arc costs are nonnegative, so a partial sequence already costlier
than the incumbent cannot improve on it.

Tie-breaking is fixed and documented: among equal-cost candidates the
lexicographically smallest task-id order wins, then the assignment vector
with the human earliest. Results are therefore reproducible regardless of
traversal or parallelization details.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from typing import Any, Callable, Sequence

from .candidates import DEFAULT_CANDIDATE_CAP, CandidateSequence, count_candidates
from .cost import arc_cost, human_cost, robot_cost
from .errors import ConstraintViolationError, ResourceLimitError
from .model import (
    Agent,
    AssistantMode,
    Plan,
    PlanStep,
    Point,
    Scenario,
    WorldState,
    is_feasible_order,
)

logger = logging.getLogger(__name__)

# Exact search is exponential in the worst case; refuse silently degenerate
# runtimes beyond this many open tasks unless the caller raises the limit.
DEFAULT_EXACT_LIMIT = 12

MotionSource = Callable[[int, Point], Point]


@dataclass(frozen=True)
class RoundLog:
    """One planning round: what was considered, chosen, and executed."""

    round_index: int
    candidate_count: int
    best_plan: Plan
    executed: PlanStep
    human_pos_before: Point
    human_pos_after: Point
    robot_pos_before: Point
    robot_pos_after: Point
    wall_time: float

    def to_dict(self, include_timing: bool = False) -> dict[str, Any]:
        """Canonical log record. Timing is volatile and excluded by default
        so that replays with identical inputs serialize byte-identically."""
        d: dict[str, Any] = {
            "round_index": self.round_index,
            "candidate_count": self.candidate_count,
            "best_plan": self.best_plan.to_dict(),
            "executed": self.executed.to_dict(),
            "human_pos_before": list(self.human_pos_before),
            "human_pos_after": list(self.human_pos_after),
            "robot_pos_before": list(self.robot_pos_before),
            "robot_pos_after": list(self.robot_pos_after),
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d


@dataclass(frozen=True)
class DecisionMatrix:
    """Arc/assignment binary variables reconstructed from an executed run.

    Row and column 0 are the virtual start node; entry [i][j] refers to the
    arc from task i (or the start) to task j. ``objective`` is the cost of
    the encoded sequence under the scenario's cost model.
    """

    x: tuple[tuple[int, ...], ...]
    alpha: tuple[tuple[int, ...], ...]
    objective: float


def _apply_step(
    scenario: Scenario,
    human_pos: Point,
    robot_pos: Point,
    task_id: int,
    agent: Agent,
) -> tuple[Point, Point]:
    """Positions after executing one step: the acting agent moves to the task,
    the idle robot never moves, and in assistant mode the human shadows the
    robot to robot-executed task locations."""
    pos = scenario.task(task_id).position
    if agent is Agent.HUMAN:
        return pos, robot_pos
    if scenario.assistant_mode is AssistantMode.HUMAN_FOLLOWS_ROBOT:
        return pos, pos
    return human_pos, pos


def score_candidate(
    scenario: Scenario, state: WorldState, candidate: CandidateSequence
) -> Plan:
    """Roll the state forward through the candidate and price each arc from
    the acting agent's predicted position."""
    human_pos, robot_pos = state.human_pos, state.robot_pos
    steps = []
    for task_id, agent in zip(candidate.order, candidate.assignments):
        c = arc_cost((human_pos, robot_pos), scenario.task(task_id), agent, scenario.tau)
        steps.append(PlanStep(task=task_id, agent=agent, step_cost=c))
        human_pos, robot_pos = _apply_step(scenario, human_pos, robot_pos, task_id, agent)
    return Plan.from_steps(steps)


def _best_plan_search(scenario: Scenario, state: WorldState, depth: int) -> Plan:
    """Depth-first branch-and-bound over feasible depth-``depth`` candidates.

    Children are visited in tie-break order (task ids ascending, human before
    robot), partial costs prune only when strictly above the incumbent, and
    equal-cost completions are resolved by explicit key comparison, so the
    returned plan is exactly the tie-break minimum.
    """
    tau = scenario.tau
    remaining = sorted(state.remaining)
    done = set(state.completed_ids)
    order: list[int] = []
    agents: list[Agent] = []
    costs: list[float] = []

    best_cost = float("inf")
    best_key: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    best_steps: list[PlanStep] | None = None

    def rec(human_pos: Point, robot_pos: Point, cost_so_far: float) -> None:
        nonlocal best_cost, best_key, best_steps
        if len(order) == depth:
            key = (
                tuple(order),
                tuple(0 if a is Agent.HUMAN else 1 for a in agents),
            )
            if cost_so_far < best_cost or (cost_so_far == best_cost and key < best_key):
                best_cost = cost_so_far
                best_key = key
                best_steps = [
                    PlanStep(task=t, agent=a, step_cost=c)
                    for t, a, c in zip(order, agents, costs)
                ]
            return
        for t in remaining:
            if t in done or not scenario.precedence.of(t) <= done:
                continue
            task = scenario.task(t)
            agent_choices = (
                (Agent.ROBOT,) if task.unsafe_for_human else (Agent.HUMAN, Agent.ROBOT)
            )
            for agent in agent_choices:
                if agent is Agent.HUMAN:
                    c = human_cost(human_pos, task, tau)
                else:
                    c = robot_cost(robot_pos, task, tau)
                total = cost_so_far + c
                if total > best_cost:
                    continue
                order.append(t)
                agents.append(agent)
                costs.append(c)
                done.add(t)
                rec(*_apply_step(scenario, human_pos, robot_pos, t, agent), total)
                done.remove(t)
                costs.pop()
                agents.pop()
                order.pop()

    rec(state.human_pos, state.robot_pos, 0.0)
    assert best_steps is not None, "search found no feasible candidate"
    return Plan.from_steps(best_steps)


def plan_round(
    scenario: Scenario,
    state: WorldState,
    max_candidates: int = DEFAULT_CANDIDATE_CAP,
) -> tuple[Plan, int]:
    """Find the local-optimal plan over the next min(N, |remaining|) tasks.

    Returns the plan and the number of candidates it was chosen from.
    Raises ResourceLimitError when the candidate space exceeds the cap.
    """
    if not state.remaining:
        raise ValueError("plan_round requires at least one remaining task")
    depth = min(scenario.horizon, len(state.remaining))
    count = count_candidates(scenario, state, depth, cap=max_candidates)
    plan = _best_plan_search(scenario, state, depth)
    return plan, count


def step(
    scenario: Scenario,
    state: WorldState,
    human_pos_override: Point | None = None,
) -> tuple[RoundLog, WorldState]:
    """Plan one round and execute exactly the first step of the chosen plan.

    ``human_pos_override`` injects the human's real-time position before
    planning. The returned state is the next round's initial condition.
    """
    if human_pos_override is not None:
        state = replace(state, human_pos=(float(human_pos_override[0]), float(human_pos_override[1])))
    started = time.perf_counter()
    plan, count = plan_round(scenario, state)
    first = plan.steps[0]
    human_after, robot_after = _apply_step(
        scenario, state.human_pos, state.robot_pos, first.task, first.agent
    )
    new_state = WorldState(
        completed=state.completed + ((first.task, first.agent),),
        human_pos=human_after,
        robot_pos=robot_after,
        remaining=state.remaining - {first.task},
    )
    log = RoundLog(
        round_index=len(state.completed) + 1,
        candidate_count=count,
        best_plan=plan,
        executed=first,
        human_pos_before=state.human_pos,
        human_pos_after=human_after,
        robot_pos_before=state.robot_pos,
        robot_pos_after=robot_after,
        wall_time=time.perf_counter() - started,
    )
    return log, new_state


def run(
    scenario: Scenario,
    motion_source: MotionSource | None = None,
) -> tuple[list[RoundLog], float]:
    """Receding-horizon loop: step until no tasks remain.

    ``motion_source(round_index, current_human_pos)`` supplies the human's
    position at the start of each round (1-based); None means the human only
    moves by executing tasks (and by assisting, in assistant mode).
    """
    state = WorldState.initial(scenario)
    logs: list[RoundLog] = []
    total = 0.0
    while state.remaining:
        round_index = len(state.completed) + 1
        override = motion_source(round_index, state.human_pos) if motion_source else None
        log, state = step(scenario, state, human_pos_override=override)
        logs.append(log)
        total += log.executed.step_cost
        logger.debug(
            "round %d: executed task %d by %s (%.6f)",
            log.round_index, log.executed.task, log.executed.agent.value, log.executed.step_cost,
        )
    return logs, total


def solve_full_horizon(
    scenario: Scenario,
    state: WorldState | None = None,
    limit: int = DEFAULT_EXACT_LIMIT,
) -> Plan:
    """Exact minimum-cost complete plan over all feasible orders and
    assignments, by branch-and-bound. The oracle for optimality tests.

    Refuses more than ``limit`` open tasks: beyond that the exact search is
    not guaranteed to finish in reasonable time.
    """
    if state is None:
        state = WorldState.initial(scenario)
    open_tasks = len(state.remaining)
    if open_tasks > limit:
        raise ResourceLimitError(
            f"exact search limited to {limit} open tasks, scenario has {open_tasks}"
        )
    if open_tasks == 0:
        return Plan.from_steps(())
    return _best_plan_search(scenario, state, open_tasks)


def to_decision_matrix(
    scenario: Scenario,
    executed: Sequence[tuple[int, Agent]],
    positions_before: Sequence[tuple[Point, Point]] | None = None,
) -> DecisionMatrix:
    """Reconstruct the binary decision variables from an executed sequence and
    validate the sequencing constraints.

    Checks, in order: arc variables are binary with an empty diagonal
    (``arc_binary``), exactly T arcs are used (``arc_count``), the arcs form
    one chain from the virtual start through every task with per-node flow
    balance (``flow_conservation``), assignment variables are binary
    (``assignment_binary``), and every arc into an unsafe task is assigned to
    the robot (``unsafe_forcing``). The objective equals the executed
    sequence's total cost under the scenario's cost model, exactly.

    When the human moved exogenously during the run, the formulation's own
    position rollout no longer matches what happened; pass the logged
    (human_pos, robot_pos) observed before each step as ``positions_before``
    and the objective prices every arc from those positions instead.
    """
    t_count = scenario.task_count
    n = t_count + 1
    x = [[0] * n for _ in range(n)]
    alpha = [[0] * n for _ in range(n)]

    # Unsafe columns are forced for every predecessor, matching the planner's
    # safety rule; executed arcs then overwrite with what actually happened.
    for task in scenario.tasks:
        if task.unsafe_for_human:
            for i in range(n):
                if i != task.id:
                    alpha[i][task.id] = 1

    prev = 0
    for task_id, agent in executed:
        x[prev][task_id] = 1
        alpha[prev][task_id] = 1 if agent is Agent.ROBOT else 0
        prev = task_id

    _validate_matrices(scenario, x, alpha)

    order = [t for t, _ in executed]
    if not is_feasible_order(scenario, order):
        raise ValueError("executed sequence violates the precedence graph")
    if positions_before is not None and len(positions_before) != len(executed):
        raise ValueError("positions_before must provide one position pair per step")

    human_pos, robot_pos = scenario.human_start, scenario.robot_start
    objective = 0.0
    for i, (task_id, agent) in enumerate(executed):
        if positions_before is not None:
            human_pos, robot_pos = positions_before[i]
        objective += arc_cost(
            (human_pos, robot_pos), scenario.task(task_id), agent, scenario.tau
        )
        human_pos, robot_pos = _apply_step(scenario, human_pos, robot_pos, task_id, agent)

    return DecisionMatrix(
        x=tuple(tuple(row) for row in x),
        alpha=tuple(tuple(row) for row in alpha),
        objective=objective,
    )


def _validate_matrices(
    scenario: Scenario, x: list[list[int]], alpha: list[list[int]]
) -> None:
    n = scenario.task_count + 1
    for i in range(n):
        if x[i][i] != 0:
            raise ConstraintViolationError("arc_binary", f"self-arc at node {i}")
        for j in range(n):
            if x[i][j] not in (0, 1):
                raise ConstraintViolationError(
                    "arc_binary", f"x[{i}][{j}] = {x[i][j]} is not binary"
                )

    used = sum(sum(row) for row in x)
    if used != scenario.task_count:
        raise ConstraintViolationError(
            "arc_count",
            f"{used} arcs used, expected one per task ({scenario.task_count})",
        )

    inflow = [sum(x[i][j] for i in range(n)) for j in range(n)]
    outflow = [sum(x[i][j] for j in range(n)) for i in range(n)]
    if inflow[0] != 0 or outflow[0] != 1:
        raise ConstraintViolationError(
            "flow_conservation",
            f"virtual start must have no inflow and one outflow, got {inflow[0]}/{outflow[0]}",
        )
    sinks = []
    for j in range(1, n):
        if inflow[j] != 1:
            raise ConstraintViolationError(
                "flow_conservation", f"task {j} has inflow {inflow[j]}, expected 1"
            )
        if outflow[j] == 0:
            sinks.append(j)
        elif outflow[j] != 1:
            raise ConstraintViolationError(
                "flow_conservation", f"task {j} has outflow {outflow[j]}, expected 0 or 1"
            )
    if len(sinks) != 1:
        raise ConstraintViolationError(
            "flow_conservation", f"expected a unique terminal task, got {sinks}"
        )

    for i in range(n):
        for j in range(n):
            if alpha[i][j] not in (0, 1):
                raise ConstraintViolationError(
                    "assignment_binary", f"alpha[{i}][{j}] = {alpha[i][j]} is not binary"
                )
    for task in scenario.tasks:
        if task.unsafe_for_human:
            for i in range(n):
                if i != task.id and alpha[i][task.id] != 1:
                    raise ConstraintViolationError(
                        "unsafe_forcing",
                        f"arc {i}->{task.id} into an unsafe task must be assigned to the robot",
                    )
